#include "mcf/potential.hpp"

#include "mcf/errors.hpp"
#include "mcf/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mcf {

namespace {

struct V2 {
    double x, y;
};

constexpr int kEdges[3][2] = {{0, 1}, {0, 2}, {1, 2}};

V2 vert(const PotentialSpec& sp, int k) {
    const auto& a = sp.geom.vertices[k];
    return {a[0], a.size() > 1 ? a[1] : 0.0};
}

template <class T>
T w_edge(const T& r) {
    T s = r * (1.0 - r);
    return 18.0 * (s * s);
}

double seg_dist_val(double x, double y, V2 a, V2 b) {
    double t = (x - a.x) * (b.x - a.x) + (y - a.y) * (b.y - a.y);
    t = std::clamp(t, 0.0, 1.0);
    double px = a.x + t * (b.x - a.x) - x, py = a.y + t * (b.y - a.y) - y;
    return std::sqrt(px * px + py * py);
}

template <class T>
T seg_dist(const T& x, const T& y, V2 a, V2 b) {
    double t = (val(x) - a.x) * (b.x - a.x) + (val(y) - a.y) * (b.y - a.y);
    if (t <= 0.0) return sqrt((x - a.x) * (x - a.x) + (y - a.y) * (y - a.y));
    if (t >= 1.0) return sqrt((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y));
    T cr = (x - a.x) * (b.y - a.y) - (y - a.y) * (b.x - a.x);
    return val(cr) < 0.0 ? -cr : cr;
}

template <class T>
T sigma_fn(const PotentialSpec& sp, const T& beta) {
    const double bn = sp.geom.beta_n, bm = sp.geom.beta_max();
    const double sb = std::sin(bn), s1 = std::sin(2.0 * bn), span = bm - bn;
    double b = val(beta);
    if (b <= bn) {
        T s = sin(beta);
        return s * s;
    }
    if (b >= bm) return T(sb * sb + 0.5 * s1 * span);
    T dl = beta - bn;
    return sb * sb + s1 * dl - (s1 / (2.0 * span)) * (dl * dl);
}

template <class T>
T vertex_value() {
    if constexpr (std::is_same_v<T, double>) {
        return 0.0;
    } else {
        Jet j(0.0);
        j.hxx = j.hyy = 36.0;
        return j;
    }
}

// W on the closed triangle (N = 3).
template <class T>
T w3_interior(const PotentialSpec& sp, const T& x, const T& y) {
    V2 A[3] = {vert(sp, 0), vert(sp, 1), vert(sp, 2)};
    double dv[3];
    int em = 0;
    for (int e = 0; e < 3; ++e) {
        dv[e] = seg_dist_val(val(x), val(y), A[kEdges[e][0]], A[kEdges[e][1]]);
        if (dv[e] < dv[em]) em = e;
    }
    const double dn = sp.tube_radius();
    T R(0.0);
    if (dv[em] >= sp.floor_lo * dn) {
        T d[3];
        for (int e = 0; e < 3; ++e) d[e] = seg_dist(x, y, A[kEdges[e][0]], A[kEdges[e][1]]);
        T sum(0.0);
        for (int e = 0; e < 3; ++e) {
            T q = d[em] / d[e];
            T q2 = q * q;
            T q4 = q2 * q2;
            sum = sum + q4 * q4;
        }
        T ds = d[em] * powd(sum, -0.125);
        R = smoothstep5((ds - sp.floor_lo * dn) / ((sp.floor_hi - sp.floor_lo) * dn));
    }
    if (val(R) >= 1.0) return T(sp.f_max);

    int i = kEdges[em][0], j = kEdges[em][1];
    double ri = std::hypot(val(x) - A[i].x, val(y) - A[i].y);
    double rj = std::hypot(val(x) - A[j].x, val(y) - A[j].y);
    int a = ri <= rj ? i : j;
    int b = ri <= rj ? j : i;
    double ra_v = std::min(ri, rj);
    V2 e = {A[b].x - A[a].x, A[b].y - A[a].y};
    T ex = x - A[a].x, ey = y - A[a].y;
    T along = ex * e.x + ey * e.y;
    T cr = ex * e.y - ey * e.x;
    if (val(cr) < 0.0) cr = -cr;
    T t = along;
    if (val(t) < 0.0) t = T(0.0);
    if (val(t) > 1.0) t = T(1.0);
    T a_tube = w_edge(t) * (1.0 + sp.c_n * (cr * cr));
    T amix;
    if (ra_v >= sp.geom.r_u + sp.blend_width) {
        amix = a_tube;
    } else {
        // below this radius W and dW are under 1e-75; the jets of sqrt/atan2 would overflow
        if (ra_v < 1e-40) return vertex_value<T>();
        T ra = sqrt(ex * ex + ey * ey);
        T beta = atan2(cr, along);
        T om = sp.omega_max * smoothstep5(beta * (1.0 / sp.geom.beta_n));
        T a_ball = w_edge(ra) * (1.0 + om + sp.c_n * (ra * ra) * sigma_fn(sp, beta));
        T bl = smoothstep5((ra - sp.geom.r_u) * (1.0 / sp.blend_width));
        amix = (1.0 - bl) * a_ball + bl * a_tube;
    }
    return (1.0 - R) * amix + R * sp.f_max;
}

bool inside3(const PotentialSpec& sp, double x, double y) {
    auto lam = barycentric(sp.geom, Point{x, y});
    return lam[0] >= 0.0 && lam[1] >= 0.0 && lam[2] >= 0.0;
}

void nearest3(const PotentialSpec& sp, double x, double y, double& px, double& py) {
    double best = INFINITY;
    for (auto& e : kEdges) {
        V2 a = vert(sp, e[0]), b = vert(sp, e[1]);
        double t = std::clamp((x - a.x) * (b.x - a.x) + (y - a.y) * (b.y - a.y), 0.0, 1.0);
        double qx = a.x + t * (b.x - a.x), qy = a.y + t * (b.y - a.y);
        double d = std::hypot(x - qx, y - qy);
        if (d < best) {
            best = d;
            px = qx;
            py = qy;
        }
    }
}

// Full evaluation in 2D coordinates (N = 2 uses y = 0 and ignores the y row).
double eval_all(const PotentialSpec& sp, double x, double y, double* g, double* h) {
    const int n = sp.geom.n_phases;
    double px = x, py = y;
    bool outside;
    if (n == 2) {
        px = std::clamp(x, 0.0, 1.0);
        py = 0.0;
        outside = px != x;
    } else {
        outside = !inside3(sp, x, y);
        if (outside) nearest3(sp, x, y, px, py);
    }
    double w, gx = 0, gy = 0, hxx = 0, hxy = 0, hyy = 0;
    if (g || h) {
        Jet jx = Jet::var_x(px), jy = Jet::var_y(py);
        Jet jw = n == 2 ? w_edge(jx) : w3_interior(sp, jx, jy);
        w = jw.v;
        gx = jw.gx; gy = jw.gy; hxx = jw.hxx; hxy = jw.hxy; hyy = jw.hyy;
        if (n == 2 && px == 0.0 && x == 0.0) hxx = 36.0;
    } else {
        w = n == 2 ? w_edge(px) : w3_interior(sp, px, py);
    }
    if (outside) {
        double L = sp.lipschitz_ext, dx = x - px, dy = y - py;
        if (!(g || h)) {
            // gradient at the projection is needed for the value as well
            Jet jw = n == 2 ? w_edge(Jet::var_x(px)) : w3_interior(sp, Jet::var_x(px), Jet::var_y(py));
            gx = jw.gx;
            gy = jw.gy;
        }
        w += gx * dx + gy * dy + 0.5 * L * (dx * dx + dy * dy);
        gx += L * dx;
        gy += L * dy;
        hxx += L;
        hyy += L;
    }
    const double s = sp.scale;
    if (g) {
        g[0] = s * gx;
        if (n >= 3) g[1] = s * gy;
    }
    if (h) {
        if (n == 2) {
            h[0] = s * hxx;
        } else {
            h[0] = s * hxx; h[1] = s * hxy; h[2] = s * hxy; h[3] = s * hyy;
        }
    }
    return s * w;
}

void require_supported(const PotentialSpec& sp) {
    if (sp.geom.n_phases != 2 && sp.geom.n_phases != 3)
        throw ConfigError("potential construction implemented for N in {2,3}");
}

} // namespace

double PotentialSpec::tube_radius() const { return geom.r_u * std::sin(geom.beta_n); }

PotentialSpec make_potential(const SimplexGeometry& geom) {
    PotentialSpec sp;
    sp.geom = geom;
    require_supported(sp);
    const int n = geom.n_phases;
    const double ru = geom.r_u, bn = geom.beta_n;
    sp.c_omega = 16.0 * (n - 2) * (n - 2) + 8.0;
    sp.omega_max = sp.c_omega + 1.0;
    const double s2 = std::sin(bn) * std::sin(bn), c2b = std::cos(bn) * std::cos(bn);
    const double t2 = n >= 3 ? s2 / c2b : 0.0;
    sp.c1 = 5.0 / (2.0 * ru * (1.0 - ru)) + 25.0 * s2 / (16.0 * (1.0 - ru) * (1.0 - ru));
    sp.c2 = 2.0 * sp.L_gamma / std::sqrt(2.0 * sp.c_gamma) + t2 * sp.L_gamma * sp.L_gamma / (2.0 * sp.c_gamma);
    sp.c_n = 2.0 * (sp.c1 + sp.c2 / (ru * ru * c2b) + sp.c1 * sp.c2 * t2);
    sp.m_w = 1.0 + 4.0 * (n - 2) * ru;
    sp.c_int = 2.0 * (4.0 / 3.0) * sp.c_m * sp.c_m * sp.m_w * sp.m_w;
    sp.f_max = 1.05 * sp.c_int * (9.0 / 8.0);
    return sp;
}

double edge_potential(double s) {
    if (std::abs(s) > 1.0) throw DomainError("edge parameter outside [-1,1]");
    double a = 1.0 - s * s;
    return 9.0 / 8.0 * a * a;
}

double dist_w_edge(const PotentialSpec& spec, int i, int j, double r) {
    if (i == j || i < 0 || j < 0 || i >= spec.geom.n_phases || j >= spec.geom.n_phases)
        throw DomainError("invalid edge");
    if (r < 0.0 || r > 1.0) throw DomainError("arclength outside [0,1]");
    return r * r * (3.0 - 2.0 * r);
}

double omega_fn(const PotentialSpec& spec, double beta) {
    return spec.omega_max * smoothstep5(beta / spec.geom.beta_n);
}

double eval_W(const PotentialSpec& spec, const double* u) {
    return eval_all(spec, u[0], spec.geom.n_phases >= 3 ? u[1] : 0.0, nullptr, nullptr);
}

void eval_dW(const PotentialSpec& spec, const double* u, double* grad) {
    eval_all(spec, u[0], spec.geom.n_phases >= 3 ? u[1] : 0.0, grad, nullptr);
}

double eval_W_hess(const PotentialSpec& spec, const double* u, double* grad, double* hess) {
    return eval_all(spec, u[0], spec.geom.n_phases >= 3 ? u[1] : 0.0, grad, hess);
}

void project_simplex(const PotentialSpec& spec, const double* u, double* p) {
    if (spec.geom.n_phases == 2) {
        p[0] = std::clamp(u[0], 0.0, 1.0);
        return;
    }
    if (inside3(spec, u[0], u[1])) {
        p[0] = u[0];
        p[1] = u[1];
        return;
    }
    nearest3(spec, u[0], u[1], p[0], p[1]);
}

} // namespace mcf
