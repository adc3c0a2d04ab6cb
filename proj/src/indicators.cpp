#include "mcf/indicators.hpp"

#include "mcf/errors.hpp"
#include "mcf/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mcf {

namespace {

constexpr int kEdges[3][2] = {{0, 1}, {0, 2}, {1, 2}};

template <class T>
T dist_w(const T& r) {
    // 3r^2 - 2r^3, constant beyond the far vertex
    if (val(r) >= 1.0) return T(1.0);
    return (r * r) * (3.0 - 2.0 * r);
}

template <class T>
T lambda_t(const IndicatorSet& ind, const T& beta) {
    const auto& g = ind.spec.geom;
    return blend_ramp((beta - g.beta_n) * (1.0 / (g.beta_max() - g.beta_n)), ind.lambda_blend);
}

template <class T>
T eta_t(const IndicatorSet& ind, const T& s) {
    const double ru = ind.spec.geom.r_u;
    return 1.0 - blend_ramp((s - ru) * (1.0 / (1.0 - 2.0 * ru)), ind.eta_blend);
}

template <class T>
T norm2(const T& x, const T& y, const Point& a) {
    T dx = x - a[0], dy = y - a[1];
    return dx * dx + dy * dy;
}

template <class T>
T seg_dist(const T& x, const T& y, const Point& a, const Point& b) {
    double t = (val(x) - a[0]) * (b[0] - a[0]) + (val(y) - a[1]) * (b[1] - a[1]);
    // at the endpoint itself the sqrt jet is 0 * inf; psi is flat there, so return a constant
    if (t <= 0.0) return val(norm2(x, y, a)) > 0.0 ? sqrt(norm2(x, y, a)) : T(0.0);
    if (t >= 1.0) return val(norm2(x, y, b)) > 0.0 ? sqrt(norm2(x, y, b)) : T(0.0);
    T cr = (x - a[0]) * (b[1] - a[1]) - (y - a[1]) * (b[0] - a[0]);
    return val(cr) < 0.0 ? -cr : cr;
}


// Generalized angle: equals beta^i_j inside the 60-degree wedge at alpha_i.
template <class T>
T beta_hat(const T& d_own, const T& d_other) {
    if (val(d_other) <= 0.0) return T(0.0);
    T rho = d_own / d_other;
    return atan2(rho * (std::sqrt(3.0) / 2.0), 1.0 + 0.5 * rho);
}

// psi_1..psi_3 on the closed triangle.
template <class T>
void psi3(const IndicatorSet& ind, const T& x, const T& y, T* out) {
    const auto& g = ind.spec.geom;
    double dv[3];
    T d[3];
    int em = 0;
    for (int e = 0; e < 3; ++e) {
        d[e] = seg_dist(x, y, g.vertices[kEdges[e][0]], g.vertices[kEdges[e][1]]);
        dv[e] = val(d[e]);
        if (dv[e] < dv[em]) em = e;
    }
    const int i = kEdges[em][0], j = kEdges[em][1], k = 3 - i - j;
    const auto& ai = g.vertices[i];
    const auto& aj = g.vertices[j];
    T t = (x - ai[0]) * (aj[0] - ai[0]) + (y - ai[1]) * (aj[1] - ai[1]);
    if (val(t) < 0.0) t = T(0.0);
    if (val(t) > 1.0) t = T(1.0);
    double ri2 = val(norm2(x, y, ai)), rj2 = val(norm2(x, y, aj));
    T ri = ri2 > 0.0 ? sqrt(norm2(x, y, ai)) : T(0.0);
    T rj = rj2 > 0.0 ? sqrt(norm2(x, y, aj)) : T(0.0);
    T ei = eta_t(ind, t), ej = eta_t(ind, 1.0 - t);
    T Di = dist_w(ri), Dj = dist_w(rj);
    T Ei = ei * (1.0 - Di) + ej * Dj;
    T Ej = ei * Di + ej * (1.0 - Dj);
    // d to the edges (i,k) and (j,k)
    auto edge_index = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return a == 0 ? (b == 1 ? 0 : 1) : 2;
    };
    T dik = d[edge_index(i, k)], djk = d[edge_index(j, k)];
    T cut_j = 1.0 - lambda_t(ind, beta_hat(d[em], dik));
    T cut_i = 1.0 - lambda_t(ind, beta_hat(d[em], djk));
    out[i] = cut_i * Ei;
    out[j] = cut_j * Ej;
    out[k] = T(0.0);
}

void eval(const IndicatorSet& ind, const double* u, double* v, double* jac) {
    const int n = ind.n();
    if (n == 2) {
        double x = u[0];
        if (x < -ind.outside_tol || x > 1.0 + ind.outside_tol) throw DomainError("psi: point outside the simplex");
        x = std::clamp(x, 0.0, 1.0);
        double D = x * x * (3.0 - 2.0 * x), dD = 6.0 * x * (1.0 - x);
        if (v) {
            v[0] = 1.0 - D;
            v[1] = D;
            v[2] = 0.0;
        }
        if (jac) {
            jac[0] = -dD;
            jac[1] = dD;
            jac[2] = 0.0;
        }
        return;
    }
    double p[2];
    project_simplex(ind.spec, u, p);
    if (std::hypot(p[0] - u[0], p[1] - u[1]) > ind.outside_tol) throw DomainError("psi: point outside the simplex");
    if (!jac) {
        double o[3];
        psi3(ind, p[0], p[1], o);
        v[0] = o[0]; v[1] = o[1]; v[2] = o[2];
        v[3] = 1.0 - o[0] - o[1] - o[2];
        return;
    }
    Jet o[3];
    psi3(ind, Jet::var_x(p[0]), Jet::var_y(p[1]), o);
    for (int r = 0; r < 3; ++r) {
        if (v) v[r] = o[r].v;
        jac[2 * r] = o[r].gx;
        jac[2 * r + 1] = o[r].gy;
    }
    if (v) v[3] = 1.0 - o[0].v - o[1].v - o[2].v;
    jac[6] = -(o[0].gx + o[1].gx + o[2].gx);
    jac[7] = -(o[0].gy + o[1].gy + o[2].gy);
}

} // namespace

IndicatorSet make_indicators(const PotentialSpec& spec) {
    IndicatorSet ind;
    ind.spec = spec;
    if (spec.geom.n_phases != 2 && spec.geom.n_phases != 3)
        throw ConfigError("indicator construction implemented for N in {2,3}");
    return ind;
}

double lambda_fn(const IndicatorSet& ind, double beta, double* dlam) {
    const auto& g = ind.spec.geom;
    if (beta < 0.0 || beta > g.beta_max() + 1e-12) throw DomainError("lambda: angle out of range");
    Jet b = Jet::var_x(beta);
    Jet l = lambda_t(ind, b);
    if (dlam) *dlam = l.gx;
    return l.v;
}

double eta_fn(const IndicatorSet& ind, double s, double* deta) {
    if (s < 0.0 || s > 1.0) throw DomainError("eta: argument out of range");
    Jet e = eta_t(ind, Jet::var_x(s));
    if (deta) *deta = e.gx;
    return e.v;
}

void psi(const IndicatorSet& ind, const double* u, double* out) { eval(ind, u, out, nullptr); }

void dpsi(const IndicatorSet& ind, const double* u, double* out) { eval(ind, u, nullptr, out); }

void psi_dpsi(const IndicatorSet& ind, const double* u, double* v, double* jac) { eval(ind, u, v, jac); }

double verify_a4(const IndicatorSet& ind, const double* u, double* grad_margin) {
    const int n = ind.n(), d = ind.dim();
    double jac[8];
    dpsi(ind, u, jac);
    const double w2 = 2.0 * eval_W(ind.spec, u);
    int i = 0, j = 1;
    if (n == 3) {
        auto lab = classify(ind.spec.geom, Point(u, u + 2));
        i = lab.i;
        j = lab.j;
    }
    double gij[2] = {0, 0}, g0[2] = {0, 0};
    for (int c = 0; c < d; ++c) {
        gij[c] = jac[j * d + c] - jac[i * d + c];
        g0[c] = jac[n * d + c];
    }
    double a = 0, b = 0, cross = 0;
    for (int c = 0; c < d; ++c) {
        a += 0.25 * gij[c] * gij[c];
        b += g0[c] * g0[c] / 12.0;
        cross += gij[c] * g0[c];
    }
    const double del = ind.delta_a4;
    double lhs = a + (1.0 + del) * b + del * std::abs(cross);
    if (grad_margin) {
        double m = INFINITY;
        for (int r = 0; r < n; ++r) {
            double s = 0;
            for (int c = 0; c < d; ++c) s += jac[r * d + c] * jac[r * d + c];
            m = std::min(m, ind.c_grad * std::sqrt(w2) - std::sqrt(s));
        }
        *grad_margin = m;
    }
    return w2 - lhs;
}

} // namespace mcf
