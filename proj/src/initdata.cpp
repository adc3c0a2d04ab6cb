#include "mcf/initdata.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mcf {

namespace {

constexpr double kPi = std::numbers::pi;
const double kCos45 = std::sqrt(0.5);
const double kCos15 = std::cos(kPi / 12);
const double kSin15 = std::sin(kPi / 12);

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
Vec2 rot(const Vec2& v, double a) {
    double c = std::cos(a), s = std::sin(a);
    return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}
Vec2 normalize(const Vec2& v) {
    double l = std::hypot(v[0], v[1]);
    return {v[0] / l, v[1] / l};
}

// projection of y onto the segment [0, len] * q; returns parameter and distance
double seg_proj(const Vec2& y, const Vec2& q, double len, double* d) {
    double p = std::clamp(dot(y, q), 0.0, len);
    *d = std::hypot(y[0] - p * q[0], y[1] - p * q[1]);
    return p;
}

Point mix(const Point& a, const Point& b, double w) {
    // (1 - w) a + w b
    Point o(a.size());
    for (size_t c = 0; c < a.size(); ++c) o[c] = (1.0 - w) * a[c] + w * b[c];
    return o;
}

} // namespace

int WedgeDecomposition::cone(const Vec2& x) const {
    Vec2 y{x[0] - T[0], x[1] - T[1]};
    double a = std::hypot(y[0], y[1]);
    for (int k = 0; k < 3; ++k)
        if (dot(y, e[k]) >= a * kCos45) return k;
    int best = 0;
    double bd = -2.0;
    for (int j = 0; j < 3; ++j) {
        double v = dot(y, bisector[j]);
        if (v > bd) {
            bd = v;
            best = j;
        }
    }
    return 3 + best;
}

WedgeDecomposition::Locus WedgeDecomposition::locate(const Vec2& x) const {
    Vec2 y{x[0] - T[0], x[1] - T[1]};
    double a = std::hypot(y[0], y[1]);
    Locus L;
    if (a >= r) {
        for (int k = 0; k < 3; ++k)
            if (dot(y, e[k]) > 0.0 && std::abs(dot(y, n[k])) <= rho) {
                L.region = Region::Layer;
                L.pair = k;
                return L;
            }
        // pure phase: sector between consecutive rays
        int c = cone(x);
        if (c >= 3) {
            L.phase = c - 3;
        } else {
            L.pair = c;
            L.phase = dot(y, n[c]) >= 0 ? pair_j(c) : pair_i(c);
        }
        L.region = Region::Pure;
        return L;
    }
    int c = cone(x);
    if (c < 3) {
        L.pair = c;
        double sd = dot(y, n[c]);
        if (std::abs(sd) > rho) {
            L.region = Region::Pure;
            L.phase = sd >= 0 ? pair_j(c) : pair_i(c);
        } else {
            L.region = a <= eps ? Region::InterfaceCore : Region::Layer;
        }
        return L;
    }
    L.phase = c - 3;
    double yb = dot(y, bisector[L.phase]);
    if (yb <= eps * kCos15)
        L.region = Region::PhaseCore;
    else if (yb <= r * kCos15)
        L.region = Region::PhaseBlend;
    else
        L.region = Region::PhaseCap;
    return L;
}

WedgeDecomposition wedge_decompose(const StrongSolution& sol, double r, double rho, double eps) {
    if (sol.kind != ScenarioKind::TripleY) throw ConfigError("wedge decomposition needs the triple junction scenario");
    if (!(eps > 0.0) || !(eps < rho) || !(rho < r)) {
        std::ostringstream os;
        os << "wedge decomposition needs eps < rho < r (eps=" << eps << ", rho=" << rho << ", r=" << r << ")";
        throw ConfigError(os.str());
    }
    if (r > 0.5 * sol.L) throw ConfigError("wedge radius exceeds the box");
    WedgeDecomposition w;
    w.T = sol.center();
    w.r = r;
    w.rho = rho;
    w.eps = eps;
    for (int k = 0; k < 3; ++k) {
        w.e[k] = sol.ray_dir(WedgeDecomposition::pair_i(k), WedgeDecomposition::pair_j(k));
        w.n[k] = rot(w.e[k], kPi / 2);
        w.r_plus[k] = rot(w.e[k], kPi / 4);
        w.r_minus[k] = rot(w.e[k], -kPi / 4);
    }
    // phase j sits between R^+ of pair (j-1, j) and R^- of pair (j, j+1)
    for (int j = 0; j < 3; ++j) {
        const auto& p = w.r_plus[(j + 2) % 3];
        const auto& m = w.r_minus[j];
        w.bisector[j] = normalize({p[0] + m[0], p[1] + m[1]});
    }
    // inclusion: the ray of each pair lies inside its own cone and the phase sides match the strong solution
    for (int k = 0; k < 3; ++k) {
        Vec2 probe{w.T[0] + 0.5 * r * w.e[k][0], w.T[1] + 0.5 * r * w.e[k][1]};
        if (w.cone(probe) != k) throw NumericError("wedge decomposition: ray outside its cone");
        Vec2 side{probe[0] + 0.25 * r * w.n[k][0], probe[1] + 0.25 * r * w.n[k][1]};
        if (sol.phase(side, 0.0) != WedgeDecomposition::pair_j(k)) throw NumericError("wedge decomposition: orientation");
    }
    return w;
}

InitialData::InitialData(const StrongSolution& sol, const PotentialSpec& spec, double eps, const InitOptions& opt)
    : sol_(sol), spec_(spec), eps_(eps), opt_(opt) {
    if (!(eps > 0.0)) throw ConfigError("initial data: eps must be positive");
    if (spec.geom.n_phases != 3) throw ConfigError("initial data: scenarios are three-phase");
    abar_ = spec.geom.barycenter();
    switch (sol.kind) {
    case ScenarioKind::TripleY: {
        double r = sol.L / 8;
        tube_ = r / 2;
        wd_ = wedge_decompose(sol, r, tube_, eps);
        for (int k = 0; k < 3; ++k)
            prof_.push_back(solve_profile(spec, WedgeDecomposition::pair_i(k), WedgeDecomposition::pair_j(k),
                                          opt.rho_profile));
        break;
    }
    case ScenarioKind::Flat: tube_ = sol.L / 8; break;
    case ScenarioKind::Circle: tube_ = std::min(sol.L / 8, sol.radius(0.0) / 2); break;
    }
    if (sol.kind != ScenarioKind::TripleY) prof_.push_back(solve_profile(spec, 0, 1, opt.rho_profile));
    if (eps * opt.rho_profile > tube_ * (1 + 1e-12)) {
        std::ostringstream os;
        os << "initial data: profile width " << eps * opt.rho_profile << " exceeds the tube half-width " << tube_;
        throw ConfigError(os.str());
    }
}

Point InitialData::blend(const std::vector<Point>& tr, const std::vector<double>& d) const {
    // normalized inverse-distance transfinite weights: w_a ~ prod_{b != a} d_b
    const size_t m = tr.size();
    std::vector<double> w(m, 1.0);
    double sum = 0.0;
    for (size_t a = 0; a < m; ++a) {
        for (size_t b = 0; b < m; ++b)
            if (b != a) w[a] *= d[b];
        sum += w[a];
    }
    Point o(tr[0].size(), 0.0);
    if (sum <= 0.0) return tr[0];
    for (size_t a = 0; a < m; ++a)
        for (size_t c = 0; c < o.size(); ++c) o[c] += w[a] / sum * tr[a][c];
    return o;
}

Point InitialData::core_interface(const Vec2& y, int k) const {
    const double a = std::hypot(y[0], y[1]);
    if (a == 0.0) return abar_;
    const auto& th = prof_[k];
    const double sd = dot(y, wd_.n[k]);
    const double sg = sd >= 0 ? 1.0 : -1.0;
    // interface segment I within B_eps
    double dI;
    double l = seg_proj(y, wd_.e[k], eps_, &dI);
    Point uI = mix(abar_, th.theta(0.0), l / eps_);
    // cone boundary ray R^sign
    double dR;
    double rr = seg_proj(y, sg > 0 ? wd_.r_plus[k] : wd_.r_minus[k], eps_, &dR);
    Point uR = mix(abar_, th.theta(sg * kCos45), rr / eps_);
    // arc H: trace of the neighbouring layer theta(sdist / eps) at the radial projection
    double dH = eps_ - a;
    Point uH = th.theta(sd / a);
    return blend({uH, uI, uR}, {dH, dI, dR});
}

Point InitialData::core_phase(const Vec2& y, int j) const {
    const int p = (j + 2) % 3, q = j; // pairs (j-1, j) and (j, j+1)
    const auto& Rp = wd_.r_plus[p];
    const auto& Rm = wd_.r_minus[q];
    if (y[0] == 0.0 && y[1] == 0.0) return abar_;
    double d1, d2;
    double r1 = seg_proj(y, Rp, eps_, &d1);
    double r2 = seg_proj(y, Rm, eps_, &d2);
    Point up = prof_[p].theta(kCos45), um = prof_[q].theta(-kCos45);
    Point u1 = mix(abar_, up, r1 / eps_);
    Point u2 = mix(abar_, um, r2 / eps_);
    // chord S from eps*Rm to eps*Rp
    Vec2 A{eps_ * Rm[0], eps_ * Rm[1]};
    Vec2 ch = normalize({Rp[0] - Rm[0], Rp[1] - Rm[1]});
    const double se = 2 * eps_ * kSin15;
    double s = std::clamp(dot({y[0] - A[0], y[1] - A[1]}, ch), 0.0, se);
    double dS = std::max(0.0, eps_ * kCos15 - dot(y, wd_.bisector[j]));
    Point uS = mix(um, up, s / se);
    return blend({uS, u1, u2}, {dS, d1, d2});
}

Point InitialData::phase_blend(const Vec2& y, int j) const {
    const int p = (j + 2) % 3, q = j;
    const auto& Rp = wd_.r_plus[p];
    const auto& Rm = wd_.r_minus[q];
    Vec2 ch = normalize({Rp[0] - Rm[0], Rp[1] - Rm[1]});
    double yb = dot(y, wd_.bisector[j]);
    double ht = yb / kCos15; // = h / cos(pi/12) + eps
    double width = 2 * ht * kSin15;
    // s measured from R^-_{j,k} along the chord direction
    double s = dot(y, ch) - ht * dot(Rm, ch);
    double lam = std::clamp(s / width, 0.0, 1.0);
    // projections along s onto R^-_{j,k} and R^+_{i,j} sit at distance ht from T, ht*sin(45) from the interface
    double arg = ht * kCos45 / eps_;
    return mix(prof_[q].theta(-arg), prof_[p].theta(arg), lam);
}

Point InitialData::value(const Vec2& x, Region* tag) const {
    auto set = [&](Region r) {
        if (tag) *tag = r;
    };
    if (sol_.kind != ScenarioKind::TripleY) {
        double sd = sol_.sdist(x, 0.0, 0, 1);
        set(std::abs(sd) <= opt_.rho_profile * eps_ ? Region::Layer : Region::Pure);
        return prof_[0].theta(sd / eps_);
    }
    auto loc = wd_.locate(x);
    set(loc.region);
    Vec2 y{x[0] - wd_.T[0], x[1] - wd_.T[1]};
    switch (loc.region) {
    case Region::Pure:
    case Region::PhaseCap: return spec_.geom.vertices[loc.phase];
    case Region::Layer: return prof_[loc.pair].theta(dot(y, wd_.n[loc.pair]) / eps_);
    case Region::InterfaceCore: return core_interface(y, loc.pair);
    case Region::PhaseCore: return core_phase(y, loc.phase);
    case Region::PhaseBlend: return phase_blend(y, loc.phase);
    }
    return abar_;
}

GridField build_initial(const InitialData& data, const Grid& grid) {
    const double cells = data.eps() / grid.h();
    if (cells < data.options().min_cells_per_eps * (1 - 1e-12)) {
        std::ostringstream os;
        os << "initial data: " << cells << " cells per eps, need " << data.options().min_cells_per_eps;
        throw ConfigError(os.str());
    }
    if (grid.n < 8 || std::abs(grid.L - data.solution().L) > 1e-12 * grid.L)
        throw ConfigError("initial data: grid does not match the scenario box");
    GridField f(grid, 2, data.eps());
    f.region.assign(grid.size(), 0);
    for (int iy = 0; iy < grid.n; ++iy)
        for (int ix = 0; ix < grid.n; ++ix) {
            Region tag;
            auto u = data.value({grid.x(ix), grid.x(iy)}, &tag);
            size_t k = grid.idx(ix, iy);
            f.set(k, u.data());
            f.region[k] = static_cast<std::uint8_t>(tag);
        }
    return f;
}

} // namespace mcf
