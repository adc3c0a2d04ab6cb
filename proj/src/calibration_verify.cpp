#include "mcf/calibration.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace mcf {

namespace {

constexpr double kH = 1e-5;
constexpr double kTol = 1e-10;
const double kSqrt3 = std::sqrt(3.0);

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

// fourth-order central difference
template <class F>
auto d4(F f, double h) {
    auto a = f(2 * h), b = f(h), c = f(-h), e = f(-2 * h);
    decltype(a) r;
    for (size_t k = 0; k < r.size(); ++k) r[k] = (-a[k] + 8 * b[k] - 8 * c[k] + e[k]) / (12 * h);
    return r;
}

struct Jac2 {
    Vec2 dx, dy; // partial derivatives of a vector field
};

Jac2 grad_vec(const std::function<Vec2(const Vec2&)>& g, const Vec2& x) {
    Jac2 J;
    J.dx = d4([&](double s) { return g({x[0] + s, x[1]}); }, kH);
    J.dy = d4([&](double s) { return g({x[0], x[1] + s}); }, kH);
    return J;
}

void update(ExactCheck& e, double m, const Vec2& x, double t) {
    if (m < e.margin || e.witness.empty()) {
        e.margin = m;
        e.witness = {x[0], x[1], t};
    }
}

} // namespace

CalibrationReport verify_calibration(const CalibrationField& f, int n_samples, int bands, unsigned seed) {
    if (n_samples < 100 || bands < 2) throw ConfigError("verify_calibration: too few samples or bands");
    const auto& sol = f.sol;
    CalibrationReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double T = sol.t_end;

    const char* order_names[] = {"2.5a_transport", "2.5b_length_transport", "2.5c_normal_velocity",
                                 "2.5d_gradB_normal", "2.5e_gradB_mixed"};
    const int order_pow[] = {1, 2, 1, 1, 1};
    for (int c = 0; c < 5; ++c) rep.orders[order_names[c]].ratios.assign(bands, 0.0);
    for (auto name : {"2.5f_lower", "2.5f_upper", "2.5g_normal", "2.5h_length", "2.5h_zero_sum", "2.5i_perp",
                      "2.5i_delta", "3.6_combined", "2.6a", "2.6b", "2.6c", "2.7_transport"})
        rep.exact[name].margin = INFINITY;

    auto exact_point = [&](const Vec2& x, double t) {
        Vec2 v[3];
        f.xi(x, t, v);
        Vec2 sum{v[0][0] + v[1][0] + v[2][0], v[0][1] + v[1][1] + v[2][1]};
        update(rep.exact["2.5h_zero_sum"], -std::hypot(sum[0], sum[1]), x, t);
        for (int k = 0; k < 3; ++k) update(rep.exact["2.5h_length"], 1.0 - kSqrt3 * std::hypot(v[k][0], v[k][1]), x, t);
        int ni = 0, nj = 1;
        sol.network_dist(x, t, &ni, &nj);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                int k = 3 - i - j;
                Vec2 xij{v[i][0] - v[j][0], v[i][1] - v[j][1]};
                double d = sol.dist(x, t, i, j);
                double perp = kSqrt3 * std::abs(dot(xij, v[k]));
                double cap = std::sqrt(f.delta_cal);
                if (f.c_perp > 0.0) cap = std::min(cap, f.c_perp * d);
                update(rep.exact["2.5i_perp"], cap - perp, x, t);
                update(rep.exact["3.6_combined"], 1.0 - (dot(xij, xij) + perp * perp / f.delta_cal), x, t);
                // (2.5f) where I_ij is the nearest interface; vacuous for empty interfaces
                if (sol.has_interface(i, j) && i == ni && j == nj) {
                    double l2 = dot(xij, xij);
                    update(rep.exact["2.5f_lower"], l2 - (1.0 - f.C_len * d * d), x, t);
                    update(rep.exact["2.5f_upper"], std::max(1.0 - f.c_len * d * d, 0.0) - l2, x, t);
                }
            }
        for (int i = 0; i < 3; ++i) {
            double th = f.vartheta(x, t, i);
            double d = std::min(sol.phase_boundary_dist(x, t, i), 1.0);
            if (sol.phase(x, t) == i)
                update(rep.exact["2.6a"], -f.c_weight * d - th, x, t);
            else
                update(rep.exact["2.6b"], th - f.c_weight * d, x, t);
            update(rep.exact["2.6c"], f.C_weight * d - std::abs(th), x, t);
            double dt = (-f.vartheta(x, t + 2 * kH, i) + 8 * f.vartheta(x, t + kH, i) - 8 * f.vartheta(x, t - kH, i) +
                         f.vartheta(x, t - 2 * kH, i)) /
                        (12 * kH);
            auto gx = d4([&](double s) { return std::array<double, 1>{f.vartheta({x[0] + s, x[1]}, t, i)}; }, kH);
            auto gy = d4([&](double s) { return std::array<double, 1>{f.vartheta({x[0], x[1] + s}, t, i)}; }, kH);
            auto b = f.B(x, t);
            double tr = dt + b[0] * gx[0] + b[1] * gy[0];
            update(rep.exact["2.7_transport"], f.C_transport * std::abs(th) - std::abs(tr), x, t);
        }
    };

    int pairs = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) pairs += sol.has_interface(i, j) ? 1 : 0;
    const int per = std::max(200, n_samples / (2 * pairs * bands));

    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            if (!sol.has_interface(i, j)) continue;
            for (int k = 0; k < bands; ++k) {
                const double lo = f.r_cal * std::ldexp(1.0, -(k + 1)), hi = 2.0 * lo;
                for (int s = 0; s < per; ++s) {
                    double t = T * U(rng);
                    Vec2 p;
                    auto c = sol.center();
                    switch (sol.kind) {
                    case ScenarioKind::Flat: p = {sol.L * U(rng), c[1]}; break;
                    case ScenarioKind::Circle: {
                        double a = 2 * std::numbers::pi * U(rng), R = sol.radius(t);
                        p = {c[0] + R * std::cos(a), c[1] + R * std::sin(a)};
                        break;
                    }
                    case ScenarioKind::TripleY: {
                        auto dir = sol.ray_dir(i, j);
                        double l = 0.45 * sol.L * U(rng);
                        p = {c[0] + l * dir[0], c[1] + l * dir[1]};
                        break;
                    }
                    }
                    auto n = sol.normal(p, t, i, j);
                    if (k == 0 && s % 4 == 0) {
                        auto e = f.xi_pair(p, t, i, j);
                        update(rep.exact["2.5g_normal"], -std::hypot(e[0] - n[0], e[1] - n[1]), p, t);
                    }
                    double d = lo + (hi - lo) * U(rng);
                    double sg = U(rng) < 0.5 ? -1.0 : 1.0;
                    Vec2 x{p[0] + sg * d * n[0], p[1] + sg * d * n[1]};
                    d = sol.dist(x, t, i, j);
                    if (d <= 0.0) continue;
                    exact_point(x, t);

                    auto xij = [&](const Vec2& y, double tt) { return f.xi_pair(y, tt, i, j); };
                    Vec2 v = xij(x, t);
                    Vec2 dtv = d4([&](double h) { return xij(x, t + h); }, kH);
                    Jac2 J = grad_vec([&](const Vec2& y) { return xij(y, t); }, x);
                    Jac2 G = grad_vec([&](const Vec2& y) { return f.B(y, t); }, x);
                    Vec2 b = f.B(x, t);
                    // (B.grad) xi and (grad B)^T xi with (grad B)_{ab} = d_a B_b
                    Vec2 adv{b[0] * J.dx[0] + b[1] * J.dy[0], b[0] * J.dx[1] + b[1] * J.dy[1]};
                    Vec2 gbt{dot(G.dx, v), dot(G.dy, v)};
                    Vec2 a{dtv[0] + adv[0] + gbt[0], dtv[1] + adv[1] + gbt[1]};
                    double lhs[5];
                    lhs[0] = std::hypot(a[0], a[1]);
                    lhs[1] = std::abs(0.5 * (v[0] * (dtv[0] + adv[0]) + v[1] * (dtv[1] + adv[1])));
                    double div = J.dx[0] + J.dy[1];
                    lhs[2] = std::abs(dot(b, v) + div) * std::hypot(v[0], v[1]);
                    auto gBab = [&](const Vec2& p1, const Vec2& p2) {
                        return p1[0] * dot(G.dx, p2) + p1[1] * dot(G.dy, p2);
                    };
                    Vec2 vp{-v[1], v[0]};
                    lhs[3] = std::abs(gBab(v, v));
                    lhs[4] = std::abs(gBab(vp, v) + gBab(v, vp));
                    for (int c = 0; c < 5; ++c) {
                        double den = order_pow[c] == 1 ? std::max(d, 1e-6) : std::max(d * d, 1e-12);
                        auto& bc = rep.orders[order_names[c]];
                        double q = lhs[c] / den;
                        if (q > bc.ratios[k]) {
                            bc.ratios[k] = q;
                            if (q >= bc.constant) {
                                bc.constant = q;
                                bc.witness = {x[0], x[1], t};
                            }
                        }
                    }
                }
            }
        }
    // global samples for the exact conditions
    for (int s = 0; s < std::max(1000, n_samples / 2); ++s) {
        Vec2 x{sol.L * U(rng), sol.L * U(rng)};
        exact_point(x, T * U(rng));
    }
    rep.exact["2.5i_delta"].margin = f.delta_cal - f.c_perp * f.c_perp / f.c_len;
    if (pairs == 0) rep.exact["2.5g_normal"].margin = 0.0;

    rep.pass = true;
    for (int c = 0; c < 5; ++c) {
        auto& bc = rep.orders[order_names[c]];
        // finite-difference noise floor (h = 1e-5, fourth order) at the finest band
        const double floor = order_pow[c] == 1 ? 1e-4 : 1e-3;
        bc.constant = *std::max_element(bc.ratios.begin(), bc.ratios.end());
        // O(dist^p): per-band sup ratios agree within a factor 2, or all sit at the difference noise floor
        double lo = *std::min_element(bc.ratios.begin(), bc.ratios.end());
        bc.pass = bc.constant <= floor || bc.constant <= 2.0 * lo;
        if (!bc.pass && rep.pass) {
            rep.pass = false;
            rep.first_failure = order_names[c];
        }
    }
    for (auto& [name, e] : rep.exact) {
        e.pass = e.margin >= -kTol;
        if (!e.pass && rep.pass) {
            rep.pass = false;
            rep.first_failure = name;
        }
    }
    rep.constants = {{"r_cal", f.r_cal},     {"delta_cal", f.delta_cal}, {"c_len", f.c_len},
                     {"C_len", f.C_len},     {"c_perp", f.c_perp},       {"c_weight", f.c_weight},
                     {"C_weight", f.C_weight}, {"C_transport", f.C_transport}};
    return rep;
}

} // namespace mcf
