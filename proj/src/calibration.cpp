#include "mcf/calibration.hpp"

#include "mcf/errors.hpp"
#include "mcf/ramp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mcf {

namespace {

const double kSqrt3 = std::sqrt(3.0);

} // namespace

double cap_fn(double d) {
    if (d <= 0.5) return d;
    if (d >= 1.0) return 1.0;
    double s = 2.0 * (d - 0.5);
    return 0.5 + 0.5 * (s + s * s - s * s * s);
}

double CalibrationField::zeta(double d) const {
    // (1 - q^2) phi(q), phi a C-infinity transition from 1 on [0, q0] to 0 at q = 1
    constexpr double q0 = 0.6;
    double q = d / r_cal;
    if (q >= 1.0) return 0.0;
    if (q <= q0) return 1.0 - q * q;
    double s = (q - q0) / (1.0 - q0);
    double a = std::exp(-1.0 / (1.0 - s)), b = std::exp(-1.0 / s);
    return (1.0 - q * q) * a / (a + b);
}

void CalibrationField::xi(const Vec2& x, double t, Vec2* out) const {
    int pi = 0, pj = 1;
    double D = sol.network_dist(x, t, &pi, &pj);
    double z = zeta(D);
    if (sol.kind == ScenarioKind::TripleY) {
        // constant balanced triple: xi_a = (n_ab + n_ac) / 3
        for (int a = 0; a < 3; ++a) {
            int b = (a + 1) % 3, c = (a + 2) % 3;
            auto nb = sol.normal(x, t, a, b), nc = sol.normal(x, t, a, c);
            out[a] = {z * (nb[0] + nc[0]) / 3.0, z * (nb[1] + nc[1]) / 3.0};
        }
    } else if (z == 0.0) {
        for (int a = 0; a < 3; ++a) out[a] = {0.0, 0.0};
    } else {
        auto n = sol.normal(x, t, 0, 1);
        Vec2 x2{-n[1] / kSqrt3, n[0] / kSqrt3};
        out[0] = {z * 0.5 * (n[0] - x2[0]), z * 0.5 * (n[1] - x2[1])};
        out[1] = {z * 0.5 * (-n[0] - x2[0]), z * 0.5 * (-n[1] - x2[1])};
        out[2] = {z * x2[0], z * x2[1]};
    }
    out[0][0] += xi0_shift[0];
    out[0][1] += xi0_shift[1];
}

Vec2 CalibrationField::xi_pair(const Vec2& x, double t, int i, int j) const {
    Vec2 v[3];
    xi(x, t, v);
    return {v[i][0] - v[j][0], v[i][1] - v[j][1]};
}

Vec2 CalibrationField::B(const Vec2& x, double t) const {
    if (sol.kind != ScenarioKind::Circle) return {0.0, 0.0};
    auto c = sol.center();
    double dx = x[0] - c[0], dy = x[1] - c[1], r = std::hypot(dx, dy);
    if (r == 0.0) return {0.0, 0.0};
    double R = sol.radius(t);
    double d = std::abs(r - R);
    double cut = 1.0 - smoothstep5(std::clamp((d - r_cal) / r_cal, 0.0, 1.0));
    double s = -b_scale * cut / R;
    return {s * dx / r, s * dy / r};
}

double CalibrationField::vartheta(const Vec2& x, double t, int i) const {
    double d = sol.phase_boundary_dist(x, t, i);
    double s = sol.phase(x, t) == i ? -1.0 : 1.0;
    return s * cap_fn(d);
}

CalibrationField build_calibration(const StrongSolution& sol) {
    CalibrationField f;
    f.sol = sol;
    switch (sol.kind) {
    case ScenarioKind::Flat: f.r_cal = sol.L / 8.0; break;
    case ScenarioKind::Circle: f.r_cal = std::min(sol.L / 8.0, sol.radius(sol.t_end) / 2.0); break;
    case ScenarioKind::TripleY:
        f.r_cal = sol.L / 8.0;
        f.r_junction = sol.L / 16.0;
        break;
    }
    if (!(f.r_cal > 0.0)) throw ConfigError("calibration: degenerate tube radius");
    f.c_len = 1.0 / (f.r_cal * f.r_cal);
    f.C_len = 4.0 / (f.r_cal * f.r_cal);
    f.c_perp = 0.0;
    if (sol.kind == ScenarioKind::Circle) {
        // outside the B plateau: |(1 - cut)/R| |cap'| / cap(r_cal), cap' <= 4/3
        f.C_transport = 1.5 / (sol.radius(sol.t_end) * cap_fn(std::min(f.r_cal, 0.5)));
    }
    return f;
}

} // namespace mcf
