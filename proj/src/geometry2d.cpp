#include "mcf/geometry2d.hpp"

#include "mcf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDeg = std::numbers::pi / 180.0;

Vec2 polar(double deg) { return {std::cos(deg * kDeg), std::sin(deg * kDeg)}; }

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

void order(int& i, int& j, double& sign) {
    sign = 1.0;
    if (i > j) {
        std::swap(i, j);
        sign = -1.0;
    }
}

// ray angle of I_ij (i < j) and the ccw orientation: +1 if crossing ccw goes from i to j
void ray_of(int i, int j, double* deg, double* ccw) {
    if (i == 0 && j == 1) {
        *deg = 210.0;
        *ccw = 1.0;
    } else if (i == 1 && j == 2) {
        *deg = 330.0;
        *ccw = 1.0;
    } else {
        *deg = 90.0;
        *ccw = -1.0; // ccw across the 90 degree ray goes from 2 into 0
    }
}

double ray_dist(const Vec2& x, const Vec2& c, const Vec2& d) {
    Vec2 r{x[0] - c[0], x[1] - c[1]};
    double s = std::max(0.0, dot(r, d));
    return std::hypot(r[0] - s * d[0], r[1] - s * d[1]);
}

} // namespace

ScenarioKind parse_scenario(const std::string& name) {
    if (name == "flat") return ScenarioKind::Flat;
    if (name == "circle") return ScenarioKind::Circle;
    if (name == "triple_y") return ScenarioKind::TripleY;
    throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_name(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Flat: return "flat";
    case ScenarioKind::Circle: return "circle";
    case ScenarioKind::TripleY: return "triple_y";
    }
    return "?";
}

double StrongSolution::radius(double t) const {
    if (kind != ScenarioKind::Circle) return 0.0;
    return std::sqrt(std::max(R0 * R0 - 2.0 * t, 0.0));
}

int StrongSolution::phase(const Vec2& x, double t) const {
    auto c = center();
    switch (kind) {
    case ScenarioKind::Flat: return x[1] <= c[1] ? 0 : 1;
    case ScenarioKind::Circle: return std::hypot(x[0] - c[0], x[1] - c[1]) <= radius(t) ? 0 : 1;
    case ScenarioKind::TripleY: {
        double a = std::atan2(x[1] - c[1], x[0] - c[0]) / kDeg;
        if (a < 90.0) a += 360.0; // a in [90, 450); the 90 degree ray itself lands at 90
        if (x[0] == c[0] && x[1] == c[1]) return 0;
        // rays go to the lower index: 90 -> 0, 210 -> 0, 330 -> 1
        if (a <= 210.0) return 0;
        if (a <= 330.0) return 1;
        return 2;
    }
    }
    return 0;
}

bool StrongSolution::has_interface(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i > 2 || j > 2) return false;
    if (kind == ScenarioKind::TripleY) return true;
    return (i == 0 && j == 1) || (i == 1 && j == 0);
}

Vec2 StrongSolution::ray_dir(int i, int j) const {
    double s;
    order(i, j, s);
    double deg, ccw;
    ray_of(i, j, &deg, &ccw);
    return polar(deg);
}

double StrongSolution::dist(const Vec2& x, double t, int i, int j) const {
    if (!has_interface(i, j)) return kInf;
    auto c = center();
    switch (kind) {
    case ScenarioKind::Flat: return std::abs(x[1] - c[1]);
    case ScenarioKind::Circle: return std::abs(std::hypot(x[0] - c[0], x[1] - c[1]) - radius(t));
    case ScenarioKind::TripleY: return ray_dist(x, c, ray_dir(i, j));
    }
    return kInf;
}

Vec2 StrongSolution::normal(const Vec2& x, double t, int i, int j) const {
    (void)t;
    if (!has_interface(i, j)) throw DomainError("normal of an empty interface");
    double s;
    order(i, j, s);
    auto c = center();
    switch (kind) {
    case ScenarioKind::Flat: return {0.0, s};
    case ScenarioKind::Circle: {
        double dx = x[0] - c[0], dy = x[1] - c[1], r = std::hypot(dx, dy);
        if (r == 0.0) return {s, 0.0};
        return {s * dx / r, s * dy / r};
    }
    case ScenarioKind::TripleY: {
        double deg, ccw;
        ray_of(i, j, &deg, &ccw);
        auto d = polar(deg);
        return {-s * ccw * d[1], s * ccw * d[0]};
    }
    }
    return {0, 0};
}

double StrongSolution::sdist(const Vec2& x, double t, int i, int j) const {
    if (!has_interface(i, j)) return i < j ? kInf : -kInf;
    auto c = center();
    if (kind == ScenarioKind::Circle) {
        double s = i < j ? 1.0 : -1.0;
        return s * (std::hypot(x[0] - c[0], x[1] - c[1]) - radius(t));
    }
    auto n = normal(x, t, i, j);
    double side = dot({x[0] - c[0], x[1] - c[1]}, n);
    return (side >= 0 ? 1.0 : -1.0) * dist(x, t, i, j);
}

Vec2 StrongSolution::curvature(const Vec2& x, double t, int i, int j) const {
    if (kind != ScenarioKind::Circle) return {0.0, 0.0};
    // H = -(1/R) e_r regardless of orientation
    auto n = normal(x, t, 0, 1);
    double R = radius(t);
    (void)i;
    (void)j;
    return {-n[0] / R, -n[1] / R};
}

double StrongSolution::speed(const Vec2& x, double t, int i, int j) const {
    auto H = curvature(x, t, i, j);
    auto n = normal(x, t, i, j);
    return dot(H, n);
}

double StrongSolution::network_dist(const Vec2& x, double t, int* pi, int* pj) const {
    double best = kInf;
    int bi = 0, bj = 1;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double d = dist(x, t, i, j);
            if (d < best) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    if (pi) *pi = bi;
    if (pj) *pj = bj;
    return best;
}

double StrongSolution::phase_boundary_dist(const Vec2& x, double t, int i) const {
    double best = kInf;
    for (int j = 0; j < 3; ++j)
        if (j != i) best = std::min(best, dist(x, t, i, j));
    return best;
}

double StrongSolution::interface_length(double t) const {
    switch (kind) {
    case ScenarioKind::Flat: return L;
    case ScenarioKind::Circle: return 2.0 * std::numbers::pi * radius(t);
    case ScenarioKind::TripleY: return 0.5 * L + 2.0 * (0.5 * L / std::cos(30.0 * kDeg));
    }
    return 0.0;
}

double StrongSolution::phase_area(double t, int i) const {
    const double box = L * L;
    switch (kind) {
    case ScenarioKind::Flat: return i == 2 ? 0.0 : 0.5 * box;
    case ScenarioKind::Circle: {
        double a = std::numbers::pi * radius(t) * radius(t);
        return i == 0 ? a : (i == 1 ? box - a : 0.0);
    }
    case ScenarioKind::TripleY: {
        // phase 1 is the lower sector; its rays leave through the vertical sides at height h(1 - tan 30)
        double h = 0.5 * L, t30 = std::tan(30.0 * kDeg);
        double p1 = L * h * (1.0 - 0.5 * t30);
        double rest = 0.5 * (box - p1);
        return i == 1 ? p1 : rest;
    }
    }
    return 0.0;
}

StrongSolution make_scenario(ScenarioKind kind, const ScenarioParams& p) {
    if (!(p.L > 0.0)) throw ConfigError("scenario: L must be positive");
    if (p.t_end < 0.0) throw ConfigError("scenario: negative t_end");
    StrongSolution s;
    s.kind = kind;
    s.L = p.L;
    s.R0 = p.R0;
    s.t_end = p.t_end;
    if (kind == ScenarioKind::Circle) {
        if (!(p.R0 > 0.0)) throw ConfigError("circle: R0 must be positive");
        if (p.t_end >= 0.5 * p.R0 * p.R0) throw ConfigError("circle: t_end beyond extinction time R0^2/2");
        if (p.eps > 0.0) {
            double r_cal = std::min(p.L / 8.0, s.radius(p.t_end) / 2.0);
            double margin = 0.5 * p.L - p.R0;
            // the truncated profile sits on the wells beyond 2 eps
            if (margin < std::max(r_cal, 5.0 * p.eps)) throw ConfigError("circle: interface too close to the box boundary");
        }
    }
    return s;
}

} // namespace mcf
