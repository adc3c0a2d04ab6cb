#pragma once

#include <array>
#include <string>

namespace mcf {

using Vec2 = std::array<double, 2>;

enum class ScenarioKind { Flat, Circle, TripleY };

ScenarioKind parse_scenario(const std::string& name);
std::string scenario_name(ScenarioKind k);

struct ScenarioParams {
    double L = 1.0;
    double R0 = 0.3;
    double t_end = 0.0;
    // > 0: check the interface keeps max(r_cal, 10 eps) away from the box boundary
    double eps = 0.0;
};

// Analytic strong solution on the box [0,L]^2, three phases (indices 0..2).
// Flat: phase 0 below y = L/2, phase 1 above, phase 2 empty.
// Circle: phase 0 inside the disc of radius R(t) = sqrt(R0^2 - 2t), phase 1 outside, phase 2 empty.
// TripleY: rays from the center at 90, 210, 330 degrees; phase 0 on (90, 210), 1 on (210, 330), 2 on (330, 450).
class StrongSolution {
public:
    ScenarioKind kind = ScenarioKind::Flat;
    int n_phases = 3;
    double L = 1.0;
    double R0 = 0.3;
    double t_end = 0.0;

    Vec2 center() const { return {0.5 * L, 0.5 * L}; }
    double radius(double t) const;

    int phase(const Vec2& x, double t) const;
    int chi(const Vec2& x, double t, int i) const { return phase(x, t) == i ? 1 : 0; }
    bool has_interface(int i, int j) const;
    // unsigned distance to I_ij; +inf for an empty interface
    double dist(const Vec2& x, double t, int i, int j) const;
    // positive on the j side
    double sdist(const Vec2& x, double t, int i, int j) const;
    // unit normal of I_ij (from i into j) at the projection of x
    Vec2 normal(const Vec2& x, double t, int i, int j) const;
    Vec2 curvature(const Vec2& x, double t, int i, int j) const;
    // scalar normal speed along normal(): V n = H
    double speed(const Vec2& x, double t, int i, int j) const;
    // distance to the whole interface network and the nearest pair (i < j)
    double network_dist(const Vec2& x, double t, int* pi = nullptr, int* pj = nullptr) const;
    // distance to the boundary of supp chi_i
    double phase_boundary_dist(const Vec2& x, double t, int i) const;

    // total interface length inside the box, area of phase i
    double interface_length(double t) const;
    double phase_area(double t, int i) const;

    // TripleY: ray direction of I_ij
    Vec2 ray_dir(int i, int j) const;
};

StrongSolution make_scenario(ScenarioKind kind, const ScenarioParams& params);

} // namespace mcf
