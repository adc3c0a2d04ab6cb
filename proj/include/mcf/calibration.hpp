#pragma once

#include "mcf/geometry2d.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcf {

// xi_i = zeta(dist to the network) * xi_i^0 with xi^0 a balanced triple built from the nearest
// interface normal; B the normal velocity extension; vartheta_i signed capped distance weights.
struct CalibrationField {
    StrongSolution sol;
    double r_cal = 0.125;
    double r_junction = 0.0625;
    double delta_cal = 1e-7;
    double c_len = 0.0, C_len = 0.0, c_perp = 0.0;
    // distance weight constants in c min(d,1) <= |vartheta| <= C min(d,1)
    double c_weight = 0.5, C_weight = 1.1;
    double C_transport = 0.0;
    // falsification hooks: B scaled, constant vector added to xi_0 (breaks the zero sum)
    double b_scale = 1.0;
    Vec2 xi0_shift{0.0, 0.0};

    void xi(const Vec2& x, double t, Vec2* out) const; // out[0..2]
    Vec2 xi_pair(const Vec2& x, double t, int i, int j) const;
    Vec2 B(const Vec2& x, double t) const;
    double vartheta(const Vec2& x, double t, int i) const;
    // 1 - (d/r)^2 for d <= 0.6 r, smooth cutoff to 0 at d = r
    double zeta(double d) const;
};

// cap(d) = d on [0,1/2], cubic Hermite to 1 on [1/2,1], 1 beyond (C^{1,1}, monotone)
double cap_fn(double d);

CalibrationField build_calibration(const StrongSolution& sol);

struct BandCheck {
    std::vector<double> ratios; // sup |LHS| / dist^p per dyadic band, coarse to fine
    double constant = 0.0;
    std::vector<double> witness; // x, y, t of the largest ratio
    bool pass = false;
};

struct ExactCheck {
    double margin = 0.0;
    std::vector<double> witness; // x, y, t
    bool pass = false;
};

struct CalibrationReport {
    std::map<std::string, BandCheck> orders;
    std::map<std::string, ExactCheck> exact;
    std::map<std::string, double> constants;
    bool pass = false;
    std::string first_failure;
};

CalibrationReport verify_calibration(const CalibrationField& f, int n_samples, int bands = 5, unsigned seed = 1);

} // namespace mcf
