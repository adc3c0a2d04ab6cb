#pragma once

#include "mcf/potential.hpp"

#include <string>
#include <vector>

namespace mcf {

struct IndicatorSet {
    PotentialSpec spec;
    double delta_a4 = 1e-3;
    // end-blend widths of the lambda / eta ramps, in normalized units
    double lambda_blend = 0.04;
    double eta_blend = 0.1;
    // constant C in |d psi_i| <= C sqrt(2W)
    double c_grad = 2.0;
    // psi accepts points this far outside the simplex (evaluated at the projection)
    double outside_tol = 1e-6;

    int n() const { return spec.geom.n_phases; }
    int dim() const { return spec.geom.dim(); }
};

IndicatorSet make_indicators(const PotentialSpec& spec);

double lambda_fn(const IndicatorSet& ind, double beta, double* dlam = nullptr);
double eta_fn(const IndicatorSet& ind, double s, double* deta = nullptr);

// out: psi_1..psi_N, psi_0 (N+1 values)
void psi(const IndicatorSet& ind, const double* u, double* out);
// out: (N+1) x (N-1) row-major Jacobian, rows ordered as in psi()
void dpsi(const IndicatorSet& ind, const double* u, double* out);
void psi_dpsi(const IndicatorSet& ind, const double* u, double* val, double* jac);

// 2W(u) - LHS of (A4) for the sector pair of u; grad_margin receives
// min_i (C sqrt(2W) - |d psi_i|).
double verify_a4(const IndicatorSet& ind, const double* u, double* grad_margin = nullptr);

struct IndicatorReport {
    double a4_margin = 0.0;
    std::vector<double> a4_witness;
    double grad_margin = 0.0;
    double grad_ratio_max = 0.0; // fitted sup |d psi_i| / sqrt(2W)
    double fd_mismatch_interior = 0.0;
    double fd_mismatch_boundary = 0.0;
    double partition_error = 0.0;
    double range_violation = 0.0;
    double support_violation = 0.0;
    double lambda_slope = 0.0, eta_slope = 0.0;
    bool pass = false;
};

IndicatorReport verify_indicators(const IndicatorSet& ind, int n_samples, unsigned seed);

} // namespace mcf
