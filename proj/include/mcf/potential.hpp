#pragma once

#include "mcf/jet.hpp"
#include "mcf/simplex.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcf {

struct PotentialSpec {
    SimplexGeometry geom;
    double q = 2.0;
    double edge_coeff = 18.0;
    // omega(beta) = omega_max * S((beta)/beta_N), omega_max = C_omega + 1
    double c_omega = 0.0;
    double omega_max = 0.0;
    double c_n = 0.0;
    double c_int = 0.0;
    double f_max = 0.0;
    double c_gamma = 18.0, C_gamma = 18.0, L_gamma = 6.0;
    double c_m = 4.0, m_w = 0.0;
    double c1 = 0.0, c2 = 0.0;
    double lipschitz_ext = 10.0;
    double blend_width = 0.1;
    // interior floor ramps in the smooth edge distance over [floor_lo, floor_hi] * tube radius
    double floor_lo = 0.4, floor_hi = 0.85;
    double scale = 1.0; // multiplies W (falsification runs)

    double tube_radius() const;
};

PotentialSpec make_potential(const SimplexGeometry& geom);

// (9/8)(1 - s^2)^2 on s in [-1, 1]
double edge_potential(double s);
// int_0^r sqrt(2W) along an edge: 3r^2 - 2r^3
double dist_w_edge(const PotentialSpec& spec, int i, int j, double r);

double omega_fn(const PotentialSpec& spec, double beta);

// W on R^{N-1}; outside the simplex the quadratic Lipschitz extension.
double eval_W(const PotentialSpec& spec, const double* u);
void eval_dW(const PotentialSpec& spec, const double* u, double* grad);
// value, gradient (dim) and Hessian (dim*dim, row-major)
double eval_W_hess(const PotentialSpec& spec, const double* u, double* grad, double* hess);
// nearest point of the closed simplex
void project_simplex(const PotentialSpec& spec, const double* u, double* p);

struct Margin {
    double value = 0.0;
    std::vector<double> witness;
};

struct AssumptionReport {
    std::map<std::string, Margin> margins;
    std::map<std::string, double> constants;
    bool pass = false;
    std::string first_failure;
};

struct AssumptionCheckOverrides {
    double c_n_factor = 1.0;
};

AssumptionReport verify_assumptions(const PotentialSpec& spec, int n_samples, unsigned seed,
                                    AssumptionCheckOverrides over = {});

// Low-discrepancy samples in the unit simplex (N = 3: triangle, N = 2: segment).
std::vector<Point> simplex_samples(const SimplexGeometry& g, int n, unsigned seed);

} // namespace mcf
