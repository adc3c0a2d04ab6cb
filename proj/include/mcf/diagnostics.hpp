#pragma once

#include "mcf/calibration.hpp"
#include "mcf/grid.hpp"
#include "mcf/indicators.hpp"
#include "mcf/potential.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace mcf {

// Names of the coercivity functionals, in CSV column order. Each is the integral of a nonnegative density
// over the points whose value lies in the sector T_ij (one pair per point, from classify):
//   mm_defect        (sqrt(eps)|Du| - sqrt(2W/eps))^2                  (all points)
//   tilt_psi         |nu_ij - xi_ij|^2 |D psi_ij|,  nu_ij = D psi_ij / |D psi_ij|
//   dist_psi         min(d_ij^2, 1) |D psi_ij|
//   dist_energy      min(d_ij^2, 1) (eps/2 |Du|^2 + W/eps)
//   tangential       eps |(Id - xi_ij x xi_ij) Du^T|^2
//   psi0_sq          |d psi_0|^2 / eps
//   psi0_cross       |d psi_ij . d psi_0| / eps
//   psi0_grad        |D psi_0|
//   tilt_grad        |nu_ij - xi_ij|^2 eps |Du|^2
//   length_defect    (|D psi_ij| / (2 sqrt(eps) |Du|) - sqrt(eps)|Du|)^2
//   gradient_defect  |d psi_ij x nu_ij / (2 sqrt(eps)) - sqrt(eps) Du|^2
//   xi_alignment     |xi_ij x xi_ij - Du^T Du / |Du|^2|^2 eps |Du|^2
// d_ij is the distance to the interface I_ij (+inf if empty), psi_ij = psi_j - psi_i, xi_ij = xi_i - xi_j.
const std::vector<std::string>& coercivity_names();

struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;     // forward-difference energy (the solver's)
    double E_rel = 0.0; // relative entropy, centered differences throughout
    std::vector<double> L1_err;       // int |psi_i(u) - chi_i|, per phase
    std::vector<double> weighted_err; // same with weight min(dist(x, boundary of phase i), 1)
    std::map<std::string, double> coercivity;
    std::map<std::string, double> ratio; // coercivity / E_rel (0 when both vanish)
    double min_density = 0.0;            // smallest pointwise relative-entropy density
    double sum_residual = 0.0;           // max Frobenius mismatch of the sum identity
    double H_eps_norm = 0.0;             // int |H_eps|^2 / (2 eps)
    // dissipation-shaped integrals of the relative entropy inequality
    double diss_curvature = 0.0; // sum_ij int |H - eps (B.xi_ij) xi_ij |Du||^2 / (2 eps) chi_T
    double diss_gap = 0.0;       // int (|eps Lap u - dW/eps|^2 - |H|^2) / (2 eps)
    double diss_div = 0.0;       // int |eps Lap u - dW/eps + sum_i div(xi_i) d psi_i|^2 / (4 eps)

    double max_L1() const;
    double max_weighted() const;
};

// Evaluates every functional on a field. The mask excludes the periodic-wrap band from all integrals
// (gradients still use the periodic stencil). The calibration is optional: without it only E,
// H_eps_norm and the calibration-free terms are filled.
class Diagnostics {
public:
    Diagnostics(const PotentialSpec& spec, const IndicatorSet& ind, const CalibrationField* calib,
                const FrameMask& mask = {});

    DiagnosticsRecord evaluate(const GridField& f) const;

    // CSV schema; the first line is a version comment
    static std::string csv_header(int n_phases = 3);
    static std::string csv_row(const DiagnosticsRecord& r);

    // unit-vector factors are dropped below this gradient size (times 1/h)
    double vacuum = 1e-12;

private:
    const PotentialSpec& spec_;
    const IndicatorSet& ind_;
    const CalibrationField* calib_;
    FrameMask mask_;
};

inline constexpr int kCsvVersion = 1;

double energy(const GridField& f, const PotentialSpec& spec);
double relative_entropy(const GridField& f, const CalibrationField& calib, const PotentialSpec& spec,
                        const IndicatorSet& ind, const FrameMask& mask = {});
// H_eps as a 2-component spatial field, channel-major like GridField (x then y)
std::vector<double> h_epsilon(const GridField& f, const PotentialSpec& spec, double vacuum = 1e-12);
std::map<std::string, double> coercivity_report(const GridField& f, const CalibrationField& calib,
                                                const PotentialSpec& spec, const IndicatorSet& ind,
                                                const FrameMask& mask = {});
struct BulkErrors {
    std::vector<double> plain, weighted;
};
BulkErrors bulk_errors(const GridField& f, const CalibrationField& calib, const IndicatorSet& ind,
                       const FrameMask& mask = {});
double sum_identity_residual(const GridField& f, const CalibrationField& calib, const IndicatorSet& ind,
                             const FrameMask& mask = {});

// psi-level-set radius of the phase-0 region: sqrt(int psi_0(u) / pi)
double phase_radius(const GridField& f, const IndicatorSet& ind, int phase = 0);

} // namespace mcf
