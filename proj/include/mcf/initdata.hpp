#pragma once

#include "mcf/calibration.hpp"
#include "mcf/geometry2d.hpp"
#include "mcf/grid.hpp"
#include "mcf/indicators.hpp"
#include "mcf/profiles.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mcf {

enum class Region : std::uint8_t {
    Pure = 0,
    Layer = 1,          // theta_ij(sdist / eps) in a tube or interface cone
    InterfaceCore = 2,  // W^eps_{i,j}: interface cone inside B_eps(T)
    PhaseCore = 3,      // W^eps_j: triangle below the chord S^eps_j
    PhaseBlend = 4,     // W^rho_j \ W^eps_j: (s,h) blend of two profiles
    PhaseCap = 5,       // rest of the phase cone inside B_r(T)
};

// Straight-ray triple junction. Pair k is the cyclic edge (k, k+1 mod 3); its interface is the ray e[k]
// with normal n[k] pointing into phase k+1.
struct WedgeDecomposition {
    Vec2 T{};
    double r = 0.0, rho = 0.0, eps = 0.0;
    std::array<Vec2, 3> e{}, n{};
    std::array<Vec2, 3> r_plus{}, r_minus{}; // boundary rays of the interface cone (j side, i side)
    std::array<Vec2, 3> bisector{};          // phase cone axis, indexed by phase

    static int pair_i(int k) { return k; }
    static int pair_j(int k) { return (k + 1) % 3; }

    struct Locus {
        Region region = Region::Pure;
        int pair = -1;  // interface cone / tube
        int phase = -1; // phase cone / pure phase
    };
    Locus locate(const Vec2& x) const;
    // index of the cone containing x in B_r(T): 0..2 interface cones, 3..5 phase cones (3 + phase)
    int cone(const Vec2& x) const;
};

WedgeDecomposition wedge_decompose(const StrongSolution& sol, double r, double rho, double eps);

struct InitOptions {
    double rho_profile = 2.0;
    double min_cells_per_eps = 8.0;
};

// Analytic well-prepared initial data; profiles for the cyclic pairs are solved on construction.
class InitialData {
public:
    InitialData(const StrongSolution& sol, const PotentialSpec& spec, double eps, const InitOptions& opt = {});

    Point value(const Vec2& x, Region* tag = nullptr) const;
    const StrongSolution& solution() const { return sol_; }
    const WedgeDecomposition& wedges() const { return wd_; }
    double tube_half_width() const { return tube_; }
    double eps() const { return eps_; }
    Point alpha_bar() const { return abar_; }
    const InitOptions& options() const { return opt_; }

private:
    Point blend(const std::vector<Point>& tr, const std::vector<double>& d) const;
    Point core_interface(const Vec2& y, int k) const;
    Point core_phase(const Vec2& y, int j) const;
    Point phase_blend(const Vec2& y, int j) const;

    StrongSolution sol_;
    PotentialSpec spec_;
    double eps_ = 0.0, tube_ = 0.0;
    InitOptions opt_;
    WedgeDecomposition wd_;
    std::vector<Profile1D> prof_; // TripleY: pair k; two-phase: (0,1)
    Point abar_;
};

// Samples the analytic data at cell centers. Throws ConfigError if the grid does not resolve eps.
GridField build_initial(const InitialData& data, const Grid& grid);

struct Preparedness {
    double e_rel0 = 0.0;
    std::vector<double> weighted_l1;
    std::vector<double> plain_l1;
};

Preparedness certify_preparedness(const GridField& field, const CalibrationField& calib, const IndicatorSet& ind,
                                  const FrameMask& mask = {});

} // namespace mcf
