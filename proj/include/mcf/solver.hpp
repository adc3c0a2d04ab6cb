#pragma once

#include "mcf/grid.hpp"
#include "mcf/potential.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

namespace mcf {

enum class Scheme { SemiImplicitSpectral, ExplicitFD };

Scheme parse_scheme(const std::string& s);
std::string scheme_name(Scheme s);

struct SolverConfig {
    Scheme scheme = Scheme::SemiImplicitSpectral;
    double dt = 0.0;          // 0: dt_factor * eps^2 (spectral) or the CFL limit (explicit)
    double dt_factor = 0.125;
    double cfl_safety = 0.9;
    long max_steps = 100000000;
    long cadence = 0;         // callback every `cadence` steps (0: first and last only)
    double simplex_tol = 1e-6;
    double cg_tol = 1e-10;       // relative residual of the linear solve
    int cg_max_iter = 400;
    double concave_cut = 20.0;   // Hessian eigenvalues below -concave_cut enter with their modulus
    double step_cap = 0.1;       // larger pointwise updates are redone locally
    int max_halvings = 20;
    double accept_excursion = 1e-7; // updates leaving the simplex by more than this are redone locally
    int local_max_substeps = 20000;
    double energy_tol = 1e-8; // relative to E(u^0), per step
    double snap_tol = 1e-10;  // updated values this close to a well are set to it
};

struct StepInfo {
    long step = 0;
    double t = 0.0;
    double dt = 0.0;
    double energy = 0.0;          // E[u^n] at the recorded state
    double excursion = 0.0;       // max dist(u, simplex) over the grid
    double max_energy_rise = 0.0; // max_n (E^{n+1} - E^n) / E^n so far
    double max_excursion = 0.0;
    int cg_iterations = 0;
    int max_cg_iterations = 0;
    long convex_retries = 0;
    long halvings = 0;
    long local_updates = 0;       // point updates done by local integration
    long active_points = 0;       // unknowns in the last linear solve
};

using Callback = std::function<void(const GridField&, const StepInfo&)>;

// Time stepper for du/dt = Lap u - eps^-2 dW(u) on the periodic grid, Lap_h the 5-point Laplacian.
// Spectral: linearly implicit Euler, (I + a Hm(u^n) - dt Lap_h)(u^{n+1} - u^n) = dt Lap_h u^n - a dW(u^n),
// a = dt/eps^2. Hm is the Hessian of W with strongly concave eigenvalues (< -concave_cut) replaced by their
// modulus; the edge potential range is kept exactly so profiles translate at the right speed and steady
// states are fixed points. Solved by block-Jacobi CG; if the system turns out indefinite it is redone with |H|.
// W is steep between the edge tubes and the interior floor and no linearization holds there: points whose
// update exceeds step_cap or leaves the simplex are integrated on their own over the step (neighbours frozen,
// adaptive linearly implicit substeps). If that fails too the whole step is halved.
// Explicit: forward Euler with the same Laplacian.
// Points sitting exactly on a well with all four neighbours on wells have a zero right-hand side; the solve is
// restricted to the other points (Dirichlet zero update elsewhere). Updates within snap_tol of a well are
// rounded onto it, so the restriction stays a roundoff-level approximation.
class Solver {
public:
    Solver(const Grid& grid, const PotentialSpec& spec, double eps, const SolverConfig& cfg);
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;

    // grid points in the frame are held at `data` (Dirichlet rows in the solve, reset after explicit steps)
    void set_frame(const FrameMask& frame, const GridField& data);

    double dt() const { return dt_; }
    // explicit-scheme stability bound min(h^2/4, eps^2/L_W)
    double explicit_dt_limit() const;

    void step(GridField& f);
    void run(GridField& f, double t_end, const Callback& cb = {});

    // discrete energy with forward differences: sum h^2 (eps/2 |D+u|^2 + W(u)/eps)
    double energy(const GridField& f) const;
    double excursion(const GridField& f) const;
    const StepInfo& info() const { return info_; }

private:
    double linearize(const GridField& f);
    void build_blocks(bool convex);
    bool cg(double* d);
    bool local_step(size_t k, const GridField& f, double* v) const;
    bool solve(GridField& f);
    void advance(GridField& f, double tau, int depth);
    double apply_A(const double* x, double* y);
    double precondition(const double* r, double* z);
    void check_state(const GridField& f);
    void build_active(const GridField& f);
    void reset_frame(GridField& f) const;
    double grad_energy(const GridField& f) const;

    Grid grid_;
    PotentialSpec spec_;
    double eps_;
    SolverConfig cfg_;
    double dt_ = 0.0;
    double tau_ = 0.0; // current (sub)step
    double lw_ = 0.0;
    FrameMask frame_;
    std::vector<size_t> frame_idx_;
    std::vector<double> frame_val_;
    double frame_w_ = 0.0; // sum of W over the frame
    std::vector<uint8_t> fixed_, live_;
    std::vector<uint32_t> act_, pos_, nb_; // active grid indices, grid -> compact position, compact neighbours
    std::vector<double> blk_, pre_, rhs_, hess_, lap_, work_[4];
    std::vector<double> guess_; // last linear update per grid point (warm start)
    std::vector<uint32_t> guess_idx_;
    double guess_tau_ = 0.0;
    bool left_simplex_ = false;
    StepInfo info_;
    double e_prev_ = -1.0;
};

// Largest eigenvalue modulus of the Hessian of W over sampled points of the simplex.
double hessian_bound(const PotentialSpec& spec, int n_samples = 20000);

} // namespace mcf
