#pragma once

#include "mcf/diagnostics.hpp"
#include "mcf/geometry2d.hpp"
#include "mcf/solver.hpp"

#include <map>
#include <string>
#include <vector>

namespace mcf {

// Flat key = value file (TOML subset): numbers, bare or quoted strings, [a, b, c] lists, # comments.
struct SweepConfig {
    ScenarioKind scenario = ScenarioKind::Circle;
    int n_phases = 3;
    double L = 0.0; // 0: scenario default (1.28 for triple_y, 1 otherwise)
    double eps = 0.0;
    std::vector<double> eps_list;
    double cells_per_eps = 8.0;
    double t_end = 0.0;
    double dt_factor = 0.125;
    Scheme scheme = Scheme::SemiImplicitSpectral;
    std::string out_dir = ".";
    unsigned seed = 1;
    // optional keys
    double R0 = 0.3;
    int records = 20;   // diagnostics rows per run (plus t = 0 and t_end)
    bool snapshots = false;
    int certify_samples = 10000;

    double box() const;
};

SweepConfig parse_config(const std::string& text);
SweepConfig load_config(const std::string& path);
// throws ConfigError; sweep = true also checks the eps list
void validate(const SweepConfig& cfg, bool sweep);

// Boundary frame (held at the initial data) and diagnostics mask for a scenario: the wrap of the box
// meets rays (triple_y) or the layer (flat, in y) there.
FrameMask scenario_frame(ScenarioKind kind, double L, double eps);

struct RunOptions {
    int n = 0;                      // 0: from cells_per_eps
    double min_cells_per_eps = 8.0; // resolution floor of the initial data
};

struct RunResult {
    double eps = 0.0;
    int n = 0;
    std::vector<DiagnosticsRecord> records;
    std::vector<double> radius, radius_exact; // indicator-area radius of phase 0 (circle)
    StepInfo info;
    std::string csv;                          // diagnostics table, header included
    std::map<double, std::string> snapshots;  // t -> grid dump

    double E_rel0() const { return records.front().E_rel; }
    double sup_L1() const;
    double sup_E_rel() const;
    // smallest C with E_rel(t) <= E_rel(0) e^{C t} at every record (0 if E_rel never exceeds E_rel(0))
    double gronwall_C() const;
    // max_i weighted_err_i(T) / (E_rel(0) + max_i weighted_err_i(0))
    double weighted_C() const;
    // sup_t of each coercivity functional over E_rel
    std::map<std::string, double> coercivity_C() const;
    double min_dissipation() const;
    double max_sum_residual() const;
    double max_radius_error() const; // relative
};

RunResult run_single(const SweepConfig& cfg, double eps, const RunOptions& opt = {});

struct Fit {
    double slope = 0.0, r2 = 0.0;
    bool ok = false;
    std::string error;
};

// ordinary least squares on (log eps, log value)
Fit fit_order(const std::vector<double>& eps, const std::vector<double>& values);

struct RateMetric {
    std::vector<double> values;
    Fit fit;
    double threshold = 0.0;
    bool pass = false;
};

struct RateReport {
    std::string scenario;
    std::vector<double> eps;
    std::map<std::string, RateMetric> metrics;
    std::vector<RunResult> runs;
    bool complete = false;
    bool pass = false;
};

// Certifies the construction, runs every eps (concurrently), writes diagnostics_<eps>.csv and
// rate_report.json into out_dir. A failed run aborts after the finished tables are written.
RateReport run_sweep(const SweepConfig& cfg, const RunOptions& opt = {});
std::string rate_report_json(const RateReport& r);

// Writes one run's artifacts (diagnostics_<eps>.csv, snapshots) into dir.
void write_run(const RunResult& r, const std::string& dir, const std::string& snapshot_prefix = "");

std::string eps_tag(double eps);

} // namespace mcf
