#include "mcf/harness.hpp"

#include "mcf/calibration.hpp"
#include "mcf/errors.hpp"
#include "mcf/indicators.hpp"
#include "mcf/initdata.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace mcf {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        return v.substr(1, v.size() - 2);
    return v;
}

double to_num(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    double x = to_num(key, v);
    if (x != std::floor(x) || std::abs(x) > 2e9) throw ConfigError("config: '" + key + "' expects an integer");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config: '" + key + "' expects true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']') throw ConfigError("config: '" + key + "' expects [a, b, ...]");
    std::vector<double> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_num(key, item));
    }
    return out;
}

const PotentialSpec& potential3() {
    static const PotentialSpec sp = make_potential(build_simplex(3));
    return sp;
}

const IndicatorSet& indicators3() {
    static const IndicatorSet ind = make_indicators(potential3());
    return ind;
}

std::string snapshot_csv(const GridField& f, const IndicatorSet& ind) {
    std::ostringstream os;
    os << std::setprecision(17) << "x,y,u_1,u_2,psi_1,psi_2,psi_3\n";
    const auto& g = f.grid;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            double u[2], p[4];
            f.get(g.idx(ix, iy), u);
            psi(ind, u, p);
            os << g.x(ix) << "," << g.x(iy) << "," << u[0] << "," << u[1] << "," << p[0] << "," << p[1] << ","
               << p[2] << "\n";
        }
    return os.str();
}

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << s;
}

} // namespace

double SweepConfig::box() const {
    if (L > 0.0) return L;
    return scenario == ScenarioKind::TripleY ? 1.28 : 1.0;
}

SweepConfig parse_config(const std::string& text) {
    SweepConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    bool have_scenario = false;
    while (std::getline(ss, line)) {
        ++lineno;
        // strip comments outside quotes
        bool q = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') q = !q;
            if (line[i] == '#' && !q) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), v = unquote(trim(line.substr(eq + 1)));
        if (key == "scenario") {
            c.scenario = parse_scenario(v);
            have_scenario = true;
        } else if (key == "n_phases") c.n_phases = to_int(key, v);
        else if (key == "L") c.L = to_num(key, v);
        else if (key == "eps") c.eps = to_num(key, v);
        else if (key == "eps_list") c.eps_list = to_list(key, v);
        else if (key == "cells_per_eps") c.cells_per_eps = to_num(key, v);
        else if (key == "t_end") c.t_end = to_num(key, v);
        else if (key == "dt_factor") c.dt_factor = to_num(key, v);
        else if (key == "scheme") c.scheme = parse_scheme(v);
        else if (key == "out_dir") c.out_dir = v;
        else if (key == "seed") c.seed = static_cast<unsigned>(to_int(key, v));
        else if (key == "R0") c.R0 = to_num(key, v);
        else if (key == "records") c.records = to_int(key, v);
        else if (key == "snapshots") c.snapshots = to_bool(key, v);
        else if (key == "certify_samples") c.certify_samples = to_int(key, v);
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    if (!have_scenario) throw ConfigError("config: 'scenario' is required");
    return c;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void validate(const SweepConfig& c, bool sweep) {
    if (c.n_phases != 3) throw ConfigError("config: n_phases must be 3 (all scenarios are three-phase)");
    if (!(c.t_end >= 0.0)) throw ConfigError("config: t_end must be >= 0");
    if (!(c.dt_factor > 0.0)) throw ConfigError("config: dt_factor must be positive");
    if (!(c.cells_per_eps >= 8.0)) throw ConfigError("config: cells_per_eps must be >= 8");
    if (c.records < 1) throw ConfigError("config: records must be >= 1");
    if (c.certify_samples < 10000) throw ConfigError("config: certify_samples must be >= 1e4");
    if (sweep) {
        if (c.eps_list.size() < 3) throw ConfigError("config: a sweep needs at least three eps values");
        for (size_t k = 0; k < c.eps_list.size(); ++k) {
            if (!(c.eps_list[k] > 0.0)) throw ConfigError("config: eps values must be positive");
            if (k > 0 && !(c.eps_list[k] < c.eps_list[k - 1]))
                throw ConfigError("config: eps_list must be strictly decreasing");
        }
    } else if (!(c.eps > 0.0)) {
        throw ConfigError("config: eps must be positive");
    }
}

FrameMask scenario_frame(ScenarioKind kind, double L, double eps) {
    FrameMask fm;
    const double w = std::max(L / 8.0, 3.0 * eps);
    if (kind == ScenarioKind::TripleY) {
        fm.frame_x = fm.frame_y = w;
        fm.mask_x = fm.mask_y = L / 4.0;
    } else if (kind == ScenarioKind::Flat) {
        fm.frame_y = w;
        fm.mask_y = L / 4.0;
    }
    return fm;
}

double RunResult::sup_L1() const {
    double s = 0.0;
    for (const auto& r : records) s = std::max(s, r.max_L1());
    return s;
}

double RunResult::sup_E_rel() const {
    double s = 0.0;
    for (const auto& r : records) s = std::max(s, r.E_rel);
    return s;
}

double RunResult::gronwall_C() const {
    const double e0 = E_rel0();
    double c = -INFINITY;
    for (const auto& r : records) {
        if (r.t <= 0.0) continue;
        if (e0 <= 0.0) return r.E_rel > 0.0 ? INFINITY : 0.0;
        c = std::max(c, std::log(std::max(r.E_rel, 1e-300) / e0) / r.t);
    }
    return std::isfinite(c) ? c : 0.0;
}

double RunResult::weighted_C() const {
    const auto& a = records.front();
    const auto& b = records.back();
    double den = a.E_rel + a.max_weighted();
    return den > 0.0 ? b.max_weighted() / den : 0.0;
}

std::map<std::string, double> RunResult::coercivity_C() const {
    std::map<std::string, double> out;
    for (const auto& r : records)
        for (const auto& [k, v] : r.ratio) out[k] = std::max(out[k], v);
    return out;
}

double RunResult::min_dissipation() const {
    double m = INFINITY;
    for (const auto& r : records) m = std::min({m, r.diss_curvature, r.diss_gap, r.diss_div});
    return m;
}

double RunResult::max_sum_residual() const {
    double m = 0.0;
    for (const auto& r : records) m = std::max(m, r.sum_residual);
    return m;
}

double RunResult::max_radius_error() const {
    double m = 0.0;
    for (size_t k = 0; k < radius.size(); ++k) m = std::max(m, std::abs(radius[k] - radius_exact[k]) / radius_exact[k]);
    return m;
}

std::string eps_tag(double eps) {
    std::ostringstream os;
    os << eps;
    return os.str();
}

RunResult run_single(const SweepConfig& cfg, double eps, const RunOptions& opt) {
    const double L = cfg.box();
    ScenarioParams p;
    p.L = L;
    p.R0 = cfg.R0;
    p.t_end = cfg.t_end;
    p.eps = eps;
    const auto sol = make_scenario(cfg.scenario, p);
    const auto cal = build_calibration(sol);
    const auto& spec = potential3();
    const auto& ind = indicators3();

    int n = opt.n;
    if (n <= 0) {
        n = static_cast<int>(std::ceil(cfg.cells_per_eps * L / eps - 1e-9));
        n += n % 2;
    }
    InitOptions io;
    io.min_cells_per_eps = opt.min_cells_per_eps;
    InitialData data(sol, spec, eps, io);
    GridField f = build_initial(data, Grid{n, L});

    const FrameMask fm = scenario_frame(cfg.scenario, L, eps);
    certify_preparedness(f, cal, ind, fm);

    SolverConfig sc;
    sc.scheme = cfg.scheme;
    sc.dt_factor = cfg.dt_factor;
    // run() shortens dt so the steps fit t_end exactly
    const long steps = static_cast<long>(std::ceil(cfg.t_end / Solver(f.grid, spec, eps, sc).dt() - 1e-9));
    sc.cadence = std::max(1L, steps / cfg.records);
    Solver s(f.grid, spec, eps, sc);
    if (fm.active()) s.set_frame(fm, f);

    RunResult res;
    res.eps = eps;
    res.n = n;
    Diagnostics diag(spec, ind, &cal, fm);
    std::ostringstream csv;
    csv << Diagnostics::csv_header() << "\n";
    s.run(f, cfg.t_end, [&](const GridField& g, const StepInfo&) {
        auto r = diag.evaluate(g);
        csv << Diagnostics::csv_row(r) << "\n";
        if (cfg.scenario == ScenarioKind::Circle) {
            res.radius.push_back(phase_radius(g, ind, 0));
            res.radius_exact.push_back(sol.radius(g.t));
        }
        res.records.push_back(std::move(r));
        if (cfg.snapshots && (g.t == 0.0 || g.t == cfg.t_end)) res.snapshots[g.t] = snapshot_csv(g, ind);
    });
    res.info = s.info();
    res.csv = csv.str();
    return res;
}

Fit fit_order(const std::vector<double>& eps, const std::vector<double>& values) {
    Fit f;
    if (eps.size() != values.size()) {
        f.error = "eps and value lists differ in length";
        return f;
    }
    if (eps.size() < 3) {
        f.error = "at least three points are needed";
        return f;
    }
    const size_t m = eps.size();
    std::vector<double> x(m), y(m);
    for (size_t k = 0; k < m; ++k) {
        if (!(eps[k] > 0.0) || !(values[k] > 0.0) || !std::isfinite(values[k])) {
            f.error = "nonpositive value at eps = " + eps_tag(eps[k]);
            return f;
        }
        x[k] = std::log(eps[k]);
        y[k] = std::log(values[k]);
    }
    double mx = 0, my = 0;
    for (size_t k = 0; k < m; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t k = 0; k < m; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) {
        f.error = "eps values coincide";
        return f;
    }
    f.slope = sxy / sxx;
    f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    f.ok = true;
    return f;
}

void write_run(const RunResult& r, const std::string& dir, const std::string& snapshot_prefix) {
    fs::create_directories(dir);
    write_file(fs::path(dir) / ("diagnostics_" + eps_tag(r.eps) + ".csv"), r.csv);
    for (const auto& [t, s] : r.snapshots)
        write_file(fs::path(dir) / (snapshot_prefix + "snapshot_" + eps_tag(t) + ".csv"), s);
}

std::string rate_report_json(const RateReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["scenario"] = r.scenario;
    j["eps"] = r.eps;
    j["complete"] = r.complete;
    j["pass"] = r.pass;
    for (const auto& [name, m] : r.metrics) {
        ordered_json mj;
        mj["values"] = m.values;
        mj["threshold"] = m.threshold;
        if (m.fit.ok) {
            mj["slope"] = m.fit.slope;
            mj["r2"] = m.fit.r2;
        } else {
            mj["error"] = m.fit.error;
        }
        mj["pass"] = m.pass;
        j["metrics"][name] = mj;
    }
    j["runs"] = ordered_json::array();
    for (const auto& run : r.runs) {
        ordered_json rj;
        rj["eps"] = run.eps;
        rj["n"] = run.n;
        rj["steps"] = run.info.step;
        rj["dt"] = run.info.dt;
        rj["E_rel0"] = run.E_rel0();
        rj["sup_L1"] = run.sup_L1();
        rj["sup_E_rel"] = run.sup_E_rel();
        rj["gronwall_C"] = run.gronwall_C();
        rj["weighted_C"] = run.weighted_C();
        rj["min_dissipation"] = run.min_dissipation();
        rj["max_sum_residual"] = run.max_sum_residual();
        rj["max_energy_rise"] = run.info.max_energy_rise;
        rj["max_excursion"] = run.info.max_excursion;
        rj["local_updates"] = run.info.local_updates;
        rj["halvings"] = run.info.halvings;
        if (!run.radius.empty()) rj["max_radius_error"] = run.max_radius_error();
        rj["coercivity_C"] = run.coercivity_C();
        j["runs"].push_back(rj);
    }
    return j.dump(2) + "\n";
}

RateReport run_sweep(const SweepConfig& cfg, const RunOptions& opt) {
    validate(cfg, true);
    const auto& spec = potential3();
    const auto& ind = indicators3();

    // construction certificates
    auto ar = verify_assumptions(spec, cfg.certify_samples, cfg.seed);
    if (!ar.pass) throw VerificationError("potential assumptions fail: " + ar.first_failure);
    auto ir = verify_indicators(ind, cfg.certify_samples, cfg.seed);
    if (!ir.pass) throw VerificationError("indicator certificate fails");
    ScenarioParams p;
    p.L = cfg.box();
    p.R0 = cfg.R0;
    p.t_end = cfg.t_end;
    auto cr = verify_calibration(build_calibration(make_scenario(cfg.scenario, p)), cfg.certify_samples, 5, cfg.seed);
    if (!cr.pass) throw VerificationError("calibration certificate fails: " + cr.first_failure);

    RateReport rep;
    rep.scenario = scenario_name(cfg.scenario);
    rep.eps = cfg.eps_list;
    fs::create_directories(cfg.out_dir);

    std::vector<std::future<RunResult>> jobs;
    for (double e : cfg.eps_list)
        jobs.push_back(std::async(std::launch::async, [&cfg, e, &opt] { return run_single(cfg, e, opt); }));
    std::exception_ptr failure;
    for (size_t k = 0; k < jobs.size(); ++k) {
        try {
            auto r = jobs[k].get();
            write_run(r, cfg.out_dir, cfg.snapshots ? "eps_" + eps_tag(r.eps) + "_" : "");
            rep.runs.push_back(std::move(r));
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        write_file(fs::path(cfg.out_dir) / "rate_report.json", rate_report_json(rep));
        std::rethrow_exception(failure);
    }
    rep.complete = true;

    auto metric = [&](const std::string& name, double threshold, auto get) {
        RateMetric m;
        for (const auto& r : rep.runs) m.values.push_back(get(r));
        m.fit = fit_order(rep.eps, m.values);
        m.threshold = threshold;
        m.pass = m.fit.ok && m.fit.slope >= threshold;
        rep.metrics[name] = m;
    };
    metric("sup_L1", 0.5, [](const RunResult& r) { return r.sup_L1(); });
    metric("sup_E_rel", 1.0, [](const RunResult& r) { return r.sup_E_rel(); });
    rep.pass = true;
    for (const auto& [k, m] : rep.metrics) rep.pass = rep.pass && m.pass;
    write_file(fs::path(cfg.out_dir) / "rate_report.json", rate_report_json(rep));
    return rep;
}

} // namespace mcf
