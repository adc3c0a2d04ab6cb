#include "mcf/calibration.hpp"
#include "mcf/errors.hpp"
#include "mcf/harness.hpp"
#include "mcf/indicators.hpp"
#include "mcf/profiles.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>

using namespace mcf;
using nlohmann::ordered_json;

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

int cmd_simulate(const std::string& path) {
    auto cfg = load_config(path);
    validate(cfg, false);
    auto r = run_single(cfg, cfg.eps);
    write_run(r, cfg.out_dir);
    ordered_json j;
    j["scenario"] = scenario_name(cfg.scenario);
    j["eps"] = r.eps;
    j["n"] = r.n;
    j["steps"] = r.info.step;
    j["E"] = r.records.back().E;
    j["E_rel0"] = r.E_rel0();
    j["E_rel"] = r.records.back().E_rel;
    j["sup_L1"] = r.sup_L1();
    j["max_energy_rise"] = r.info.max_energy_rise;
    j["max_excursion"] = r.info.max_excursion;
    if (!r.radius.empty()) j["max_radius_error"] = r.max_radius_error();
    std::cout << j.dump(2) << "\n";
    return code(ExitCode::ok);
}

int cmd_sweep(const std::string& path) {
    auto cfg = load_config(path);
    auto rep = run_sweep(cfg);
    for (const auto& [name, m] : rep.metrics)
        std::printf("%-10s slope %.3f (R^2 %.4f) threshold %.2f  %s\n", name.c_str(), m.fit.slope, m.fit.r2,
                    m.threshold, m.pass ? "PASS" : "FAIL");
    std::printf("report: %s/rate_report.json\n", cfg.out_dir.c_str());
    return rep.pass ? code(ExitCode::ok) : code(ExitCode::verification);
}

int cmd_verify_potential(int samples, unsigned seed) {
    auto spec = make_potential(build_simplex(3));
    auto r = verify_assumptions(spec, samples, seed);
    ordered_json j;
    for (const auto& [k, m] : r.margins) j["margins"][k] = m.value;
    for (const auto& [k, v] : r.constants) j["constants"][k] = v;
    j["pass"] = r.pass;
    if (!r.pass) j["first_failure"] = r.first_failure;
    std::cout << j.dump(2) << "\n";
    return r.pass ? code(ExitCode::ok) : code(ExitCode::verification);
}

int cmd_verify_indicators(int samples, unsigned seed) {
    auto ind = make_indicators(make_potential(build_simplex(3)));
    auto r = verify_indicators(ind, samples, seed);
    ordered_json j;
    j["a4_margin"] = r.a4_margin;
    j["a4_witness"] = r.a4_witness;
    j["grad_margin"] = r.grad_margin;
    j["grad_ratio_max"] = r.grad_ratio_max;
    j["fd_mismatch_interior"] = r.fd_mismatch_interior;
    j["fd_mismatch_boundary"] = r.fd_mismatch_boundary;
    j["partition_error"] = r.partition_error;
    j["range_violation"] = r.range_violation;
    j["support_violation"] = r.support_violation;
    j["lambda_slope"] = r.lambda_slope;
    j["eta_slope"] = r.eta_slope;
    j["pass"] = r.pass;
    std::cout << j.dump(2) << "\n";
    return r.pass ? code(ExitCode::ok) : code(ExitCode::verification);
}

int cmd_verify_calibration(const std::string& scenario, double t_end, int samples, unsigned seed) {
    ScenarioParams p;
    auto kind = parse_scenario(scenario);
    p.L = kind == ScenarioKind::TripleY ? 1.28 : 1.0;
    p.t_end = t_end;
    auto cal = build_calibration(make_scenario(kind, p));
    auto r = verify_calibration(cal, samples, 5, seed);
    ordered_json j;
    j["scenario"] = scenario;
    for (const auto& [k, b] : r.orders) {
        j["orders"][k]["ratios"] = b.ratios;
        j["orders"][k]["constant"] = b.constant;
        j["orders"][k]["pass"] = b.pass;
    }
    for (const auto& [k, e] : r.exact) {
        j["exact"][k]["margin"] = e.margin;
        j["exact"][k]["pass"] = e.pass;
    }
    for (const auto& [k, v] : r.constants) j["constants"][k] = v;
    j["pass"] = r.pass;
    if (!r.pass) j["first_failure"] = r.first_failure;
    std::cout << j.dump(2) << "\n";
    return r.pass ? code(ExitCode::ok) : code(ExitCode::verification);
}

int cmd_profile(const std::string& edge, double rho, double step) {
    int i = -1, j = -1;
    if (std::sscanf(edge.c_str(), "%d,%d", &i, &j) != 2) throw ConfigError("--edge expects i,j");
    auto spec = make_potential(build_simplex(3));
    auto p = solve_profile(spec, i, j, rho);
    std::printf("# edge %d,%d rho %g theta_bar %.12g %.12g energy(eps=1) %.12g\n", i, j, rho, p.theta_bar_minus,
                p.theta_bar_plus, profile_energy_check(p, 1.0));
    std::printf("s,theta_tilde,sigma,u_1,u_2\n");
    for (double s = -rho - 0.5; s <= rho + 0.5 + 1e-12; s += step) {
        auto u = p.theta(s);
        std::printf("%.6f,%.15g,%.15g,%.15g,%.15g\n", s, p.theta_tilde(s), p.sigma(s), u[0], u[1]);
    }
    return code(ExitCode::ok);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mcf-lab: vectorial Allen-Cahn experiments against multiphase mean curvature flow"};
    app.require_subcommand(1);

    std::string config;
    auto* sim = app.add_subcommand("simulate", "run one eps, write diagnostics_<eps>.csv");
    sim->add_option("--config", config, "key = value config file")->required();
    auto* sweep = app.add_subcommand("sweep", "eps sweep with rate fits, writes rate_report.json");
    sweep->add_option("--config", config, "key = value config file")->required();

    int samples = 100000;
    unsigned seed = 1;
    auto* vp = app.add_subcommand("verify-potential", "check the potential assumptions by sampling");
    auto* vi = app.add_subcommand("verify-indicators", "check the indicator inequality by sampling");
    auto* vc = app.add_subcommand("verify-calibration", "check the calibration conditions by sampling");
    for (auto* s : {vp, vi, vc}) {
        s->add_option("--samples", samples, "number of samples")->capture_default_str();
        s->add_option("--seed", seed, "sample shift seed")->capture_default_str();
    }
    std::string scenario = "triple_y";
    double t_end = 0.01;
    vc->add_option("--scenario", scenario, "flat | circle | triple_y")->capture_default_str();
    vc->add_option("--t-end", t_end, "time horizon")->capture_default_str();

    std::string edge;
    double rho = 2.0, step = 0.05;
    auto* prof = app.add_subcommand("profile1d", "print the equilibrium profile across an edge");
    prof->add_option("--edge", edge, "i,j")->required();
    prof->add_option("--rho", rho, "truncation")->capture_default_str();
    prof->add_option("--step", step, "output spacing")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : code(ExitCode::config);
    }

    try {
        if (*sim) return cmd_simulate(config);
        if (*sweep) return cmd_sweep(config);
        if (*vp) return cmd_verify_potential(samples, seed);
        if (*vi) return cmd_verify_indicators(samples, seed);
        if (*vc) return cmd_verify_calibration(scenario, t_end, samples, seed);
        if (*prof) return cmd_profile(edge, rho, step);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return code(ExitCode::config);
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return code(ExitCode::verification);
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return code(ExitCode::numeric);
    } catch (const DomainError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return code(ExitCode::numeric);
    }
    return code(ExitCode::config);
}
