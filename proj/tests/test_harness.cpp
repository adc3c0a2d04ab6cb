#include "doctest.h"

#include "mcf/errors.hpp"
#include "mcf/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

using namespace mcf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("mcf_harness_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SweepConfig small_circle() {
    SweepConfig c;
    c.scenario = ScenarioKind::Circle;
    c.eps_list = {0.04, 0.035, 0.03};
    c.t_end = 0.001;
    c.records = 4;
    return c;
}

} // namespace

TEST_CASE("config parsing: keys, comments, quotes, lists") {
    auto c = parse_config(R"(# header
scenario = "triple_y"   # trailing comment
eps_list = [0.04, 0.02 ,0.01]
cells_per_eps = 12
t_end = 0.01
dt_factor = 0.25
out_dir = 'out/a#b'
seed = 7
R0 = 0.25
records = 5
snapshots = true
certify_samples = 20000
)");
    CHECK(c.scenario == ScenarioKind::TripleY);
    CHECK(c.eps_list == std::vector<double>{0.04, 0.02, 0.01});
    CHECK(c.cells_per_eps == 12);
    CHECK(c.t_end == 0.01);
    CHECK(c.dt_factor == 0.25);
    CHECK(c.seed == 7u);
    CHECK(c.R0 == 0.25);
    CHECK(c.records == 5);
    CHECK(c.snapshots);
    CHECK(c.certify_samples == 20000);
    CHECK(c.box() == 1.28);
    CHECK(parse_config("scenario = circle").box() == 1.0);
    CHECK(parse_config("scenario = circle\nL = 2").box() == 2.0);
    CHECK_NOTHROW(validate(c, true));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("eps = 0.1"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = circle\nfoo = 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = hexagon"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = circle\neps = 0.1x"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = circle\neps_list = 0.1, 0.2"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = circle\nsnapshots = yes"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario = circle\nrecords = 2.5"), ConfigError);
    CHECK_THROWS_AS(parse_config("scenario circle"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), ConfigError);

    auto c = small_circle();
    CHECK_NOTHROW(validate(c, true));
    auto one = c;
    one.eps_list = {0.02};
    CHECK_THROWS_AS(validate(one, true), ConfigError);
    auto up = c;
    up.eps_list = {0.02, 0.04, 0.01};
    CHECK_THROWS_AS(validate(up, true), ConfigError);
    auto two = c;
    two.n_phases = 2;
    CHECK_THROWS_AS(validate(two, true), ConfigError);
    auto coarse = c;
    coarse.cells_per_eps = 6;
    CHECK_THROWS_AS(validate(coarse, true), ConfigError);
    auto few = c;
    few.certify_samples = 100;
    CHECK_THROWS_AS(validate(few, true), ConfigError);
    auto single = c;
    CHECK_THROWS_AS(validate(single, false), ConfigError); // eps unset
    single.eps = 0.04;
    CHECK_NOTHROW(validate(single, false));
    CHECK_THROWS_AS(run_sweep(one), ConfigError);
}

TEST_CASE("fit_order recovers power laws") {
    std::vector<double> eps = {0.04, 0.02, 0.01};
    auto id = fit_order(eps, eps);
    REQUIRE(id.ok);
    CHECK(id.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id.r2 == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> root;
    for (double e : eps) root.push_back(3.0 * std::sqrt(e));
    CHECK(fit_order(eps, root).slope == doctest::Approx(0.5).epsilon(1e-12));

    // OLS slope by hand: mean of the two consecutive log2 ratios for dyadic eps
    std::vector<double> vals = {3.1e-2, 1.62e-2, 8.4e-3};
    double by_hand = 0.5 * (std::log2(vals[0] / vals[1]) + std::log2(vals[1] / vals[2]));
    auto f = fit_order(eps, vals);
    REQUIRE(f.ok);
    CHECK(f.slope == doctest::Approx(by_hand).epsilon(1e-12));
    CHECK(f.slope == doctest::Approx(0.94).epsilon(0.01));
    CHECK(f.r2 > 0.999);
}

TEST_CASE("fit_order refuses degenerate input") {
    CHECK_FALSE(fit_order({0.04, 0.02}, {1.0, 0.5}).ok);
    CHECK_FALSE(fit_order({0.04, 0.02, 0.01}, {1.0, 0.5}).ok);
    auto z = fit_order({0.04, 0.02, 0.01}, {1.0, 0.0, 0.5});
    CHECK_FALSE(z.ok);
    CHECK(z.error.find("0.02") != std::string::npos);
    CHECK_FALSE(fit_order({0.04, 0.02, 0.01}, {1.0, NAN, 0.5}).ok);
    CHECK_FALSE(fit_order({0.02, 0.02, 0.02}, {1.0, 2.0, 0.5}).ok);
}

TEST_CASE("scenario frames") {
    auto ty = scenario_frame(ScenarioKind::TripleY, 1.28, 0.04);
    CHECK(ty.frame_x == doctest::Approx(0.16));
    CHECK(ty.frame_y == ty.frame_x);
    CHECK(ty.mask_x >= ty.frame_x);
    CHECK(scenario_frame(ScenarioKind::TripleY, 1.28, 0.1).frame_x == doctest::Approx(0.3));
    auto fl = scenario_frame(ScenarioKind::Flat, 1.0, 0.04);
    CHECK(fl.frame_x == 0.0);
    CHECK(fl.frame_y > 0.0);
    CHECK(fl.mask_y >= fl.frame_y);
    CHECK_FALSE(scenario_frame(ScenarioKind::Circle, 1.0, 0.04).active());
    CHECK(eps_tag(0.01) == "0.01");
    CHECK(eps_tag(0.005) == "0.005");
}

TEST_CASE("a single run is deterministic and tracks the shrinking circle") {
    auto c = small_circle();
    auto a = run_single(c, 0.04);
    auto b = run_single(c, 0.04);
    CHECK(a.n == 200);
    CHECK(a.csv == b.csv);
    REQUIRE(a.records.size() >= 2);
    CHECK(a.records.front().t == 0.0);
    CHECK(a.records.back().t == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(a.csv.rfind("# mcf-lab diagnostics v1\n", 0) == 0);
    // header line, version line, one row per record
    CHECK(std::count(a.csv.begin(), a.csv.end(), '\n') == static_cast<long>(a.records.size()) + 2);
    CHECK(a.radius.size() == a.records.size());
    CHECK(a.max_radius_error() < 0.05);
    CHECK(a.info.max_energy_rise <= 1e-8);
    CHECK(a.max_sum_residual() <= 1e-10);
    CHECK(a.sup_E_rel() >= a.E_rel0());
    CHECK(std::isfinite(a.gronwall_C()));
    CHECK(a.weighted_C() >= 0.0);
    CHECK(a.coercivity_C().size() == coercivity_names().size());
}

TEST_CASE("sweep writes tables and a rate report") {
    auto c = small_circle();
    auto dir = scratch("sweep");
    c.out_dir = dir.string();
    auto rep = run_sweep(c);
    CHECK(rep.complete);
    REQUIRE(rep.runs.size() == 3);
    for (double e : c.eps_list) CHECK(fs::exists(dir / ("diagnostics_" + eps_tag(e) + ".csv")));
    auto j = nlohmann::json::parse(slurp(dir / "rate_report.json"));
    CHECK(j["scenario"] == "circle");
    CHECK(j["complete"] == true);
    CHECK(j["runs"].size() == 3);
    CHECK(j["metrics"].contains("sup_L1"));
    CHECK(j["metrics"].contains("sup_E_rel"));
    const auto& l1 = rep.metrics.at("sup_L1");
    CHECK(l1.values[0] > l1.values[2]);
    CHECK(l1.pass == (l1.fit.slope >= 0.5));
    CHECK(slurp(dir / "diagnostics_0.035.csv") == rep.runs[1].csv);
    fs::remove_all(dir);
}

TEST_CASE("a failing run leaves a partial report") {
    SweepConfig c;
    c.scenario = ScenarioKind::Flat;
    c.eps_list = {0.2, 0.1, 0.05}; // the two coarse layers do not fit the calibration tube
    c.t_end = 0.0;
    auto dir = scratch("partial");
    c.out_dir = dir.string();
    CHECK_THROWS_AS(run_sweep(c), ConfigError);
    auto j = nlohmann::json::parse(slurp(dir / "rate_report.json"));
    CHECK(j["complete"] == false);
    CHECK(j["runs"].size() == 1);
    CHECK(fs::exists(dir / "diagnostics_0.05.csv"));
    fs::remove_all(dir);
}
