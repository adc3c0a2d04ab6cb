#include "doctest.h"

#include "mcf/errors.hpp"
#include "mcf/initdata.hpp"
#include "mcf/solver.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace mcf;

namespace {

const PotentialSpec& spec3() {
    static PotentialSpec sp = make_potential(build_simplex(3));
    return sp;
}

GridField initial(ScenarioKind kind, double L, double eps, int n) {
    ScenarioParams p;
    p.L = L;
    InitOptions o;
    o.min_cells_per_eps = 2;
    InitialData d(make_scenario(kind, p), spec3(), eps, o);
    return build_initial(d, Grid{n, L});
}

// radius of the phase-0 disc from the area weighted by 1 - u_x (u = (s, 0) on the 0-1 edge)
double circle_radius(const GridField& f) {
    const double h = f.grid.h();
    double a = 0;
    for (size_t k = 0; k < f.grid.size(); ++k) a += (1.0 - f.channel(0)[k]) * h * h;
    return std::sqrt(a / std::numbers::pi);
}

// height of the u_x = 1/2 crossing in column ix of a flat layer
double crossing(const GridField& f, int ix) {
    const int n = f.grid.n;
    const double* u = f.channel(0);
    for (int iy = 0; iy + 1 < n; ++iy) {
        double a = u[f.grid.idx(ix, iy)], b = u[f.grid.idx(ix, iy + 1)];
        if (a < 0.5 && b >= 0.5) return f.grid.x(iy) + (0.5 - a) / (b - a) * f.grid.h();
    }
    return NAN;
}

} // namespace

TEST_CASE("pure phase is a fixed point, bit for bit") {
    Grid g{32, 1.0};
    GridField f(g, 2, 0.05);
    const auto& v = spec3().geom.vertices[2];
    for (size_t k = 0; k < g.size(); ++k) f.set(k, v.data());
    auto before = f.u;
    Solver s(g, spec3(), 0.05, SolverConfig{});
    s.run(f, 0.01);
    CHECK(f.u == before);
    CHECK(s.info().energy == 0.0);
    CHECK(s.info().active_points == 0);
}

TEST_CASE("flat layer stays put and dissipates") {
    const double eps = 0.04, L = 1.0;
    auto f = initial(ScenarioKind::Flat, L, eps, 128);
    SolverConfig cfg;
    Solver s(f.grid, spec3(), eps, cfg);
    FrameMask fm;
    fm.frame_y = std::max(L / 8, 6 * eps);
    s.set_frame(fm, f);
    const double y0 = crossing(f, 17);
    const double e0 = s.energy(f);
    s.run(f, 0.01);
    MESSAGE("crossing " << y0 << " -> " << crossing(f, 17) << ", energy " << e0 << " -> " << s.info().energy);
    CHECK(std::abs(crossing(f, 17) - y0) <= 0.05 * eps);
    CHECK(std::abs(crossing(f, 80) - crossing(f, 17)) <= 1e-12); // stays flat
    CHECK(s.info().energy <= e0);
    // the periodic seam (alpha_1 above, alpha_0 below, one cell apart) adds eps/2 * n exactly;
    // the rest is the unit line tension times L
    CHECK(s.info().energy - 0.5 * eps * f.grid.n == doctest::Approx(L).epsilon(0.02));
    CHECK(s.info().max_energy_rise <= 1e-8);
    CHECK(s.info().max_excursion <= 1e-6);
}

TEST_CASE("energy is non-increasing at dt = eps^2/4 and u stays in the simplex") {
    const double eps = 0.04, L = 1.28;
    auto f = initial(ScenarioKind::TripleY, L, eps, 128);
    SolverConfig cfg;
    cfg.dt_factor = 0.25;
    Solver s(f.grid, spec3(), eps, cfg);
    FrameMask fm;
    fm.frame_x = fm.frame_y = std::max(L / 8, 6 * eps);
    s.set_frame(fm, f);
    double prev = s.energy(f), worst = 0.0;
    const double e0 = prev;
    for (int k = 0; k < 40; ++k) {
        s.step(f);
        double e = s.energy(f);
        worst = std::max(worst, (e - prev) / e0);
        prev = e;
    }
    MESSAGE("energy " << e0 << " -> " << prev << ", local updates " << s.info().local_updates);
    CHECK(worst <= 1e-8);
    CHECK(s.excursion(f) <= 1e-6);
    CHECK(prev < e0);
}

TEST_CASE("shrinking circle follows R^2 = R0^2 - 2t") {
    const double eps = 0.04;
    auto f = initial(ScenarioKind::Circle, 1.0, eps, 160);
    Solver s(f.grid, spec3(), eps, SolverConfig{});
    const double r0 = circle_radius(f);
    CHECK(r0 == doctest::Approx(0.3).epsilon(0.01));
    s.run(f, 0.01);
    const double r = circle_radius(f), exact = std::sqrt(0.09 - 0.02);
    MESSAGE("radius " << r0 << " -> " << r << " (sharp interface " << exact << ")");
    CHECK(std::abs(r - exact) <= 0.15 * (0.3 - exact)); // speed within 15% at eps = 0.04
    CHECK(s.info().max_energy_rise <= 1e-8);
}

TEST_CASE("restricting the solve to the active set is a roundoff-level approximation") {
    const double eps = 0.04;
    auto a = initial(ScenarioKind::Circle, 1.0, eps, 96);
    auto b = a;
    SolverConfig ca, cb;
    cb.snap_tol = 0.0; // values never snap back, the active set grows with the tails
    Solver sa(a.grid, spec3(), eps, ca), sb(b.grid, spec3(), eps, cb);
    sa.run(a, 0.004);
    sb.run(b, 0.004);
    double d = 0;
    for (size_t k = 0; k < a.u.size(); ++k) d = std::max(d, std::abs(a.u[k] - b.u[k]));
    MESSAGE("max difference " << d << ", active " << sa.info().active_points << " vs " << sb.info().active_points);
    CHECK(d <= 1e-8);
    CHECK(sa.info().active_points < sb.info().active_points);
}

TEST_CASE("explicit and implicit updates agree over a short time") {
    const double eps = 0.05, T = 1e-6;
    auto a = initial(ScenarioKind::Circle, 1.0, eps, 64);
    auto b = a;
    const auto u0 = a.u;
    SolverConfig ce;
    ce.scheme = Scheme::ExplicitFD;
    Solver se(a.grid, spec3(), eps, ce);
    CHECK(se.dt() <= se.explicit_dt_limit());
    SolverConfig ci;
    ci.dt = T / 10;
    Solver si(b.grid, spec3(), eps, ci);
    se.run(a, T);
    si.run(b, T);
    double num = 0, den = 0;
    for (size_t k = 0; k < u0.size(); ++k) {
        num = std::max(num, std::abs(a.u[k] - b.u[k]));
        den = std::max(den, std::abs(a.u[k] - u0[k]));
    }
    MESSAGE("explicit steps " << se.info().step << ", update " << den << ", difference " << num);
    CHECK(den > 1e-5);
    CHECK(num <= 0.02 * den);
}

TEST_CASE("frame values are held") {
    const double eps = 0.04, L = 1.28;
    auto f = initial(ScenarioKind::TripleY, L, eps, 96);
    const auto u0 = f.u;
    Solver s(f.grid, spec3(), eps, SolverConfig{});
    FrameMask fm;
    fm.frame_x = fm.frame_y = std::max(L / 8, 6 * eps);
    s.set_frame(fm, f);
    s.run(f, 10 * s.dt());
    int changed = 0, frame = 0;
    for (int iy = 0; iy < f.grid.n; ++iy)
        for (int ix = 0; ix < f.grid.n; ++ix) {
            if (!fm.in_frame(f.grid, ix, iy)) continue;
            ++frame;
            size_t k = f.grid.idx(ix, iy);
            changed += f.channel(0)[k] != u0[k] || f.channel(1)[k] != u0[f.grid.size() + k];
        }
    CHECK(frame > 0);
    CHECK(changed == 0);
}

TEST_CASE("run bookkeeping: callbacks, time stamps, zero-length runs, determinism") {
    const double eps = 0.05;
    auto f = initial(ScenarioKind::Circle, 1.0, eps, 64);
    const auto u0 = f.u;
    SolverConfig cfg;
    cfg.cadence = 3;
    Solver s(f.grid, spec3(), eps, cfg);

    std::vector<double> ts;
    s.run(f, 0.0, [&](const GridField& g, const StepInfo&) { ts.push_back(g.t); });
    CHECK(ts == std::vector<double>{0.0});
    CHECK(f.u == u0);

    ts.clear();
    std::vector<long> steps;
    const double t_end = 0.0031; // not a multiple of eps^2/8: dt is shortened to fit
    s.run(f, t_end, [&](const GridField& g, const StepInfo& i) {
        ts.push_back(g.t);
        steps.push_back(i.step);
    });
    CHECK(f.t == t_end);
    CHECK(ts.back() == t_end);
    CHECK(s.dt() <= eps * eps / 8);
    for (size_t k = 1; k < ts.size(); ++k) CHECK(ts[k] > ts[k - 1]);
    CHECK(steps.front() == 0);
    for (size_t k = 1; k + 1 < steps.size(); ++k) CHECK(steps[k] % 3 == 0);

    auto g = initial(ScenarioKind::Circle, 1.0, eps, 64);
    Solver s2(g.grid, spec3(), eps, cfg);
    s2.run(g, t_end);
    CHECK(g.u == f.u);
}

TEST_CASE("configuration and numerical failures") {
    const double eps = 0.05;
    Grid g{32, 1.0};
    SolverConfig ce;
    ce.scheme = Scheme::ExplicitFD;
    ce.dt = 1e-3;
    CHECK_THROWS_AS(Solver(g, spec3(), eps, ce), ConfigError);
    CHECK_THROWS_AS(Solver(g, spec3(), 0.0, SolverConfig{}), ConfigError);
    CHECK_THROWS_AS(Solver(g, make_potential(build_simplex(2)), eps, SolverConfig{}), ConfigError);
    CHECK(parse_scheme("explicit") == Scheme::ExplicitFD);
    CHECK(parse_scheme("spectral") == Scheme::SemiImplicitSpectral);
    CHECK_THROWS_AS(parse_scheme("rk4"), ConfigError);

    auto f = initial(ScenarioKind::Circle, 1.0, eps, 64);
    Solver s(f.grid, spec3(), eps, SolverConfig{});
    GridField other(Grid{16, 1.0}, 2, eps);
    CHECK_THROWS_AS(s.step(other), ConfigError);
    f.t = 0.01;
    CHECK_THROWS_AS(s.run(f, 0.005), ConfigError);

    auto bad = f;
    bad.channel(1)[40] = NAN;
    try {
        s.step(bad);
        FAIL("no error for NaN");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("step") != std::string::npos);
    }

    auto out = f;
    out.channel(1)[40] = -0.01; // below the 0-1 edge
    CHECK_THROWS_AS(s.run(out, out.t + s.dt()), MaxPrincipleError);
}
