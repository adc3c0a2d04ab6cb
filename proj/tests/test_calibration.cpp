#include "doctest.h"

#include "mcf/calibration.hpp"
#include "mcf/errors.hpp"

#include <cmath>
#include <iostream>

using namespace mcf;

namespace {

CalibrationField circle_cal() {
    return build_calibration(make_scenario(ScenarioKind::Circle, {1.0, 0.3, 0.02, 0.02}));
}

void dump(const CalibrationReport& r) {
    for (auto& [k, b] : r.orders) {
        std::cout << k << ":";
        for (double v : b.ratios) std::cout << " " << v;
        if (!b.witness.empty()) std::cout << " @ " << b.witness[0] << "," << b.witness[1] << "," << b.witness[2];
        std::cout << "\n";
    }
    for (auto& [k, e] : r.exact) std::cout << k << " " << e.margin << "\n";
}

} // namespace

TEST_CASE("cutoff profile") {
    auto f = circle_cal();
    CHECK(f.zeta(0.0) == 1.0);
    CHECK(f.zeta(f.r_cal) == 0.0);
    double prev = 1.0, h = 1e-7 * f.r_cal;
    for (int k = 1; k <= 1000; ++k) {
        double d = f.r_cal * k / 1000.0, z = f.zeta(d);
        CHECK(z <= prev);
        double q = d / f.r_cal;
        CHECK(z * z <= std::max(1 - q * q, 0.0) + 1e-15);
        CHECK(z * z >= 1 - 4 * q * q);
        prev = z;
    }
    // C^1 at the joint
    double d0 = 0.6 * f.r_cal;
    CHECK((f.zeta(d0 + h) - f.zeta(d0)) / h == doctest::Approx((f.zeta(d0) - f.zeta(d0 - h)) / h).epsilon(1e-5));
}

TEST_CASE("cap function") {
    CHECK(cap_fn(0.3) == 0.3);
    CHECK(cap_fn(0.5) == 0.5);
    CHECK(cap_fn(1.0) == 1.0);
    CHECK(cap_fn(3.0) == 1.0);
    double prev = 0;
    for (int k = 0; k <= 2000; ++k) {
        double d = k / 1000.0, v = cap_fn(d);
        CHECK(v >= prev);
        CHECK(v <= 1.1 * std::min(d, 1.0) + 1e-15);
        CHECK(v >= 0.5 * std::min(d, 1.0));
        prev = v;
    }
}

TEST_CASE("flat field on the interface") {
    auto f = build_calibration(make_scenario(ScenarioKind::Flat, {1.0, 0.3, 0.1, 0.0}));
    auto e = f.xi_pair({0.3, 0.5}, 0.0, 0, 1);
    CHECK(e[0] == doctest::Approx(0.0).scale(1.0));
    CHECK(e[1] == doctest::Approx(1.0));
    auto b = f.B({0.3, 0.5}, 0.0);
    CHECK(b[0] == 0.0);
    CHECK(b[1] == 0.0);
}

TEST_CASE("zero sum and antisymmetry") {
    for (auto k : {ScenarioKind::Flat, ScenarioKind::Circle, ScenarioKind::TripleY}) {
        auto f = build_calibration(make_scenario(k, {1.0, 0.3, 0.02, 0.0}));
        for (int a = 0; a < 40; ++a)
            for (int b = 0; b < 40; ++b) {
                Vec2 x{(a + 0.37) / 40.0, (b + 0.61) / 40.0}, v[3];
                f.xi(x, 0.01, v);
                CHECK(std::abs(v[0][0] + v[1][0] + v[2][0]) <= 1e-14);
                CHECK(std::abs(v[0][1] + v[1][1] + v[2][1]) <= 1e-14);
                auto p = f.xi_pair(x, 0.01, 0, 2), q = f.xi_pair(x, 0.01, 2, 0);
                CHECK(p[0] == -q[0]);
                CHECK(p[1] == -q[1]);
            }
    }
}

TEST_CASE("circle length at half the tube radius") {
    auto f = circle_cal();
    auto c = f.sol.center();
    double R = f.sol.radius(0.0);
    Vec2 x{c[0] + R + 0.5 * f.r_cal, c[1]};
    auto e = f.xi_pair(x, 0.0, 0, 1);
    double l2 = e[0] * e[0] + e[1] * e[1];
    CHECK(l2 == doctest::Approx(0.75 * 0.75).epsilon(1e-12));
    double d = 0.5 * f.r_cal;
    CHECK(l2 >= 1 - f.C_len * d * d);
    CHECK(l2 <= 1 - f.c_len * d * d);
}

TEST_CASE("verify calibration, all scenarios") {
    for (auto k : {ScenarioKind::Flat, ScenarioKind::Circle, ScenarioKind::TripleY}) {
        auto f = build_calibration(make_scenario(k, {1.0, 0.3, 0.02, 0.0}));
        auto r = verify_calibration(f, 20000, 5, 3);
        INFO(scenario_name(k) << " first failure " << r.first_failure);
        if (!r.pass) dump(r);
        CHECK(r.pass);
        if (k != ScenarioKind::Circle)
            for (auto name : {"2.5a_transport", "2.5b_length_transport", "2.5d_gradB_normal", "2.5e_gradB_mixed"})
                CHECK(r.orders[name].constant <= 1e-6);
    }
}

TEST_CASE("wrong velocity is detected") {
    auto f = circle_cal();
    f.b_scale = 1.5;
    auto r = verify_calibration(f, 20000, 5, 3);
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.orders["2.5c_normal_velocity"].pass);
}

TEST_CASE("non-zero sum is detected") {
    auto f = circle_cal();
    f.xi0_shift = {1e-3, 0.0};
    auto r = verify_calibration(f, 5000, 5, 3);
    CHECK_FALSE(r.exact["2.5h_zero_sum"].pass);
}
