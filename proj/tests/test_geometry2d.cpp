#include "doctest.h"

#include "mcf/errors.hpp"
#include "mcf/geometry2d.hpp"

#include <cmath>
#include <numbers>

using namespace mcf;

namespace {

StrongSolution circle() { return make_scenario(ScenarioKind::Circle, {1.0, 0.3, 0.02, 0.02}); }
StrongSolution triple() { return make_scenario(ScenarioKind::TripleY, {1.28, 0.3, 0.01, 0.0}); }

} // namespace

TEST_CASE("circle radius and area decay") {
    auto s = circle();
    CHECK(s.radius(0.02) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-14));
    CHECK(s.radius(0.02) == doctest::Approx(0.2236).epsilon(1e-4));
    const double h = 1e-5;
    for (double t : {0.0, 0.01, 0.019}) {
        double t0 = std::max(t - h, 0.0);
        double rate = (s.phase_area(t + h, 0) - s.phase_area(t0, 0)) / (t + h - t0);
        CHECK(rate == doctest::Approx(-2 * std::numbers::pi).epsilon(1e-8));
        CHECK(s.interface_length(t) == doctest::Approx(2 * std::numbers::pi * s.radius(t)));
    }
    CHECK_THROWS_AS(make_scenario(ScenarioKind::Circle, {1.0, 0.3, 0.045, 0.0}), ConfigError);
    CHECK_THROWS_AS(make_scenario(ScenarioKind::Circle, {1.0, 0.45, 0.01, 0.02}), ConfigError);
}

TEST_CASE("circle distance, normal and V n = H") {
    auto s = circle();
    auto c = s.center();
    Vec2 x{c[0] + 0.1, c[1] + 0.25};
    double r = std::hypot(0.1, 0.25);
    CHECK(s.sdist(x, 0.01, 0, 1) == doctest::Approx(r - s.radius(0.01)));
    CHECK(s.sdist(x, 0.01, 1, 0) == doctest::Approx(s.radius(0.01) - r));
    auto n = s.normal(x, 0.01, 0, 1), m = s.normal(x, 0.01, 1, 0);
    CHECK(n[0] == -m[0]);
    CHECK(n[1] == -m[1]);
    auto H = s.curvature(x, 0.01, 0, 1);
    double V = s.speed(x, 0.01, 0, 1);
    CHECK(V * n[0] == doctest::Approx(H[0]));
    CHECK(V * n[1] == doctest::Approx(H[1]));
    CHECK(V == doctest::Approx(-1 / s.radius(0.01)));
    CHECK(s.phase(c, 0.0) == 0);
    CHECK(s.phase({0.0, 0.0}, 0.0) == 1);
    CHECK_FALSE(s.has_interface(0, 2));
    CHECK(std::isinf(s.dist(x, 0.0, 1, 2)));
}

TEST_CASE("flat interface") {
    auto s = make_scenario(ScenarioKind::Flat, {1.0, 0.3, 0.1, 0.0});
    Vec2 x{0.3, 0.7};
    auto n = s.normal(x, 0.0, 0, 1);
    CHECK(n[0] == 0.0);
    CHECK(n[1] == 1.0);
    CHECK(s.speed(x, 0.05, 0, 1) == 0.0);
    CHECK(s.curvature(x, 0.05, 0, 1)[1] == 0.0);
    CHECK(s.sdist(x, 0.0, 0, 1) == doctest::Approx(0.2));
    CHECK(s.phase(x, 0.0) == 1);
    CHECK(s.phase({0.3, 0.5}, 0.0) == 0);
}

TEST_CASE("triple junction geometry") {
    auto s = triple();
    auto c = s.center();
    // pairwise angles between rays are 120 degrees
    Vec2 d01 = s.ray_dir(0, 1), d12 = s.ray_dir(1, 2), d02 = s.ray_dir(0, 2);
    auto ang = [](Vec2 a, Vec2 b) { return std::acos(a[0] * b[0] + a[1] * b[1]); };
    for (double a : {ang(d01, d12), ang(d12, d02), ang(d02, d01)})
        CHECK(std::abs(a - 2 * std::numbers::pi / 3) <= 1e-12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (i == j) continue;
            Vec2 x{c[0] + 0.2 * s.ray_dir(i, j)[0], c[1] + 0.2 * s.ray_dir(i, j)[1]};
            CHECK(s.dist(x, 0.0, i, j) <= 1e-15);
            CHECK(s.speed(x, 0.0, i, j) == 0.0);
            auto n = s.normal(x, 0.0, i, j);
            // stepping along n lands in phase j, against it in phase i
            CHECK(s.phase({x[0] + 0.01 * n[0], x[1] + 0.01 * n[1]}, 0.0) == j);
            CHECK(s.phase({x[0] - 0.01 * n[0], x[1] - 0.01 * n[1]}, 0.0) == i);
            Vec2 y{x[0] + 0.03 * n[0], x[1] + 0.03 * n[1]};
            CHECK(s.sdist(y, 0.0, i, j) == doctest::Approx(0.03));
            CHECK(s.sdist(y, 0.0, j, i) == doctest::Approx(-0.03));
        }
    CHECK(s.phase({c[0], c[1] + 0.3}, 0.0) == 0); // tie on the 90 degree ray
    // balanced junction: the three normals sum to zero
    auto a = s.normal(c, 0.0, 0, 1), b = s.normal(c, 0.0, 1, 2), e = s.normal(c, 0.0, 2, 0);
    CHECK(std::abs(a[0] + b[0] + e[0]) < 1e-15);
    CHECK(std::abs(a[1] + b[1] + e[1]) < 1e-15);
}

TEST_CASE("phase areas by counting") {
    for (auto k : {ScenarioKind::TripleY, ScenarioKind::Circle, ScenarioKind::Flat}) {
        auto s = make_scenario(k, {1.0, 0.3, 0.0, 0.0});
        const int n = 1000;
        double cnt[3] = {0, 0, 0};
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) cnt[s.phase({(a + 0.5) / n, (b + 0.5) / n}, 0.0)] += 1.0 / (n * n);
        for (int i = 0; i < 3; ++i) CHECK(cnt[i] == doctest::Approx(s.phase_area(0.0, i)).epsilon(2e-3).scale(1.0));
    }
}
