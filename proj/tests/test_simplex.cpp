#include "doctest.h"

#include "mcf/errors.hpp"
#include "mcf/potential.hpp"
#include "mcf/simplex.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mcf;

namespace {
double dist(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}
const double deg = std::numbers::pi / 180.0;
} // namespace

TEST_CASE("vertices for N=2 and N=3") {
    auto g2 = build_simplex(2);
    CHECK(g2.vertices[0][0] == 0.0);
    CHECK(g2.vertices[1][0] == 1.0);
    auto g3 = build_simplex(3);
    CHECK(g3.vertices[2][0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g3.vertices[2][1] == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("unit edges and equidistant barycenter for N up to 6") {
    for (int n = 2; n <= 6; ++n) {
        auto g = build_simplex(n);
        auto c = g.barycenter();
        double r0 = dist(c, g.vertices[0]);
        for (int i = 0; i < n; ++i) {
            CHECK(dist(c, g.vertices[i]) == doctest::Approx(r0).epsilon(1e-13));
            for (int j = i + 1; j < n; ++j) CHECK(dist(g.vertices[i], g.vertices[j]) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("parameter range checks") {
    CHECK_THROWS_AS(build_simplex(3, 0.3, std::numbers::pi / 12), ConfigError);
    CHECK_THROWS_AS(build_simplex(3, 0.2, std::numbers::pi / 6), ConfigError);
    CHECK_THROWS_AS(build_simplex(1), ConfigError);
}

TEST_CASE("classify examples") {
    auto g = build_simplex(3);
    auto lab = classify(g, g.vertices[0]);
    CHECK(lab.i == 0);
    CHECK(lab.j == 1);
    CHECK(lab.near == 0);
    REQUIRE(lab.ball.has_value());
    CHECK(*lab.ball == 0);

    auto l3 = classify(g, g.vertices[2]);
    CHECK(l3.i == 0);
    CHECK(l3.j == 2);
    CHECK(l3.near == 2);

    auto lb = classify(g, Point{0.5, std::sqrt(3.0) / 6.0});
    CHECK(lb.i == 0);
    CHECK(lb.j == 1);
    CHECK_FALSE(lb.ball.has_value());

    auto lt = classify(g, Point{0.5, 0.01});
    CHECK(lt.i == 0);
    CHECK(lt.j == 1);
    CHECK(0.01 <= g.r_u * std::sin(g.beta_n));
    CHECK(lt.tube.has_value());

    CHECK_THROWS_AS(classify(g, Point{0.5, -0.1}), DomainError);
}

TEST_CASE("midline goes to the lower vertex") {
    auto g = build_simplex(3);
    auto lab = classify(g, Point{0.5, 0.05});
    CHECK(lab.near == 0);
    CHECK(lab.far == 1);
}

TEST_CASE("projections and angle examples") {
    auto g = build_simplex(3);
    auto p = project_edge(g, Point{0.5, 0.1}, 0, 1);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.0));
    auto q = project_edge(g, Point{0.3, 0.0}, 0, 1);
    CHECK(q[0] == doctest::Approx(0.3));
    // alpha_1 plus a perpendicular offset projects to alpha_1
    auto e = project_edge(g, Point{0.0, 0.1}, 0, 1);
    CHECK(e[0] == doctest::Approx(0.0));

    Point u{0.2 * std::cos(20 * deg), 0.2 * std::sin(20 * deg)};
    auto pr = project_radial(g, u, 0, 1);
    CHECK(pr[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(pr[1] == doctest::Approx(0.0));
    auto pv = project_radial(g, g.vertices[0], 0, 1);
    CHECK(pv[0] == 0.0);

    Point v{0.2 * std::cos(15 * deg), 0.2 * std::sin(15 * deg)};
    CHECK(angle_beta(g, v, 0, 1) == doctest::Approx(std::numbers::pi / 12).epsilon(1e-14));
    CHECK(angle_beta(g, Point{0.4, 0.0}, 0, 1) == 0.0);
    CHECK_THROWS_AS(angle_beta(g, g.vertices[0], 0, 1), DomainError);
}

TEST_CASE("partition, contraction, radial consistency, projection estimate") {
    auto g = build_simplex(3);
    auto pts = simplex_samples(g, 100000, 7);
    std::mt19937_64 rng(3);
    int n_est = 0;
    for (std::size_t s = 0; s < pts.size(); ++s) {
        const auto& u = pts[s];
        auto lab = classify(g, u);
        int hits = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) hits += (lab.i == i && lab.j == j);
        REQUIRE(hits == 1);
        int i = lab.near, j = lab.far;
        double r = dist(u, g.vertices[i]);
        if (r > 0 && r <= 1) {
            auto pr = project_radial(g, u, i, j);
            REQUIRE(std::abs(dist(pr, g.vertices[i]) - r) <= 1e-12);
        }
        const auto& v = pts[(s * 7919 + 13) % pts.size()];
        auto lv = classify(g, v);
        if (lv.i == lab.i && lv.j == lab.j) {
            auto pu = project_edge(g, u, lab.i, lab.j);
            auto pv = project_edge(g, v, lab.i, lab.j);
            REQUIRE(dist(pu, pv) <= dist(u, v) + 1e-15);
        }
        if (lab.tube && !lab.ball) {
            auto pu = project_edge(g, u, i, j);
            auto pr = project_radial(g, u, i, j);
            double d = dist_edge(g, u, i, j);
            REQUIRE(dist(pr, pu) <= d * d / (2.0 * dist(pu, g.vertices[i])) + 1e-10);
            ++n_est;
        }
    }
    CHECK(n_est > 1000);
}
