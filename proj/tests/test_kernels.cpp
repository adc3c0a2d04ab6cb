#include "doctest.h"

#include "mcf/errors.hpp"
#include "mcf/kernels.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <tuple>
#include <vector>

using namespace mcf;
namespace K = mcf::kernels;

namespace {

const double two_pi = 2.0 * std::numbers::pi;

std::vector<double> random_field(std::size_t m, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(m);
    for (auto& x : v) x = U(rng);
    return v;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

struct IsaGuard {
    K::Isa prev = K::active_isa();
    ~IsaGuard() { K::force_isa(prev); }
};

std::vector<K::Isa> isas() {
    std::vector<K::Isa> v{K::Isa::Scalar};
    if (K::avx2_available()) v.push_back(K::Isa::Avx2);
    return v;
}

} // namespace

TEST_CASE("5-point Laplacian reproduces its Fourier symbol") {
    IsaGuard g;
    for (auto isa : isas()) {
        K::force_isa(isa);
        for (int n : {8, 13, 32}) {
            const double L = 1.3, h = L / n;
            for (auto [kx, ky] : {std::pair{1, 0}, {2, 3}, {n / 2, 1}}) {
                std::vector<double> u(n * n), out(n * n);
                for (int iy = 0; iy < n; ++iy)
                    for (int ix = 0; ix < n; ++ix) u[iy * n + ix] = std::cos(two_pi * (kx * ix + ky * iy) / n + 0.3);
                K::laplacian5(u.data(), out.data(), n, h);
                const double sx = std::sin(std::numbers::pi * kx / n), sy = std::sin(std::numbers::pi * ky / n);
                const double sym = -4.0 / (h * h) * (sx * sx + sy * sy);
                double err = 0.0;
                for (int k = 0; k < n * n; ++k) err = std::max(err, std::abs(out[k] - sym * u[k]));
                CHECK(err <= 1e-10 * std::abs(sym) + 1e-9);
            }
        }
    }
}

TEST_CASE("centered gradient reproduces its Fourier symbol") {
    IsaGuard g;
    for (auto isa : isas()) {
        K::force_isa(isa);
        const int n = 21, kx = 3, ky = 2;
        const double h = 0.05;
        std::vector<double> u(n * n), gx(n * n), gy(n * n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) u[iy * n + ix] = std::sin(two_pi * (kx * ix + ky * iy) / n);
        K::grad_centered(u.data(), gx.data(), gy.data(), n, h);
        double err = 0.0;
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                double c = std::cos(two_pi * (kx * ix + ky * iy) / n);
                err = std::max(err, std::abs(gx[iy * n + ix] - c * std::sin(two_pi * kx / n) / h));
                err = std::max(err, std::abs(gy[iy * n + ix] - c * std::sin(two_pi * ky / n) / h));
            }
        CHECK(err <= 1e-11);
    }
}

TEST_CASE("forward-difference energy equals -u.Lap u (summation by parts)") {
    IsaGuard g;
    for (auto isa : isas()) {
        K::force_isa(isa);
        for (int n : {9, 16, 31}) {
            const double h = 0.1;
            auto u = random_field(n * n, n);
            std::vector<double> acc(n * n, 0.0), lap(n * n);
            K::add_grad_sq_forward(u.data(), acc.data(), n, h);
            K::laplacian5(u.data(), lap.data(), n, h);
            double lhs = K::sum(acc.data(), acc.size());
            double rhs = -K::dot(u.data(), lap.data(), u.size());
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            // accumulation adds on top of existing content
            std::vector<double> acc2(n * n, 1.0);
            K::add_grad_sq_forward(u.data(), acc2.data(), n, h);
            CHECK(acc2[5] - 1.0 == doctest::Approx(acc[5]).epsilon(1e-14));
        }
    }
}

TEST_CASE("compensated reductions against an extended-precision reference") {
    IsaGuard g;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> E(-8.0, 8.0);
    for (std::size_t m : {0u, 1u, 3u, 4u, 5u, 1000u, 100003u}) {
        std::vector<double> x(m), y(m);
        for (std::size_t k = 0; k < m; ++k) {
            x[k] = std::ldexp(E(rng), static_cast<int>(E(rng) * 4)); // spread magnitudes
            y[k] = E(rng);
        }
        long double rs = 0, rd = 0;
        for (std::size_t k = 0; k < m; ++k) {
            rs += x[k];
            rd += static_cast<long double>(x[k]) * y[k];
        }
        double scale = 0.0;
        for (double v : x) scale += std::abs(v);
        for (auto isa : isas()) {
            K::force_isa(isa);
            CHECK(std::abs(K::sum(x.data(), m) - static_cast<double>(rs)) <= 1e-15 * scale + 1e-300);
            CHECK(std::abs(K::dot(x.data(), y.data(), m) - static_cast<double>(rd)) <= 1e-14 * 8 * scale + 1e-300);
        }
    }
    // addends below half an ulp of the running sum: naive summation returns 1 exactly
    std::vector<double> c(40001, 1e-16);
    c[0] = 1.0;
    for (auto isa : isas()) {
        K::force_isa(isa);
        CHECK(K::sum(c.data(), c.size()) == doctest::Approx(1.0 + 4e-12).epsilon(1e-15));
        CHECK(K::sum(c.data(), c.size()) != 1.0);
    }
}

TEST_CASE("AVX2 variants agree with the scalar reference") {
    if (!K::avx2_available()) {
        MESSAGE("AVX2 not available; equivalence not exercised");
        CHECK_THROWS_AS(K::force_isa(K::Isa::Avx2), ConfigError);
        return;
    }
    IsaGuard g;
    for (int n : {5, 8, 13, 64, 67}) {
        const std::size_t m = static_cast<std::size_t>(n) * n;
        const double h = 1.0 / n;
        auto u = random_field(m, 100 + n), v = random_field(m, 200 + n);
        auto run = [&](K::Isa isa) {
            K::force_isa(isa);
            std::vector<std::vector<double>> out(5, std::vector<double>(m, 0.0));
            K::laplacian5(u.data(), out[0].data(), n, h);
            K::add_grad_sq_forward(u.data(), out[1].data(), n, h);
            K::grad_centered(u.data(), out[2].data(), out[3].data(), n, h);
            out[4] = v;
            K::axpy(out[4].data(), -0.37, u.data(), m);
            double s = K::sum(u.data(), m), d = K::dot(u.data(), v.data(), m);
            return std::make_tuple(out, s, d);
        };
        auto [a, sa, da] = run(K::Isa::Scalar);
        auto [b, sb, db] = run(K::Isa::Avx2);
        // stencils may differ by fused multiply-add rounding only
        CHECK(max_abs_diff(a[0], b[0]) <= 1e-12 * n * n);
        CHECK(max_abs_diff(a[1], b[1]) <= 1e-12 * n * n);
        CHECK(max_abs_diff(a[2], b[2]) <= 1e-13 * n);
        CHECK(max_abs_diff(a[3], b[3]) <= 1e-13 * n);
        CHECK(max_abs_diff(a[4], b[4]) <= 1e-15);
        // the reductions use the same lane order
        CHECK(sa == doctest::Approx(sb).epsilon(1e-15));
        CHECK(da == doctest::Approx(db).epsilon(1e-15));
    }
}

TEST_CASE("dispatch bookkeeping") {
    IsaGuard g;
    CHECK(std::string(K::isa_name(K::Isa::Scalar)) == "scalar");
    CHECK(std::string(K::isa_name(K::Isa::Avx2)) == "avx2");
    auto prev = K::force_isa(K::Isa::Scalar);
    CHECK(K::active_isa() == K::Isa::Scalar);
    K::force_isa(prev);
    CHECK(K::active_isa() == prev);
}
