#include "mcf/kernels.hpp"

namespace mcf::kernels::scalar {

void laplacian5(const double* u, double* out, int n, double h) {
    const double ih2 = 1.0 / (h * h);
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        const double* dn = u + static_cast<std::size_t>((iy + n - 1) % n) * n;
        double* o = out + static_cast<std::size_t>(iy) * n;
        for (int ix = 0; ix < n; ++ix) {
            int l = ix == 0 ? n - 1 : ix - 1, rr = ix + 1 == n ? 0 : ix + 1;
            o[ix] = ((r[l] + r[rr]) + (up[ix] + dn[ix]) - 4.0 * r[ix]) * ih2;
        }
    }
}

void add_grad_sq_forward(const double* u, double* acc, int n, double h) {
    const double ih = 1.0 / h;
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        double* a = acc + static_cast<std::size_t>(iy) * n;
        for (int ix = 0; ix < n; ++ix) {
            double dx = (r[ix + 1 == n ? 0 : ix + 1] - r[ix]) * ih;
            double dy = (up[ix] - r[ix]) * ih;
            a[ix] += dx * dx + dy * dy;
        }
    }
}

void grad_centered(const double* u, double* gx, double* gy, int n, double h) {
    const double i2h = 0.5 / h;
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        const double* dn = u + static_cast<std::size_t>((iy + n - 1) % n) * n;
        double* ox = gx + static_cast<std::size_t>(iy) * n;
        double* oy = gy + static_cast<std::size_t>(iy) * n;
        for (int ix = 0; ix < n; ++ix) {
            int l = ix == 0 ? n - 1 : ix - 1, rr = ix + 1 == n ? 0 : ix + 1;
            ox[ix] = (r[rr] - r[l]) * i2h;
            oy[ix] = (up[ix] - dn[ix]) * i2h;
        }
    }
}

void axpy(double* y, double a, const double* x, std::size_t m) {
    for (std::size_t k = 0; k < m; ++k) y[k] += a * x[k];
}

namespace {

template <class F>
double lane_sum(F term, std::size_t m) {
    // four interleaved Kahan lanes, combined in lane order (same association as the AVX2 variant)
    double s[4] = {0, 0, 0, 0}, c[4] = {0, 0, 0, 0};
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4)
        for (int l = 0; l < 4; ++l) {
            double y = term(k + l) - c[l];
            double t = s[l] + y;
            c[l] = (t - s[l]) - y;
            s[l] = t;
        }
    double tot = 0.0, comp = 0.0;
    auto add = [&](double v) {
        double y = v - comp;
        double t = tot + y;
        comp = (t - tot) - y;
        tot = t;
    };
    for (int l = 0; l < 4; ++l) add(s[l]);
    for (int l = 0; l < 4; ++l) add(-c[l]);
    for (; k < m; ++k) add(term(k));
    return tot;
}

} // namespace

double sum(const double* x, std::size_t m) {
    return lane_sum([x](std::size_t k) { return x[k]; }, m);
}

double dot(const double* x, const double* y, std::size_t m) {
    return lane_sum([x, y](std::size_t k) { return x[k] * y[k]; }, m);
}

} // namespace mcf::kernels::scalar
