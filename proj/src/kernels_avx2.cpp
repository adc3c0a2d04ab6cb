#include "mcf/kernels.hpp"

#include <immintrin.h>

// Interior rows/columns vectorized; the periodic wrap columns fall back to scalar code.
namespace mcf::kernels::avx2 {

#define MCF_AVX2 __attribute__((target("avx2,fma")))

MCF_AVX2 void laplacian5(const double* u, double* out, int n, double h) {
    const double ih2 = 1.0 / (h * h);
    const __m256d c4 = _mm256_set1_pd(4.0), s = _mm256_set1_pd(ih2);
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        const double* dn = u + static_cast<std::size_t>((iy + n - 1) % n) * n;
        double* o = out + static_cast<std::size_t>(iy) * n;
        auto one = [&](int ix) {
            int l = ix == 0 ? n - 1 : ix - 1, rr = ix + 1 == n ? 0 : ix + 1;
            o[ix] = ((r[l] + r[rr]) + (up[ix] + dn[ix]) - 4.0 * r[ix]) * ih2;
        };
        one(0);
        int ix = 1;
        for (; ix + 4 < n; ix += 4) {
            __m256d c = _mm256_loadu_pd(r + ix);
            __m256d lr = _mm256_add_pd(_mm256_loadu_pd(r + ix - 1), _mm256_loadu_pd(r + ix + 1));
            __m256d ud = _mm256_add_pd(_mm256_loadu_pd(up + ix), _mm256_loadu_pd(dn + ix));
            __m256d v = _mm256_sub_pd(_mm256_add_pd(lr, ud), _mm256_mul_pd(c4, c));
            _mm256_storeu_pd(o + ix, _mm256_mul_pd(v, s));
        }
        for (; ix < n; ++ix) one(ix);
    }
}

MCF_AVX2 void add_grad_sq_forward(const double* u, double* acc, int n, double h) {
    const double ih = 1.0 / h;
    const __m256d vih = _mm256_set1_pd(ih);
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        double* a = acc + static_cast<std::size_t>(iy) * n;
        int ix = 0;
        for (; ix + 4 < n; ix += 4) {
            __m256d c = _mm256_loadu_pd(r + ix);
            __m256d dx = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(r + ix + 1), c), vih);
            __m256d dy = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(up + ix), c), vih);
            __m256d q = _mm256_fmadd_pd(dx, dx, _mm256_mul_pd(dy, dy));
            _mm256_storeu_pd(a + ix, _mm256_add_pd(_mm256_loadu_pd(a + ix), q));
        }
        for (; ix < n; ++ix) {
            double dx = (r[ix + 1 == n ? 0 : ix + 1] - r[ix]) * ih;
            double dy = (up[ix] - r[ix]) * ih;
            a[ix] += dx * dx + dy * dy;
        }
    }
}

MCF_AVX2 void grad_centered(const double* u, double* gx, double* gy, int n, double h) {
    const double i2h = 0.5 / h;
    const __m256d v = _mm256_set1_pd(i2h);
    for (int iy = 0; iy < n; ++iy) {
        const double* r = u + static_cast<std::size_t>(iy) * n;
        const double* up = u + static_cast<std::size_t>((iy + 1) % n) * n;
        const double* dn = u + static_cast<std::size_t>((iy + n - 1) % n) * n;
        double* ox = gx + static_cast<std::size_t>(iy) * n;
        double* oy = gy + static_cast<std::size_t>(iy) * n;
        auto one = [&](int ix) {
            int l = ix == 0 ? n - 1 : ix - 1, rr = ix + 1 == n ? 0 : ix + 1;
            ox[ix] = (r[rr] - r[l]) * i2h;
            oy[ix] = (up[ix] - dn[ix]) * i2h;
        };
        one(0);
        int ix = 1;
        for (; ix + 4 < n; ix += 4) {
            _mm256_storeu_pd(ox + ix, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(r + ix + 1), _mm256_loadu_pd(r + ix - 1)), v));
            _mm256_storeu_pd(oy + ix, _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(up + ix), _mm256_loadu_pd(dn + ix)), v));
        }
        for (; ix < n; ++ix) one(ix);
    }
}

MCF_AVX2 void axpy(double* y, double a, const double* x, std::size_t m) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4)
        _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), _mm256_mul_pd(va, _mm256_loadu_pd(x + k))));
    for (; k < m; ++k) y[k] += a * x[k];
}

template <bool Dot>
MCF_AVX2 double lane_sum(const double* x, const double* z, std::size_t m) {
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m; k += 4) {
        __m256d v = _mm256_loadu_pd(x + k);
        if constexpr (Dot) v = _mm256_mul_pd(v, _mm256_loadu_pd(z + k));
        __m256d y = _mm256_sub_pd(v, c);
        __m256d t = _mm256_add_pd(s, y);
        c = _mm256_sub_pd(_mm256_sub_pd(t, s), y);
        s = t;
    }
    alignas(32) double sl[4], cl[4];
    _mm256_store_pd(sl, s);
    _mm256_store_pd(cl, c);
    double tot = 0.0, comp = 0.0;
    auto add = [&](double v) {
        double y = v - comp;
        double t = tot + y;
        comp = (t - tot) - y;
        tot = t;
    };
    for (int l = 0; l < 4; ++l) add(sl[l]);
    for (int l = 0; l < 4; ++l) add(-cl[l]);
    for (; k < m; ++k) add(Dot ? x[k] * z[k] : x[k]);
    return tot;
}

MCF_AVX2 double sum(const double* x, std::size_t m) { return lane_sum<false>(x, nullptr, m); }

MCF_AVX2 double dot(const double* x, const double* y, std::size_t m) { return lane_sum<true>(x, y, m); }

} // namespace mcf::kernels::avx2
