#include "mcf/kernels.hpp"

#include "mcf/errors.hpp"

namespace mcf::kernels {

namespace {

Isa detect() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

Isa& current() {
    static Isa isa = detect();
    return isa;
}

} // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current(); }

Isa force_isa(Isa isa) {
    if (isa == Isa::Avx2 && !avx2_available()) throw ConfigError("AVX2 not available on this CPU");
    Isa prev = current();
    current() = isa;
    return prev;
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#define MCF_DISPATCH(fn, ...) (current() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))

void laplacian5(const double* u, double* out, int n, double h) { MCF_DISPATCH(laplacian5, u, out, n, h); }
void add_grad_sq_forward(const double* u, double* acc, int n, double h) { MCF_DISPATCH(add_grad_sq_forward, u, acc, n, h); }
void grad_centered(const double* u, double* gx, double* gy, int n, double h) { MCF_DISPATCH(grad_centered, u, gx, gy, n, h); }
void axpy(double* y, double a, const double* x, std::size_t m) { MCF_DISPATCH(axpy, y, a, x, m); }
double sum(const double* x, std::size_t m) { return MCF_DISPATCH(sum, x, m); }
double dot(const double* x, const double* y, std::size_t m) { return MCF_DISPATCH(dot, x, y, m); }

} // namespace mcf::kernels
