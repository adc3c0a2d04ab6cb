#pragma once

#include <cstddef>

// Grid kernels on periodic n x n fields (row-major, index iy*n + ix).
// Each has a scalar reference and an AVX2 variant; the variant is picked once at runtime.
namespace mcf::kernels {

enum class Isa { Scalar, Avx2 };

bool avx2_available();
Isa active_isa();
// tests and benchmarks; returns the previous setting. Avx2 without hardware support throws.
Isa force_isa(Isa isa);
const char* isa_name(Isa isa);

// out = 5-point Laplacian of u
void laplacian5(const double* u, double* out, int n, double h);
// acc += |D+x u|^2 + |D+y u|^2 (forward differences, periodic)
void add_grad_sq_forward(const double* u, double* acc, int n, double h);
// centered differences
void grad_centered(const double* u, double* gx, double* gy, int n, double h);
// y += a * x
void axpy(double* y, double a, const double* x, std::size_t m);
// compensated sum in a fixed order (deterministic for a given ISA)
double sum(const double* x, std::size_t m);
// compensated dot product, same lane order as sum
double dot(const double* x, const double* y, std::size_t m);

namespace scalar {
void laplacian5(const double* u, double* out, int n, double h);
void add_grad_sq_forward(const double* u, double* acc, int n, double h);
void grad_centered(const double* u, double* gx, double* gy, int n, double h);
void axpy(double* y, double a, const double* x, std::size_t m);
double sum(const double* x, std::size_t m);
double dot(const double* x, const double* y, std::size_t m);
} // namespace scalar

namespace avx2 {
void laplacian5(const double* u, double* out, int n, double h);
void add_grad_sq_forward(const double* u, double* acc, int n, double h);
void grad_centered(const double* u, double* gx, double* gy, int n, double h);
void axpy(double* y, double a, const double* x, std::size_t m);
double sum(const double* x, std::size_t m);
double dot(const double* x, const double* y, std::size_t m);
} // namespace avx2

} // namespace mcf::kernels
