#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops behind the solvers. Every operation has a scalar
// reference implementation (namespace generic) and, on x86-64, an AVX2 variant
// selected once at startup. The two are equivalence-tested.
namespace spectropt::kernels {

double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double abs_sum(const double* a, std::size_t n);
double sup_abs(const double* a, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
// y = x + beta * y
void xpby(const double* x, double beta, double* y, std::size_t n);
void scale(double alpha, double* a, std::size_t n);
// y = a .* b
void hadamard(const double* a, const double* b, double* y, std::size_t n);

// y = keep .* (diag .* u - ih2 * (neighbour sum)), zero Dirichlet ring outside.
// diag carries 2d/h^2 + vfin, keep is 1.0 on unmasked nodes and 0.0 on masked
// ones; u is zero on masked nodes.
void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2);
void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2);

// "avx2" or "generic"
const char* active_isa();

namespace generic {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double abs_sum(const double* a, std::size_t n);
double sup_abs(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void scale(double alpha, double* a, std::size_t n);
void hadamard(const double* a, const double* b, double* y, std::size_t n);
void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2);
void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2);
}  // namespace generic

#if defined(__x86_64__)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
double abs_sum(const double* a, std::size_t n);
double sup_abs(const double* a, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void scale(double alpha, double* a, std::size_t n);
void hadamard(const double* a, const double* b, double* y, std::size_t n);
void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2);
void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2);
}  // namespace avx2
#endif

}  // namespace spectropt::kernels
