#include "spectropt/kernels.hpp"

namespace spectropt::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && SPECTROPT_HAVE_AVX2_TU
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const bool kUseAvx2 = cpu_has_avx2();

}  // namespace

#if defined(__x86_64__) && SPECTROPT_HAVE_AVX2_TU
#define SPECTROPT_PICK(fn) (kUseAvx2 ? avx2::fn : generic::fn)
#else
#define SPECTROPT_PICK(fn) (generic::fn)
#endif

double dot(const double* a, const double* b, std::size_t n) {
  return SPECTROPT_PICK(dot)(a, b, n);
}
double sum(const double* a, std::size_t n) { return SPECTROPT_PICK(sum)(a, n); }
double abs_sum(const double* a, std::size_t n) {
  return SPECTROPT_PICK(abs_sum)(a, n);
}
double sup_abs(const double* a, std::size_t n) {
  return SPECTROPT_PICK(sup_abs)(a, n);
}
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  SPECTROPT_PICK(axpy)(alpha, x, y, n);
}
void xpby(const double* x, double beta, double* y, std::size_t n) {
  SPECTROPT_PICK(xpby)(x, beta, y, n);
}
void scale(double alpha, double* a, std::size_t n) {
  SPECTROPT_PICK(scale)(alpha, a, n);
}
void hadamard(const double* a, const double* b, double* y, std::size_t n) {
  SPECTROPT_PICK(hadamard)(a, b, y, n);
}
void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2) {
  SPECTROPT_PICK(stencil_1d)(u, y, diag, keep, n, ih2);
}
void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2) {
  SPECTROPT_PICK(stencil_2d)(u, y, diag, keep, nx, ny, ih2);
}

const char* active_isa() { return kUseAvx2 ? "avx2" : "generic"; }

}  // namespace spectropt::kernels
