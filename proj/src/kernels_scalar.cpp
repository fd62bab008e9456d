#include <cmath>

#include "spectropt/kernels.hpp"

namespace spectropt::kernels::generic {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double abs_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i]);
  return acc;
}

double sup_abs(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void scale(double alpha, double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) a[i] *= alpha;
}

void hadamard(const double* a, const double* b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a[i] * b[i];
}

void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2) {
  for (std::int64_t i = 0; i < n; ++i) {
    double nb = 0.0;
    if (i > 0) nb += u[i - 1];
    if (i + 1 < n) nb += u[i + 1];
    y[i] = keep[i] * (diag[i] * u[i] - ih2 * nb);
  }
}

void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2) {
  for (std::int64_t r = 0; r < ny; ++r) {
    const std::int64_t base = r * nx;
    for (std::int64_t c = 0; c < nx; ++c) {
      const std::int64_t i = base + c;
      double nb = 0.0;
      if (c > 0) nb += u[i - 1];
      if (c + 1 < nx) nb += u[i + 1];
      if (r > 0) nb += u[i - nx];
      if (r + 1 < ny) nb += u[i + nx];
      y[i] = keep[i] * (diag[i] * u[i] - ih2 * nb);
    }
  }
}

}  // namespace spectropt::kernels::generic
