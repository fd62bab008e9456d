#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "spectropt/kernels.hpp"

namespace spectropt::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += a[i];
  return s;
}

double abs_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask));
  double s = hsum(acc);
  for (; i < n; ++i) s += std::fabs(a[i]);
  return s;
}

double sup_abs(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(_mm256_loadu_pd(a + i), kAbsMask));
  double m = hmax(acc);
  for (; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_add_pd(vy, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_mul_pd(vb, _mm256_loadu_pd(y + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vy));
  }
  for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void scale(double alpha, double* a, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(a + i, _mm256_mul_pd(va, _mm256_loadu_pd(a + i)));
  for (; i < n; ++i) a[i] *= alpha;
}

void hadamard(const double* a, const double* b, double* y, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(
        y + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
  for (; i < n; ++i) y[i] = a[i] * b[i];
}

void stencil_1d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t n, double ih2) {
  if (n < 8) {
    generic::stencil_1d(u, y, diag, keep, n, ih2);
    return;
  }
  y[0] = keep[0] * (diag[0] * u[0] - ih2 * u[1]);
  const __m256d vih2 = _mm256_set1_pd(ih2);
  std::int64_t i = 1;
  for (; i + 4 <= n - 1; i += 4) {
    __m256d nb = _mm256_add_pd(_mm256_loadu_pd(u + i - 1),
                               _mm256_loadu_pd(u + i + 1));
    __m256d v = _mm256_mul_pd(_mm256_loadu_pd(diag + i),
                              _mm256_loadu_pd(u + i));
    v = _mm256_sub_pd(v, _mm256_mul_pd(vih2, nb));
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(keep + i), v));
  }
  for (; i < n - 1; ++i)
    y[i] = keep[i] * (diag[i] * u[i] - ih2 * (u[i - 1] + u[i + 1]));
  y[n - 1] = keep[n - 1] * (diag[n - 1] * u[n - 1] - ih2 * u[n - 2]);
}

namespace {

// Interior rows (both vertical neighbours present); first/last column scalar.
inline void stencil_row(const double* u, double* y, const double* diag,
                        const double* keep, const double* up, const double* dn,
                        std::int64_t nx, double ih2) {
  const bool has_up = up != nullptr;
  const bool has_dn = dn != nullptr;
  auto at = [&](std::int64_t c) {
    double nb = 0.0;
    if (c > 0) nb += u[c - 1];
    if (c + 1 < nx) nb += u[c + 1];
    if (has_up) nb += up[c];
    if (has_dn) nb += dn[c];
    y[c] = keep[c] * (diag[c] * u[c] - ih2 * nb);
  };
  at(0);
  if (nx == 1) return;
  const __m256d vih2 = _mm256_set1_pd(ih2);
  std::int64_t c = 1;
  if (has_up && has_dn) {
    for (; c + 4 <= nx - 1; c += 4) {
      __m256d nb = _mm256_add_pd(_mm256_loadu_pd(u + c - 1),
                                 _mm256_loadu_pd(u + c + 1));
      nb = _mm256_add_pd(nb, _mm256_loadu_pd(up + c));
      nb = _mm256_add_pd(nb, _mm256_loadu_pd(dn + c));
      __m256d v = _mm256_mul_pd(_mm256_loadu_pd(diag + c),
                                _mm256_loadu_pd(u + c));
      v = _mm256_sub_pd(v, _mm256_mul_pd(vih2, nb));
      _mm256_storeu_pd(y + c, _mm256_mul_pd(_mm256_loadu_pd(keep + c), v));
    }
  } else {
    const double* vert = has_up ? up : dn;
    for (; c + 4 <= nx - 1; c += 4) {
      __m256d nb = _mm256_add_pd(_mm256_loadu_pd(u + c - 1),
                                 _mm256_loadu_pd(u + c + 1));
      if (vert) nb = _mm256_add_pd(nb, _mm256_loadu_pd(vert + c));
      __m256d v = _mm256_mul_pd(_mm256_loadu_pd(diag + c),
                                _mm256_loadu_pd(u + c));
      v = _mm256_sub_pd(v, _mm256_mul_pd(vih2, nb));
      _mm256_storeu_pd(y + c, _mm256_mul_pd(_mm256_loadu_pd(keep + c), v));
    }
  }
  for (; c < nx - 1; ++c) at(c);
  at(nx - 1);
}

}  // namespace

void stencil_2d(const double* u, double* y, const double* diag,
                const double* keep, std::int64_t nx, std::int64_t ny,
                double ih2) {
  if (nx < 8) {
    generic::stencil_2d(u, y, diag, keep, nx, ny, ih2);
    return;
  }
  for (std::int64_t r = 0; r < ny; ++r) {
    const std::int64_t base = r * nx;
    const double* up = r > 0 ? u + base - nx : nullptr;
    const double* dn = r + 1 < ny ? u + base + nx : nullptr;
    stencil_row(u + base, y + base, diag + base, keep + base, up, dn, nx, ih2);
  }
}

}  // namespace spectropt::kernels::avx2

#endif  // __x86_64__
