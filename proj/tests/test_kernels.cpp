#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "spectropt/kernels.hpp"

using namespace spectropt;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = dist(eng);
  return v;
}

const std::vector<std::size_t> kSizes = {1,  2,  3,  4,   5,   7,   8,
                                         9,  15, 16, 17,  31,  32,  33,
                                         64, 97, 255, 256, 1000, 4097};

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace

TEST_CASE("dispatched reductions match the scalar reference") {
  INFO("active isa: " << kernels::active_isa());
  for (std::size_t n : kSizes) {
    const auto a = random_vec(n, 11 + n);
    const auto b = random_vec(n, 23 + n);
    CHECK(close(kernels::dot(a.data(), b.data(), n),
                kernels::generic::dot(a.data(), b.data(), n), 1e-13));
    CHECK(close(kernels::sum(a.data(), n), kernels::generic::sum(a.data(), n),
                1e-13));
    CHECK(close(kernels::abs_sum(a.data(), n),
                kernels::generic::abs_sum(a.data(), n), 1e-13));
    CHECK(kernels::sup_abs(a.data(), n) ==
          kernels::generic::sup_abs(a.data(), n));
  }
}

TEST_CASE("dispatched vector updates match the scalar reference") {
  for (std::size_t n : kSizes) {
    const auto x = random_vec(n, 31 + n);
    const auto y0 = random_vec(n, 47 + n);

    auto y1 = y0, y2 = y0;
    kernels::axpy(0.37, x.data(), y1.data(), n);
    kernels::generic::axpy(0.37, x.data(), y2.data(), n);
    CHECK(y1 == y2);

    y1 = y0, y2 = y0;
    kernels::xpby(x.data(), -1.25, y1.data(), n);
    kernels::generic::xpby(x.data(), -1.25, y2.data(), n);
    CHECK(y1 == y2);

    y1 = y0, y2 = y0;
    kernels::scale(3.5, y1.data(), n);
    kernels::generic::scale(3.5, y2.data(), n);
    CHECK(y1 == y2);

    std::vector<double> h1(n), h2(n);
    kernels::hadamard(x.data(), y0.data(), h1.data(), n);
    kernels::generic::hadamard(x.data(), y0.data(), h2.data(), n);
    CHECK(h1 == h2);
  }
}

TEST_CASE("stencils match a naive reference") {
  const double ih2 = 7.3;
  for (std::int64_t n : {3, 5, 16, 33, 63}) {
    // 1d
    {
      const std::size_t N = static_cast<std::size_t>(n);
      auto u = random_vec(N, 100 + static_cast<std::size_t>(n));
      const auto diag = random_vec(N, 200 + static_cast<std::size_t>(n));
      std::vector<double> keep(N, 1.0);
      keep[N / 3] = 0.0;
      u[N / 3] = 0.0;
      std::vector<double> got(N), want(N);
      kernels::stencil_1d(u.data(), got.data(), diag.data(), keep.data(), n,
                          ih2);
      for (std::int64_t i = 0; i < n; ++i) {
        const double left = i > 0 ? u[i - 1] : 0.0;
        const double right = i + 1 < n ? u[i + 1] : 0.0;
        want[i] = keep[i] * (diag[i] * u[i] - ih2 * (left + right));
      }
      for (std::size_t i = 0; i < N; ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
    // 2d
    {
      const std::int64_t N64 = n * n;
      const std::size_t N = static_cast<std::size_t>(N64);
      auto u = random_vec(N, 300 + static_cast<std::size_t>(n));
      const auto diag = random_vec(N, 400 + static_cast<std::size_t>(n));
      std::vector<double> keep(N, 1.0);
      for (std::size_t i = 0; i < N; i += 7) keep[i] = 0.0, u[i] = 0.0;
      std::vector<double> got(N), want(N);
      kernels::stencil_2d(u.data(), got.data(), diag.data(), keep.data(), n, n,
                          ih2);
      for (std::int64_t r = 0; r < n; ++r)
        for (std::int64_t c = 0; c < n; ++c) {
          const std::int64_t i = r * n + c;
          double nb = 0.0;
          if (r > 0) nb += u[i - n];
          if (r + 1 < n) nb += u[i + n];
          if (c > 0) nb += u[i - 1];
          if (c + 1 < n) nb += u[i + 1];
          want[i] = keep[i] * (diag[i] * u[i] - ih2 * nb);
        }
      for (std::size_t i = 0; i < N; ++i)
        CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("dispatched stencils match the scalar reference") {
  for (std::int64_t n : {4, 17, 40}) {
    const std::size_t N = static_cast<std::size_t>(n * n);
    auto u = random_vec(N, 500 + static_cast<std::size_t>(n));
    const auto diag = random_vec(N, 600 + static_cast<std::size_t>(n));
    std::vector<double> keep(N, 1.0);
    for (std::size_t i = 1; i < N; i += 5) keep[i] = 0.0, u[i] = 0.0;
    std::vector<double> a(N), b(N);
    kernels::stencil_2d(u.data(), a.data(), diag.data(), keep.data(), n, n,
                        0.5);
    kernels::generic::stencil_2d(u.data(), b.data(), diag.data(), keep.data(),
                                 n, n, 0.5);
    CHECK(a == b);
    std::vector<double> c(N), d(N);
    kernels::stencil_1d(u.data(), c.data(), diag.data(), keep.data(), n * n,
                        0.5);
    kernels::generic::stencil_1d(u.data(), d.data(), diag.data(), keep.data(),
                                 n * n, 0.5);
    CHECK(c == d);
  }
}
