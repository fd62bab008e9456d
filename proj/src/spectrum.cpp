#include "spectropt/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "spectropt/kernels.hpp"
#include "spectropt/torsion.hpp"

namespace spectropt {

namespace {

constexpr double kClusterGap = 1e-6;

double uniform_pm1(std::mt19937_64& eng) {
  return ((eng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

// Cyclic Jacobi on a small dense symmetric matrix (row-major b x b).
// Eigenvalues ascending, eigenvectors as columns of V.
void jacobi_eigen(std::vector<double> A, int b, std::vector<double>* evals,
                  std::vector<double>* V) {
  V->assign(static_cast<std::size_t>(b) * b, 0.0);
  for (int i = 0; i < b; ++i) (*V)[i * b + i] = 1.0;
  auto off = [&]() {
    double s = 0.0;
    for (int i = 0; i < b; ++i)
      for (int j = i + 1; j < b; ++j) s += A[i * b + j] * A[i * b + j];
    return s;
  };
  double norm = 0.0;
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < b; ++j) norm += A[i * b + j] * A[i * b + j];
  const double stop = std::max(norm, 1e-300) * 1e-30;
  for (int sweep = 0; sweep < 100 && off() > stop; ++sweep) {
    for (int p = 0; p < b; ++p) {
      for (int q = p + 1; q < b; ++q) {
        const double apq = A[p * b + q];
        if (std::fabs(apq) < 1e-300) continue;
        const double app = A[p * b + p], aqq = A[q * b + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int i = 0; i < b; ++i) {
          const double aip = A[i * b + p], aiq = A[i * b + q];
          A[i * b + p] = c * aip - s * aiq;
          A[i * b + q] = s * aip + c * aiq;
        }
        for (int i = 0; i < b; ++i) {
          const double api = A[p * b + i], aqi = A[q * b + i];
          A[p * b + i] = c * api - s * aqi;
          A[q * b + i] = s * api + c * aqi;
        }
        for (int i = 0; i < b; ++i) {
          const double vip = (*V)[i * b + p], viq = (*V)[i * b + q];
          (*V)[i * b + p] = c * vip - s * viq;
          (*V)[i * b + q] = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<int> order(b);
  for (int i = 0; i < b; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return A[i * b + i] < A[j * b + j]; });
  evals->resize(b);
  std::vector<double> Vs(static_cast<std::size_t>(b) * b);
  for (int j = 0; j < b; ++j) {
    (*evals)[j] = A[order[j] * b + order[j]];
    for (int i = 0; i < b; ++i) Vs[i * b + j] = (*V)[i * b + order[j]];
  }
  *V = std::move(Vs);
}

// Modified Gram-Schmidt in the coefficient l2 inner product, two passes.
// Degenerate columns are refilled from the rng on the unmasked set.
void orthonormalize(std::vector<std::vector<double>>& X, const Operator& op,
                    std::mt19937_64& eng) {
  const std::size_t N = X.empty() ? 0 : X[0].size();
  for (std::size_t j = 0; j < X.size(); ++j) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < j; ++i) {
          const double c = kernels::dot(X[i].data(), X[j].data(), N);
          kernels::axpy(-c, X[i].data(), X[j].data(), N);
        }
      }
      const double nrm = std::sqrt(kernels::dot(X[j].data(), X[j].data(), N));
      if (nrm > 1e-12) {
        kernels::scale(1.0 / nrm, X[j].data(), N);
        break;
      }
      for (std::size_t i = 0; i < N; ++i)
        X[j][i] = op.keep[i] * uniform_pm1(eng);
    }
  }
}

}  // namespace

Spectrum eigs(const GeneralizedPotential& pot, int k, double tol,
              const Spectrum* warm) {
  const std::int64_t N = pot.grid.dofs();
  if (k < 1) throw std::invalid_argument("eigs: k must be >= 1");
  // Inverse iteration stalls when a large constant offset dominates the
  // spectrum; shifting by min V is exact and leaves eigenfunctions alone.
  double vmin = std::numeric_limits<double>::infinity();
  for (std::int64_t i = 0; i < N; ++i)
    if (!pot.inf_mask[i]) vmin = std::min(vmin, pot.vfin[i]);
  if (!std::isfinite(vmin) || vmin < 0.0) vmin = 0.0;
  GeneralizedPotential shifted = pot;
  if (vmin > 0.0)
    for (std::int64_t i = 0; i < N; ++i)
      if (!shifted.inf_mask[i]) shifted.vfin[i] -= vmin;
  const Operator op = assemble(shifted);
  if (k > op.unmasked)
    throw std::invalid_argument("eigs: k exceeds the unmasked DOF count");
  const int b = static_cast<int>(
      std::min<std::int64_t>(static_cast<std::int64_t>(k) + 2, op.unmasked));
  const double hscale = std::pow(pot.grid.h, 0.5 * pot.grid.d);

  std::mt19937_64 eng(0x5eedb10cULL);
  std::vector<std::vector<double>> X(b, std::vector<double>(N, 0.0));
  int filled = 0;
  if (warm != nullptr && !warm->eigenfunctions.empty() &&
      same_grid(warm->eigenfunctions[0].grid, pot.grid)) {
    for (const ScalarField& u : warm->eigenfunctions) {
      if (filled >= b) break;
      for (std::int64_t i = 0; i < N; ++i)
        X[filled][i] = op.keep[i] * u.values[i] * hscale;
      ++filled;
    }
  }
  for (; filled < b; ++filled)
    for (std::int64_t i = 0; i < N; ++i)
      X[filled][i] = op.keep[i] * uniform_pm1(eng);
  orthonormalize(X, op, eng);

  const double inner_tol = std::max(1e-13, std::min(1e-10, 1e-2 * tol));
  std::vector<std::vector<double>> AY(b, std::vector<double>(N));
  std::vector<double> evals(b, 0.0), resid(b, 0.0);
  std::vector<double> B(static_cast<std::size_t>(b) * b), Q;
  ScalarField rhs(pot.grid), sol(pot.grid);

  const int max_sweeps = 500;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (int j = 0; j < b; ++j) {
      rhs.values = X[j];
      sol.values.assign(N, 0.0);
      sol = solve(op, rhs, inner_tol);
      X[j] = sol.values;
    }
    orthonormalize(X, op, eng);
    for (int j = 0; j < b; ++j) op.apply(X[j].data(), AY[j].data());
    for (int p = 0; p < b; ++p)
      for (int q = p; q < b; ++q) {
        const double v = kernels::dot(X[p].data(), AY[q].data(), N);
        B[p * b + q] = v;
        B[q * b + p] = v;
      }
    std::vector<double> mu;
    jacobi_eigen(B, b, &mu, &Q);
    // Rotate the block and the applied block together.
    std::vector<std::vector<double>> Xn(b, std::vector<double>(N, 0.0));
    std::vector<std::vector<double>> AXn(b, std::vector<double>(N, 0.0));
    for (int j = 0; j < b; ++j)
      for (int q = 0; q < b; ++q) {
        const double c = Q[q * b + j];
        if (c == 0.0) continue;
        kernels::axpy(c, X[q].data(), Xn[j].data(), N);
        kernels::axpy(c, AY[q].data(), AXn[j].data(), N);
      }
    X = std::move(Xn);
    evals = mu;
    converged = true;
    std::vector<double> tmp(N);
    for (int j = 0; j < b; ++j) {
      tmp = AXn[j];
      kernels::axpy(-evals[j], X[j].data(), tmp.data(), N);
      resid[j] = std::sqrt(kernels::dot(tmp.data(), tmp.data(), N));
      if (j < k && resid[j] > tol * std::max(evals[j], 1e-300))
        converged = false;
    }
  }
  if (!converged) {
    throw SolverError("eigs: block iteration did not converge", resid[0],
                      max_sweeps);
  }

  Spectrum spec;
  spec.eigenvalues.assign(evals.begin(), evals.begin() + k);
  if (vmin > 0.0)
    for (double& ev : spec.eigenvalues) ev += vmin;
  spec.residuals.assign(resid.begin(), resid.begin() + k);
  spec.eigenfunctions.reserve(k);
  for (int j = 0; j < k; ++j) {
    ScalarField u(pot.grid);
    for (std::int64_t i = 0; i < N; ++i) u.values[i] = X[j][i] / hscale;
    // Fix the overall sign: first sizable component positive.
    const double sup = kernels::sup_abs(u.values.data(), N);
    for (std::int64_t i = 0; i < N; ++i) {
      if (std::fabs(u.values[i]) > 1e-8 * sup) {
        if (u.values[i] < 0.0) kernels::scale(-1.0, u.values.data(), N);
        break;
      }
    }
    spec.eigenfunctions.push_back(std::move(u));
  }
  return spec;
}

double rayleigh(const GeneralizedPotential& pot, const ScalarField& u) {
  double l2 = 0.0;
  for (double v : u.values) l2 += v * v;
  l2 *= pot.grid.cell();
  if (l2 == 0.0) throw std::invalid_argument("rayleigh: zero field");
  return quadratic_form(pot, u) / l2;
}

std::vector<LinfCheckRow> eigen_linf_check(const Spectrum& spec, int d) {
  const double c = std::exp(1.0 / (8.0 * std::numbers::pi));
  std::vector<LinfCheckRow> rows;
  for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
    rows.push_back({static_cast<int>(j + 1), linf_norm(spec.eigenfunctions[j]),
                    c * std::pow(spec.eigenvalues[j], 0.25 * d)});
  }
  return rows;
}

double eigen_scaling_check(const GeneralizedPotential& pot, int k, double t,
                           double tol) {
  const Spectrum a = eigs(pot, k, tol);
  const Spectrum b = eigs(rescale_potential(pot, t), k, tol);
  double worst = 0.0;
  for (int j = 0; j < k; ++j) {
    const double err = std::fabs(b.eigenvalues[j] * t * t - a.eigenvalues[j]) /
                       a.eigenvalues[j];
    worst = std::max(worst, err);
  }
  return worst;
}

ScalarField eigen_gradient(const Spectrum& spec, int j) {
  const int k = static_cast<int>(spec.eigenvalues.size());
  if (j < 1 || j > k) throw std::invalid_argument("eigen_gradient: bad index");
  int lo = j - 1, hi = j - 1;
  while (lo > 0 && spec.eigenvalues[lo] - spec.eigenvalues[lo - 1] <=
                       kClusterGap * spec.eigenvalues[lo])
    --lo;
  while (hi + 1 < k && spec.eigenvalues[hi + 1] - spec.eigenvalues[hi] <=
                           kClusterGap * spec.eigenvalues[hi + 1])
    ++hi;
  ScalarField g(spec.eigenfunctions[0].grid);
  const double wgt = 1.0 / (hi - lo + 1);
  for (int i = lo; i <= hi; ++i)
    for (std::size_t q = 0; q < g.values.size(); ++q)
      g.values[q] += wgt * spec.eigenfunctions[i].values[q] *
                     spec.eigenfunctions[i].values[q];
  return g;
}

GapCheckResult lemma41_gap_check(const GeneralizedPotential& pot,
                                 const GeneralizedPotential& pot_nu, int k,
                                 double tol) {
  if (!potential_leq(pot, pot_nu))
    throw std::invalid_argument("lemma41_gap_check: requires pot < pot_nu");
  const Spectrum smu = eigs(pot, k);
  const Spectrum snu = eigs(pot_nu, k);
  double lhs = 0.0;
  for (int j = 0; j < k; ++j)
    lhs = std::max(lhs, 1.0 / smu.eigenvalues[j] - 1.0 / snu.eigenvalues[j]);
  const ScalarField w = torsion_function(pot).w;
  const ScalarField rmu = source_solution(pot, w);
  const ScalarField rnu = source_solution(pot_nu, w);
  double term = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i)
    term += (rmu.values[i] - rnu.values[i]) * w.values[i];
  term *= pot.grid.cell();
  const double lam_k = smu.eigenvalues[k - 1];
  const double rhs = static_cast<double>(k) * k *
                     std::exp(1.0 / (4.0 * std::numbers::pi)) *
                     std::pow(lam_k, 0.5 * (pot.grid.d + 4)) * term;
  return {lhs, rhs, lhs <= rhs + tol};
}

}  // namespace spectropt
