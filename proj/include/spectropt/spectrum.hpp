#pragma once

#include <vector>

#include "spectropt/grid.hpp"

namespace spectropt {

struct Spectrum {
  std::vector<double> eigenvalues;         // ascending, > 0
  std::vector<ScalarField> eigenfunctions; // L2-orthonormal under quadrature
  std::vector<double> residuals;           // ||A u - lambda u||_L2 per pair

  double lambda(int j) const { return eigenvalues.at(j - 1); } // 1-based
  double Lambda(int j) const { return 1.0 / lambda(j); }
};

// First k eigenpairs by block inverse subspace iteration with full
// reorthogonalization; deterministic seeded start. Residual target
// tol * lambda_j. Optional warm start from a previous spectrum.
Spectrum eigs(const GeneralizedPotential& pot, int k, double tol = 1e-8,
              const Spectrum* warm = nullptr);

double rayleigh(const GeneralizedPotential& pot, const ScalarField& u);

struct LinfCheckRow {
  int j;
  double lhs;  // ||u_j||_inf
  double rhs;  // e^(1/8pi) * lambda_j^(d/4)
};
std::vector<LinfCheckRow> eigen_linf_check(const Spectrum& spec, int d);

// max_j |lambda_j(V_t) t^2 - lambda_j(V)| / lambda_j(V), t as in
// rescale_potential.
double eigen_scaling_check(const GeneralizedPotential& pot, int k, double t,
                           double tol = 1e-9);

// d lambda_j / dV = u_j^2, cluster-averaged across near-degenerate groups
// (relative gap <= 1e-6); integrates to 1.
ScalarField eigen_gradient(const Spectrum& spec, int j);

struct GapCheckResult {
  double lhs_max;  // max_j Lambda_j(mu) - Lambda_j(nu)
  double rhs;      // k^2 e^(1/4pi) lambda_k(mu)^((d+4)/2) * resolvent term
  bool holds;
};
GapCheckResult lemma41_gap_check(const GeneralizedPotential& pot,
                                 const GeneralizedPotential& pot_nu, int k,
                                 double tol = 1e-9);

}  // namespace spectropt
