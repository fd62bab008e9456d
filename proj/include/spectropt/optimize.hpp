#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spectropt/gamma.hpp"
#include "spectropt/grid.hpp"

namespace spectropt {

struct PenaltyConfig {
  int k = 1;
  double p = 0.5;       // (0,1) required for k >= 2; any p > 0 for k = 1
  double m = 1.0;       // penalty multiplier
  double damping = 0.5; // theta
  int max_iters = 200;
  double tol_obj = 1e-9;
  double v_cap = 0.0;   // 0 -> default 1e8 / L^2
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument
};

struct OptReport {
  GeneralizedPotential final;
  std::vector<double> objective_trace;
  std::vector<double> lambda_trace;
  std::vector<double> mass_or_torsion_trace;
  double support_radius = 0.0;
  double kkt_residual = 0.0;
  SubsolutionAudit audit;
  bool converged = false;
  bool box_limited = false;  // support_radius >= 0.9 L
  int iters = 0;
};

// Seeded default start: vfin = (1/L^2)(1 + 0.1 xi), xi uniform in [-1,1].
GeneralizedPotential default_init(const GridSpec& g, std::uint64_t seed);

// Dilation map between the penalized and constrained problems.
struct RescaleResult {
  double t_star;          // stationary point of t^-2 lambda_k + m t^(2p+d) M
  double t_applied;       // nearest grid-representable factor actually used
  double scalar_applied;  // exact mass-normalization factor on vfin
  GeneralizedPotential rescaled;
};
// torsion_variant = false: M = integral vfin^-p (exponent 2p+d);
// true: M = P (exponent 2+d). The returned potential satisfies the mass
// constraint integral vfin^-p = target_mass exactly (see scalar_applied).
RescaleResult rescale_to_constraint(const GeneralizedPotential& pot,
                                    const PenaltyConfig& cfg,
                                    double target_mass,
                                    bool torsion_variant = false);

// k = 1 alternating minimization on lambda_1(V) under integral V^-p = 1;
// final iterate satisfies the constraint to machine precision.
OptReport optimize_lambda1_potential(const PenaltyConfig& cfg,
                                     const GeneralizedPotential& init,
                                     const GridSpec& grid);

// k >= 2 damped fixed point for lambda_k + m integral V^-p.
OptReport optimize_lambdak_potential(const PenaltyConfig& cfg,
                                     const GeneralizedPotential& init,
                                     const GridSpec& grid);

// Projected gradient with backtracking for lambda_k + m P.
OptReport optimize_spectral_torsion(const PenaltyConfig& cfg,
                                    const GeneralizedPotential& init,
                                    const GridSpec& grid);

// Smallest R with w <= threshold outside B_R(centroid of w).
double support_radius(const ScalarField& w, double threshold = -1.0);

// phi(t) = integral of w over {x_axis > t}, non-increasing in t.
std::vector<std::pair<double, double>> halfline_mass_profile(
    const ScalarField& w, int axis = 0);

// Marching-squares interface length of the level set {w = level} plus the
// enclosed area; used for the isoperimetric diagnostic perim^2/(4 pi area).
struct LevelSetGeometry {
  double perimeter = 0.0;
  double area = 0.0;
  double isoperimetric_ratio() const;
};
LevelSetGeometry levelset_geometry(const ScalarField& w, double level);

}  // namespace spectropt
