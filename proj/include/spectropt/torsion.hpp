#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spectropt/grid.hpp"

namespace spectropt {

struct TorsionReport {
  ScalarField w;                    // torsion function, (-lap + vfin) w = 1
  double P = 0.0;                   // torsion = 0.5 * integral of w
  double E = 0.0;                   // torsional energy = -P
  double boundary_shell_mass = 0.0; // integral of w over the outer 5% shell
};

TorsionReport torsion_function(const GeneralizedPotential& pot,
                               double tol = 1e-10,
                               const ScalarField* warm = nullptr);

// Resolvent applied to f: solves (-lap + vfin) u = f on unmasked nodes.
ScalarField source_solution(const GeneralizedPotential& pot,
                            const ScalarField& f, double tol = 1e-10);

// E_f = -0.5 * integral of f * R(f)
double dirichlet_energy(const GeneralizedPotential& pot, const ScalarField& f,
                        double tol = 1e-10);

// Replaces u inside the ball by the (lap - mu)-harmonic extension of its
// boundary values; agrees with u outside.
ScalarField harmonic_replace(const GeneralizedPotential& pot,
                             const ScalarField& u,
                             const std::vector<std::uint8_t>& ball_interior,
                             double tol = 1e-10);

// (R, sup of w outside B_R) for each requested radius.
std::vector<std::pair<double, double>> decay_profile(
    const ScalarField& w, const std::vector<double>& radii);

struct LevelsetReport {
  std::vector<double> thresholds;
  std::vector<double> ratios;  // ||(u-t)+||_inf / (||f||_p |{u>t}|^(2/d-1/p))
  double empirical_C = 0.0;    // max ratio over valid thresholds
};

// p = infinity is passed as std::numeric_limits<double>::infinity().
LevelsetReport levelset_estimate_check(const ScalarField& u,
                                       const ScalarField& f, double p);

// (||w||_inf, ||w||_1^(2/(d+2)))
std::pair<double, double> linf_torsion_bound_check(const ScalarField& w);

// Smallest grid radius R with u <= w + 1e-8 outside B_R; nullopt if the
// comparison fails out to the box edge. Precondition: f has a decaying tail
// (sup outside B_{L/2} < 1/4) or f <= 1 node-wise.
std::optional<double> comparison_at_infinity(const GeneralizedPotential& pot,
                                             const ScalarField& f,
                                             double tol = 1e-10);

}  // namespace spectropt
