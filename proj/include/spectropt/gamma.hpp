#pragma once

#include <array>
#include <string>
#include <vector>

#include "spectropt/grid.hpp"

namespace spectropt {

double gamma_distance(const GeneralizedPotential& a,
                      const GeneralizedPotential& b, double tol = 1e-10);

struct TruncationCheckResult {
  double lhs;            // d_gamma(pot, pot with the bridge R1..R2 masked)
  double rhs;            // annulus integral + C (R1^-2 + R2^-2)
  double annulus_integral;
  bool holds;
};
// R2 may be +infinity (pure truncation to B_R1). Pre: 1 < R1 < R2.
TruncationCheckResult truncation_distance_check(const GeneralizedPotential& pot,
                                                double R1, double R2);

struct HalfspaceCheckResult {
  double lhs;       // d_gamma(pot, pot v I_H), H = {x_1 < t}
  double rhs;
  double plane_integral;
  bool holds;
};
HalfspaceCheckResult halfspace_cut_check(const GeneralizedPotential& pot,
                                         double t, double tol = 1e-9);

// L2 operator norm of R_mu - R_nu for mu < nu, by power iteration.
double resolvent_distance(const GeneralizedPotential& a,
                          const GeneralizedPotential& b, double tol = 1e-6);

enum class CCLabel { Concentration, Vanishing, Dichotomy };

struct CCVerdict {
  CCLabel label;
  std::vector<std::array<double, 2>> centers;  // witnesses ((x,0) for d=1)
  double split_radius = 0.0;                   // Dichotomy only
  std::array<double, 2> mass_fractions{0.0, 0.0};
};

const char* cc_label_name(CCLabel label);

// Trichotomy heuristic on an L1-bounded sequence: tail = last third,
// thresholds per the frozen defaults, dichotomy separation 4R.
CCVerdict cc_classify(const std::vector<ScalarField>& fields, double R,
                      double eps = 0.05);

enum class AuditFunctional {
  LambdaKMass,     // lambda_k + m * integral vfin^-p
  LambdaKTorsion,  // lambda_k + m * P
  SourceTorsion,   // E_1 + m * P
  SourceMass,      // E_1 + integral vfin^-p
};

struct AuditParams {
  int k = 1;
  double p = 0.5;
  double m = 1.0;
};

struct AuditTrial {
  std::string description;
  double delta;  // F(nu) - F(pot), nu > pot
};

struct SubsolutionAudit {
  double base_objective = 0.0;
  std::vector<AuditTrial> trials;
  double worst_violation = 0.0;  // min delta
  double tol = 1e-6;
  bool passes() const { return worst_violation >= -tol; }
};

SubsolutionAudit subsolution_audit(const GeneralizedPotential& pot,
                                   AuditFunctional functional,
                                   const AuditParams& params,
                                   double tol = 1e-6);

double audit_objective(const GeneralizedPotential& pot,
                       AuditFunctional functional, const AuditParams& params);

}  // namespace spectropt
