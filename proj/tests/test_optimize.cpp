#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spectropt/optimize.hpp"
#include "spectropt/shapes.hpp"
#include "spectropt/spectrum.hpp"
#include "spectropt/torsion.hpp"

using namespace spectropt;

namespace {

void check_monotone_trace(const std::vector<double>& trace, double tol) {
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i] <= trace[i - 1] + tol * std::max(1.0, std::abs(trace[i - 1])));
}

}  // namespace

TEST_CASE("penalty config validation") {
  PenaltyConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.k = 2;
  cfg.p = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.k = 1;  // any p > 0 is fine for the ground state
  CHECK_NOTHROW(cfg.validate());
  cfg.p = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PenaltyConfig{};
  cfg.damping = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PenaltyConfig{};
  cfg.damping = 1.0;
  CHECK_NOTHROW(cfg.validate());
  cfg.v_cap = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PenaltyConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("default init is seeded and near 1/L^2") {
  const GridSpec g = build_grid(2, 2.0, 15);
  const GeneralizedPotential a = default_init(g, 7);
  const GeneralizedPotential b = default_init(g, 7);
  const GeneralizedPotential c = default_init(g, 8);
  CHECK(a.vfin == b.vfin);
  CHECK(a.vfin != c.vfin);
  const double base = 1.0 / (g.L * g.L);
  for (double v : a.vfin) {
    CHECK(v >= 0.9 * base - 1e-15);
    CHECK(v <= 1.1 * base + 1e-15);
  }
}

TEST_CASE("rescale to constraint is stationary at the balanced multiplier") {
  const GridSpec g = build_grid(1, 2.0, 127);
  const GeneralizedPotential pot = shapes::constant_potential(g, 1.0);
  PenaltyConfig cfg;
  cfg.k = 1;
  cfg.p = 0.5;
  const double lam = eigs(pot, 1).lambda(1);
  const double M = inverse_power_mass(pot, cfg.p);
  const double expo = 2 * cfg.p + g.d;
  cfg.m = 2.0 * lam / (expo * M);

  const RescaleResult res = rescale_to_constraint(pot, cfg, M);
  CHECK(res.t_star == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.t_applied == 1.0);
  CHECK(res.scalar_applied == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inverse_power_mass(res.rescaled, cfg.p) ==
        doctest::Approx(M).epsilon(1e-12));

  // quadrupling the multiplier divides t_star by 4^(1/(expo+2))
  PenaltyConfig cfg4 = cfg;
  cfg4.m = 4.0 * cfg.m;
  const RescaleResult res4 = rescale_to_constraint(pot, cfg4, M);
  CHECK(res4.t_star ==
        doctest::Approx(res.t_star * std::pow(4.0, -1.0 / (expo + 2)))
            .epsilon(1e-12));

  // a different target is met exactly by the scalar correction
  const RescaleResult res7 = rescale_to_constraint(pot, cfg, 0.7 * M);
  CHECK(inverse_power_mass(res7.rescaled, cfg.p) ==
        doctest::Approx(0.7 * M).epsilon(1e-12));
}

TEST_CASE("rescale torsion variant uses the torsion exponent") {
  const GridSpec g = build_grid(1, 2.0, 127);
  const GeneralizedPotential pot = shapes::constant_potential(g, 2.0);
  PenaltyConfig cfg;
  cfg.k = 1;
  cfg.m = 3.0;
  const double lam = eigs(pot, 1).lambda(1);
  const double P = torsion_function(pot).P;
  const double want =
      std::pow(2.0 * lam / (cfg.m * (2.0 + g.d) * P), 1.0 / (g.d + 4.0));
  const RescaleResult res = rescale_to_constraint(pot, cfg, 1.0, true);
  CHECK(res.t_star == doctest::Approx(want).epsilon(1e-12));
  CHECK(res.scalar_applied == 1.0);
}

TEST_CASE("ground state optimizer under the inverse power constraint") {
  const GridSpec g = build_grid(1, 5.0, 127);
  PenaltyConfig cfg;
  cfg.k = 1;
  cfg.p = 0.5;
  cfg.max_iters = 400;
  cfg.tol_obj = 1e-12;
  cfg.seed = 3;
  const OptReport rep = optimize_lambda1_potential(cfg, default_init(g, 3), g);
  CHECK(rep.converged);
  REQUIRE(!rep.objective_trace.empty());
  CHECK(rep.objective_trace.size() == rep.lambda_trace.size());
  CHECK(rep.objective_trace.size() == rep.mass_or_torsion_trace.size());
  check_monotone_trace(rep.objective_trace, cfg.tol_obj);
  CHECK(rep.kkt_residual <= 1e-6);
  CHECK(inverse_power_mass(rep.final, cfg.p) ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.support_radius < 0.9 * g.L);
  CHECK_FALSE(rep.box_limited);
  CHECK(rep.audit.passes());
}

TEST_CASE("higher eigenvalue penalized optimizer") {
  const GridSpec g = build_grid(1, 5.0, 127);
  PenaltyConfig cfg;
  cfg.k = 2;
  cfg.p = 0.5;
  cfg.m = 1.0;
  cfg.max_iters = 120;
  cfg.tol_obj = 1e-9;
  cfg.seed = 5;
  const OptReport rep = optimize_lambdak_potential(cfg, default_init(g, 5), g);
  REQUIRE(rep.objective_trace.size() >= 2);
  check_monotone_trace(rep.objective_trace, 1e-9);
  CHECK(rep.kkt_residual <= 1e-3);
  CHECK(rep.audit.passes());
  // objective = lambda_k + m * mass at every recorded step
  const double F = rep.objective_trace.back();
  CHECK(F == doctest::Approx(rep.lambda_trace.back() +
                             cfg.m * rep.mass_or_torsion_trace.back())
                 .epsilon(1e-10));
}

TEST_CASE("spectral torsion optimizer") {
  const GridSpec g = build_grid(2, 2.0, 31);
  PenaltyConfig cfg;
  cfg.k = 1;
  cfg.m = 8.0 * 5.783185962946785 / M_PI;
  cfg.max_iters = 400;
  cfg.tol_obj = 1e-8;
  cfg.seed = 11;
  const OptReport rep = optimize_spectral_torsion(cfg, default_init(g, 11), g);
  REQUIRE(!rep.objective_trace.empty());
  check_monotone_trace(rep.objective_trace, 1e-9);
  CHECK(rep.converged);
  CHECK(rep.support_radius > 0.0);
  CHECK_FALSE(rep.box_limited);
  CHECK(rep.audit.passes());
  const double F = rep.objective_trace.back();
  CHECK(F == doctest::Approx(rep.lambda_trace.back() +
                             cfg.m * rep.mass_or_torsion_trace.back())
                 .epsilon(1e-10));
}

TEST_CASE("non convergence is flagged, not fatal") {
  const GridSpec g = build_grid(1, 5.0, 63);
  PenaltyConfig cfg;
  cfg.k = 1;
  cfg.p = 0.5;
  cfg.max_iters = 1;
  const OptReport rep = optimize_lambda1_potential(cfg, default_init(g, 1), g);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iters == 1);
  CHECK(!rep.objective_trace.empty());
}

TEST_CASE("disjoint wells split the spectrum") {
  const GridSpec g = build_grid(1, 6.0, 255);
  const GeneralizedPotential a =
      shapes::domain_potential(g, shapes::mask_ball(g, 1.0, -3.0));
  const GeneralizedPotential b =
      shapes::domain_potential(g, shapes::mask_ball(g, 1.0, 3.0));
  const GeneralizedPotential both = wedge(a, b);
  const int k = 4;
  const Spectrum sa = eigs(a, k, 1e-10);
  const Spectrum sb = eigs(b, k, 1e-10);
  const Spectrum sw = eigs(both, 2 * k, 1e-10);
  std::vector<double> merged;
  merged.insert(merged.end(), sa.eigenvalues.begin(), sa.eigenvalues.end());
  merged.insert(merged.end(), sb.eigenvalues.begin(), sb.eigenvalues.end());
  std::sort(merged.begin(), merged.end());
  for (int j = 0; j < 2 * k; ++j)
    CHECK(sw.eigenvalues[j] == doctest::Approx(merged[j]).epsilon(1e-6));
}

TEST_CASE("support radius of ball torsion functions") {
  const GridSpec g = build_grid(2, 1.5, 63);
  const GeneralizedPotential pot =
      shapes::domain_potential(g, shapes::mask_disk(g, 1.0));
  const ScalarField w = torsion_function(pot, 1e-11).w;
  const double r = support_radius(w);
  CHECK(r >= 1.0 - 2 * g.h);
  CHECK(r <= 1.0 + 2 * g.h);

  CHECK(support_radius(ScalarField(g)) == 0.0);

  const GeneralizedPotential moved =
      shapes::domain_potential(g, shapes::mask_disk(g, 1.0, 0.3, 0.2));
  const double rm = support_radius(torsion_function(moved, 1e-11).w);
  CHECK(rm >= 1.0 - 2 * g.h);
  CHECK(rm <= 1.0 + 2 * g.h);
}

TEST_CASE("halfline mass profile") {
  const GridSpec g = build_grid(1, 2.0, 127);
  const GeneralizedPotential pot =
      shapes::domain_potential(g, shapes::mask_interval(g, 1.0));
  const ScalarField w = torsion_function(pot).w;
  const auto prof = halfline_mass_profile(w, 0);
  REQUIRE(prof.size() >= 3);
  CHECK(prof.front().first == -g.L);
  CHECK(prof.front().second == doctest::Approx(integrate(w)).epsilon(1e-12));
  CHECK(prof.back().first == g.L);
  CHECK(prof.back().second == 0.0);
  for (std::size_t i = 1; i < prof.size(); ++i) {
    CHECK(prof[i].first > prof[i - 1].first);
    CHECK(prof[i].second <= prof[i - 1].second + 1e-14);
  }
}

TEST_CASE("level set geometry of a paraboloid") {
  const GridSpec g = build_grid(2, 1.5, 127);
  ScalarField f(g);
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    const double r = node_radius(g, i);
    f.values[i] = 1.0 - r * r;
  }
  const LevelSetGeometry geo = levelset_geometry(f, 0.5);
  const double r = std::sqrt(0.5);
  CHECK(geo.perimeter == doctest::Approx(2 * M_PI * r).epsilon(2e-2));
  CHECK(geo.area == doctest::Approx(M_PI * r * r).epsilon(2e-2));
  CHECK(geo.isoperimetric_ratio() == doctest::Approx(1.0).epsilon(3e-2));

  const GridSpec g1 = build_grid(1, 1.0, 15);
  CHECK_THROWS_AS(levelset_geometry(ScalarField(g1), 0.5),
                  std::invalid_argument);
}
