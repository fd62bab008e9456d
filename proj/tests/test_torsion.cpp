#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "spectropt/shapes.hpp"
#include "spectropt/spectrum.hpp"
#include "spectropt/torsion.hpp"

using namespace spectropt;

namespace {

ScalarField gaussian_bump(const GridSpec& g, double amp, double sigma,
                          double cx = 0.0, double cy = 0.0) {
  ScalarField f(g);
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    double x, y;
    node_xy(g, i, &x, &y);
    const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    f.values[i] = amp * std::exp(-r2 / (2 * sigma * sigma));
  }
  return f;
}

}  // namespace

TEST_CASE("interval torsion oracle") {
  const GridSpec g = build_grid(1, 1.0, 255);
  const GeneralizedPotential pot(g);
  const TorsionReport tr = torsion_function(pot, 1e-12);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.coord(i);
    CHECK(tr.w.values[i] ==
          doctest::Approx((1.0 - x * x) / 2).epsilon(1e-8));
  }
  CHECK(tr.P == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(tr.E == doctest::Approx(-tr.P));
  CHECK(tr.boundary_shell_mass < 0.05 * integrate(tr.w));
}

TEST_CASE("disk torsion oracle") {
  const GridSpec g = build_grid(2, 1.1, 127);
  const GeneralizedPotential pot =
      shapes::domain_potential(g, shapes::mask_disk(g, 1.0));
  const TorsionReport tr = torsion_function(pot, 1e-11);
  CHECK(tr.P == doctest::Approx(M_PI / 16).epsilon(1e-2));
  // w = (1-r^2)/4 inside the disk
  for (std::int64_t i = 0; i < g.dofs(); i += 17) {
    const double r = node_radius(g, i);
    if (r < 0.9)
      CHECK(tr.w.values[i] ==
            doctest::Approx((1.0 - r * r) / 4).epsilon(2e-2));
  }
}

TEST_CASE("energy identity") {
  const GridSpec g = build_grid(2, 1.0, 41);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  GeneralizedPotential pot(g);
  for (double& v : pot.vfin) v = dist(eng);
  const TorsionReport tr = torsion_function(pot, 1e-12);
  // Galerkin: a(w, w) = (1, w), so P = 0.5 quadratic_form(w) as well.
  CHECK(quadratic_form(pot, tr.w) ==
        doctest::Approx(integrate(tr.w)).epsilon(1e-9));
  CHECK(tr.P == doctest::Approx(0.5 * integrate(tr.w)));
}

TEST_CASE("torsion scales like t^(d+2)") {
  for (int d : {1, 2}) {
    const GridSpec g = build_grid(d, 1.2, d == 1 ? 255 : 63);
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> dist(0.2, 1.5);
    GeneralizedPotential pot(g);
    for (double& v : pot.vfin) v = dist(eng);
    const double P0 = torsion_function(pot, 1e-12).P;
    const double P2 = torsion_function(rescale_potential(pot, 2.0), 1e-12).P;
    CHECK(P2 / P0 == doctest::Approx(std::pow(2.0, d + 2)).epsilon(1e-9));
  }
}

TEST_CASE("torsion monotone decreasing in the potential") {
  const GridSpec g = build_grid(1, 2.0, 127);
  const GeneralizedPotential a = shapes::constant_potential(g, 0.5);
  GeneralizedPotential b = a;
  for (double& v : b.vfin) v += 1.0;
  const GeneralizedPotential c = join_mask(a, shapes::mask_ball(g, 1.0));
  const TorsionReport ta = torsion_function(a);
  const TorsionReport tb = torsion_function(b);
  const TorsionReport tc = torsion_function(c);
  CHECK(ta.P > tb.P);
  CHECK(ta.P > tc.P);
  for (int i = 0; i < g.n; ++i) {
    CHECK(ta.w.values[i] >= tb.w.values[i] - 1e-11);
    CHECK(ta.w.values[i] >= tc.w.values[i] - 1e-11);
    CHECK(tc.w.values[i] >= -1e-12);
  }
}

TEST_CASE("resolvent is self-adjoint") {
  const GridSpec g = build_grid(2, 1.0, 31);
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  GeneralizedPotential pot(g);
  for (double& v : pot.vfin) v = dist(eng);
  const ScalarField f = gaussian_bump(g, 1.0, 0.3, 0.2, -0.1);
  const ScalarField h = gaussian_bump(g, 2.0, 0.2, -0.4, 0.3);
  const ScalarField Rf = source_solution(pot, f, 1e-12);
  const ScalarField Rh = source_solution(pot, h, 1e-12);
  double fRh = 0.0, hRf = 0.0, fRf = 0.0;
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    fRh += f.values[i] * Rh.values[i];
    hRf += h.values[i] * Rf.values[i];
    fRf += f.values[i] * Rf.values[i];
  }
  CHECK(fRh == doctest::Approx(hRf).epsilon(1e-9));
  CHECK(dirichlet_energy(pot, f, 1e-12) ==
        doctest::Approx(-0.5 * fRf * g.cell()).epsilon(1e-9));
}

TEST_CASE("resolvent maps the ground state to itself over lambda") {
  const GridSpec g = build_grid(1, 1.5, 127);
  const GeneralizedPotential pot = shapes::oscillator_potential(g);
  const Spectrum spec = eigs(pot, 1, 1e-10);
  const ScalarField u = source_solution(pot, spec.eigenfunctions[0], 1e-12);
  const double lam = spec.lambda(1);
  for (int i = 0; i < g.n; ++i)
    CHECK(u.values[i] ==
          doctest::Approx(spec.eigenfunctions[0].values[i] / lam)
              .epsilon(1e-6));
}

TEST_CASE("harmonic replacement lies below the torsion function") {
  const GridSpec g = build_grid(2, 1.0, 41);
  const GeneralizedPotential pot = shapes::constant_potential(g, 1.0);
  const TorsionReport tr = torsion_function(pot, 1e-12);
  std::vector<std::uint8_t> interior(g.dofs(), 0);
  for (std::int64_t i = 0; i < g.dofs(); ++i)
    if (node_radius(g, i) < 0.4) interior[i] = 1;
  const ScalarField v = harmonic_replace(pot, tr.w, interior, 1e-12);
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    if (interior[i]) {
      CHECK(v.values[i] <= tr.w.values[i] + 1e-10);
      CHECK(v.values[i] >= -1e-12);
    } else {
      CHECK(v.values[i] == tr.w.values[i]);
    }
  }
}

TEST_CASE("decay profile is non-increasing") {
  const GridSpec g = build_grid(1, 4.0, 255);
  const GeneralizedPotential pot = shapes::constant_potential(g, 1.0);
  const TorsionReport tr = torsion_function(pot);
  const auto prof = decay_profile(tr.w, {0.5, 1.0, 1.5, 2.0, 3.0});
  REQUIRE(prof.size() == 5);
  for (std::size_t i = 1; i < prof.size(); ++i)
    CHECK(prof[i].second <= prof[i - 1].second + 1e-14);
}

TEST_CASE("level set estimate produces finite ratios") {
  const GridSpec g = build_grid(2, 1.1, 63);
  const GeneralizedPotential pot =
      shapes::domain_potential(g, shapes::mask_disk(g, 1.0));
  const TorsionReport tr = torsion_function(pot);
  const ScalarField one(g, 1.0);
  const LevelsetReport rep =
      levelset_estimate_check(tr.w, one, std::numeric_limits<double>::infinity());
  REQUIRE(!rep.thresholds.empty());
  CHECK(rep.empirical_C > 0.0);
  CHECK(rep.empirical_C < 10.0);
  for (double r : rep.ratios) {
    CHECK(std::isfinite(r));
    CHECK(r <= rep.empirical_C + 1e-15);
  }

  const auto pair = linf_torsion_bound_check(tr.w);
  CHECK(pair.first == doctest::Approx(linf_norm(tr.w)));
  CHECK(pair.second ==
        doctest::Approx(std::pow(lp_norm(tr.w, 1.0), 2.0 / (g.d + 2))));
}

TEST_CASE("comparison at infinity") {
  const GridSpec g = build_grid(1, 6.0, 511);
  const GeneralizedPotential pot = shapes::constant_potential(g, 1.0);

  // f = 1 reproduces w itself: comparison holds from the smallest radius
  const auto r1 = comparison_at_infinity(pot, ScalarField(g, 1.0), 1e-12);
  REQUIRE(r1.has_value());
  CHECK(*r1 <= 3.0);

  const auto r2 =
      comparison_at_infinity(pot, gaussian_bump(g, 1.0, 0.5), 1e-12);
  REQUIRE(r2.has_value());
  CHECK(*r2 < 0.9 * g.L);

  // a taller decaying source dominates near the origin only
  const auto r3 =
      comparison_at_infinity(pot, gaussian_bump(g, 5.0, 0.5), 1e-12);
  REQUIRE(r3.has_value());
  CHECK(*r3 < 0.9 * g.L);
  CHECK(*r3 >= *r2 - 1e-12);
}
