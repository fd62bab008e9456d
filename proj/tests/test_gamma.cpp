#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "spectropt/gamma.hpp"
#include "spectropt/shapes.hpp"
#include "spectropt/spectrum.hpp"
#include "spectropt/torsion.hpp"

using namespace spectropt;

namespace {

GeneralizedPotential random_potential(const GridSpec& g, std::uint64_t seed,
                                      double lo, double hi) {
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  GeneralizedPotential pot(g);
  for (double& v : pot.vfin) v = dist(eng);
  return pot;
}

ScalarField gaussian(const GridSpec& g, double amp, double sigma, double cx,
                     double cy = 0.0) {
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

TEST_CASE("gamma distance is a metric on sample potentials") {
  const GridSpec g = build_grid(1, 2.0, 127);
  const GeneralizedPotential a = random_potential(g, 1, 0.0, 1.0);
  const GeneralizedPotential b = random_potential(g, 2, 0.5, 2.0);
  const GeneralizedPotential c =
      join_mask(random_potential(g, 3, 0.0, 0.5), shapes::mask_ball(g, 1.2));
  CHECK(gamma_distance(a, a) <= 1e-12);
  const double ab = gamma_distance(a, b);
  const double ba = gamma_distance(b, a);
  const double ac = gamma_distance(a, c);
  const double bc = gamma_distance(b, c);
  CHECK(ab > 0.0);
  CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
  CHECK(ac <= ab + bc + 1e-10);
  CHECK(ab <= ac + bc + 1e-10);
}

TEST_CASE("nested intervals have distance 14/3") {
  // torsion functions of (-1,1) and (-2,2) differ by 14/3 in L^1
  const GridSpec g = build_grid(1, 2.5, 249);
  const GeneralizedPotential small =
      shapes::domain_potential(g, shapes::mask_interval(g, 1.0));
  const GeneralizedPotential big =
      shapes::domain_potential(g, shapes::mask_interval(g, 2.0));
  CHECK(gamma_distance(small, big, 1e-12) ==
        doctest::Approx(14.0 / 3.0).epsilon(5e-3));
}

TEST_CASE("nested disks have distance 15 pi / 8") {
  const GridSpec g = build_grid(2, 2.2, 199);
  const GeneralizedPotential small =
      shapes::domain_potential(g, shapes::mask_disk(g, 1.0));
  const GeneralizedPotential big =
      shapes::domain_potential(g, shapes::mask_disk(g, 2.0));
  CHECK(gamma_distance(small, big, 1e-11) ==
        doctest::Approx(15.0 * M_PI / 8.0).epsilon(1e-2));
}

TEST_CASE("truncation distance check holds") {
  const GridSpec g1 = build_grid(1, 6.0, 511);
  const GeneralizedPotential pot1 = shapes::constant_potential(g1, 0.8);
  const double inf = std::numeric_limits<double>::infinity();
  for (auto [r1, r2] : std::vector<std::pair<double, double>>{
           {1.5, 3.0}, {2.0, inf}, {3.5, inf}}) {
    const TruncationCheckResult res = truncation_distance_check(pot1, r1, r2);
    CHECK(res.holds);
    CHECK(res.lhs >= 0.0);
    CHECK(res.annulus_integral >= 0.0);
  }
  const GridSpec g2 = build_grid(2, 3.0, 95);
  const GeneralizedPotential pot2 = shapes::constant_potential(g2, 1.0);
  const TruncationCheckResult res = truncation_distance_check(pot2, 1.3, 2.6);
  CHECK(res.holds);
  CHECK_THROWS_AS(truncation_distance_check(pot2, 0.5, 2.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(truncation_distance_check(pot2, 2.0, 1.5),
                  std::invalid_argument);
}

TEST_CASE("gamma distance to the truncation shrinks as the radius grows") {
  const GridSpec g = build_grid(1, 6.0, 511);
  const GeneralizedPotential pot = shapes::constant_potential(g, 0.6);
  const double inf = std::numeric_limits<double>::infinity();
  double first = -1.0, prev = std::numeric_limits<double>::max();
  for (double R : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    const GeneralizedPotential cut =
        join_mask(pot, shapes::mask_bridge(g, R, inf));
    const double d = gamma_distance(pot, cut, 1e-12);
    CHECK(d <= prev + 1e-12);
    CHECK(d >= 0.0);
    if (first < 0.0) first = d;
    prev = d;
  }
  CHECK(prev < 0.5 * first);
}

TEST_CASE("halfspace cut check holds in both dimensions") {
  const GridSpec g1 = build_grid(1, 3.0, 255);
  const GeneralizedPotential pot1 = shapes::constant_potential(g1, 1.0);
  for (double t : {-1.5, 0.0, 0.9}) {
    const HalfspaceCheckResult res = halfspace_cut_check(pot1, t);
    CHECK(res.holds);
    CHECK(res.lhs >= 0.0);
    CHECK(res.plane_integral >= 0.0);
  }
  const GridSpec g2 = build_grid(2, 1.5, 63);
  const GeneralizedPotential pot2 =
      shapes::domain_potential(g2, shapes::mask_disk(g2, 1.2));
  for (double t : {-0.45, 0.075, 0.75}) {
    const HalfspaceCheckResult res = halfspace_cut_check(pot2, t);
    CHECK(res.holds);
  }
}

TEST_CASE("resolvent distance dominates the Lambda_1 gap") {
  const GridSpec g = build_grid(1, 3.0, 255);
  const GeneralizedPotential a = shapes::constant_potential(g, 0.5);
  GeneralizedPotential b = a;
  for (double& v : b.vfin) v += 1.5;
  const double rd = resolvent_distance(a, b, 1e-8);
  const double gap =
      1.0 / eigs(a, 1, 1e-10).lambda(1) - 1.0 / eigs(b, 1, 1e-10).lambda(1);
  CHECK(gap > 0.0);
  CHECK(rd >= gap - 1e-6);
  CHECK(rd <= 1.0 / eigs(a, 1, 1e-10).lambda(1) + 1e-6);
  CHECK_THROWS_AS(resolvent_distance(b, a), std::invalid_argument);
}

TEST_CASE("concentration compactness classifier") {
  const GridSpec g = build_grid(1, 6.0, 511);
  auto sequence = [&](auto make) {
    std::vector<ScalarField> seq;
    for (int k = 0; k < 6; ++k) seq.push_back(make(k));
    return seq;
  };

  const auto conc = sequence([&](int) { return gaussian(g, 1.0, 0.3, -1.0); });
  const CCVerdict vc = cc_classify(conc, 1.6);
  CHECK(vc.label == CCLabel::Concentration);
  REQUIRE(!vc.centers.empty());
  for (const auto& c : vc.centers) CHECK(std::abs(c[0] + 1.0) < 0.3);

  const auto van = sequence([&](int) { return ScalarField(g, 0.01); });
  CHECK(cc_classify(van, 0.2).label == CCLabel::Vanishing);

  const auto dich = sequence([&](int) {
    ScalarField f = gaussian(g, 1.0, 0.3, -2.0);
    const ScalarField h = gaussian(g, 1.0, 0.3, 2.0);
    for (std::int64_t i = 0; i < g.dofs(); ++i) f.values[i] += h.values[i];
    return f;
  });
  const CCVerdict vd = cc_classify(dich, 0.8);
  CHECK(vd.label == CCLabel::Dichotomy);
  CHECK(vd.centers.size() == 2);
  CHECK(vd.split_radius > 1.0);
  CHECK(vd.mass_fractions[0] + vd.mass_fractions[1] > 0.9);

  // labels survive a common translation
  auto translate = [&](const std::vector<ScalarField>& seq, int shift) {
    std::vector<ScalarField> out;
    for (const ScalarField& f : seq) {
      ScalarField t(g);
      for (int i = 0; i < g.n; ++i)
        if (i - shift >= 0 && i - shift < g.n)
          t.values[i] = f.values[i - shift];
      out.push_back(t);
    }
    return out;
  };
  CHECK(cc_classify(translate(conc, 40), 1.6).label == CCLabel::Concentration);
  CHECK(cc_classify(translate(dich, 40), 0.8).label == CCLabel::Dichotomy);
  CHECK(std::string(cc_label_name(CCLabel::Vanishing)) == "Vanishing");
}

TEST_CASE("source torsion audit with unit multiplier is identically zero") {
  // F = E + P = 0 for every potential, so all trial deltas vanish.
  const GridSpec g = build_grid(1, 4.0, 255);
  const GeneralizedPotential pot = shapes::constant_potential(g, 0.5);
  AuditParams params;
  params.m = 1.0;
  CHECK(std::abs(audit_objective(pot, AuditFunctional::SourceTorsion,
                                 params)) <= 1e-10);
  const SubsolutionAudit audit =
      subsolution_audit(pot, AuditFunctional::SourceTorsion, params);
  REQUIRE(!audit.trials.empty());
  for (const AuditTrial& t : audit.trials) CHECK(std::abs(t.delta) <= 1e-8);
  CHECK(audit.passes());
}

TEST_CASE("audit objectives evaluate the advertised functionals") {
  const GridSpec g = build_grid(1, 3.0, 127);
  const GeneralizedPotential pot = shapes::constant_potential(g, 2.0);
  AuditParams params;
  params.k = 1;
  params.p = 0.5;
  params.m = 3.0;
  const double lam = eigs(pot, 1, 1e-10).lambda(1);
  const double mass = inverse_power_mass(pot, params.p);
  const TorsionReport tr = torsion_function(pot);
  CHECK(audit_objective(pot, AuditFunctional::LambdaKMass, params) ==
        doctest::Approx(lam + 3.0 * mass).epsilon(1e-8));
  CHECK(audit_objective(pot, AuditFunctional::LambdaKTorsion, params) ==
        doctest::Approx(lam + 3.0 * tr.P).epsilon(1e-8));
  CHECK(audit_objective(pot, AuditFunctional::SourceTorsion, params) ==
        doctest::Approx(tr.E + 3.0 * tr.P).epsilon(1e-8));
  CHECK(audit_objective(pot, AuditFunctional::SourceMass, params) ==
        doctest::Approx(tr.E + mass).epsilon(1e-8));
}
