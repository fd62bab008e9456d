#include "spectropt/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spectropt/kernels.hpp"

namespace spectropt {

TorsionReport torsion_function(const GeneralizedPotential& pot, double tol,
                               const ScalarField* warm) {
  const Operator op = assemble(pot);
  ScalarField one(pot.grid, 1.0);
  TorsionReport rep;
  rep.w = solve(op, one, tol, nullptr, warm);
  rep.P = 0.5 * integrate(rep.w);
  rep.E = -rep.P;
  const double shell = 0.95 * pot.grid.L;
  double mass = 0.0;
  for (std::size_t i = 0; i < rep.w.values.size(); ++i) {
    double x, y;
    node_xy(pot.grid, static_cast<std::int64_t>(i), &x, &y);
    if (std::max(std::fabs(x), std::fabs(y)) > shell) mass += rep.w.values[i];
  }
  rep.boundary_shell_mass = mass * pot.grid.cell();
  return rep;
}

ScalarField source_solution(const GeneralizedPotential& pot,
                            const ScalarField& f, double tol) {
  return solve(assemble(pot), f, tol);
}

double dirichlet_energy(const GeneralizedPotential& pot, const ScalarField& f,
                        double tol) {
  const ScalarField u = source_solution(pot, f, tol);
  double acc = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i)
    acc += f.values[i] * u.values[i];
  return -0.5 * acc * pot.grid.cell();
}

ScalarField harmonic_replace(const GeneralizedPotential& pot,
                             const ScalarField& u,
                             const std::vector<std::uint8_t>& ball_interior,
                             double tol) {
  if (!same_grid(pot.grid, u.grid))
    throw std::invalid_argument("harmonic_replace: grid mismatch");
  if (ball_interior.size() != u.values.size())
    throw std::invalid_argument("harmonic_replace: ball mask size mismatch");
  // Unknowns live on unmasked ball nodes; outside the ball u is boundary data.
  GeneralizedPotential sub = pot;
  for (std::size_t i = 0; i < ball_interior.size(); ++i)
    if (!ball_interior[i]) sub.inf_mask[i] = 1;
  const Operator op = assemble(sub);

  const GridSpec& g = pot.grid;
  const int n = g.n;
  ScalarField rhs(g);
  const double ih2 = 1.0 / (g.h * g.h);
  auto outside_value = [&](std::int64_t idx) -> double {
    return ball_interior[idx] ? 0.0 : u.values[idx];
  };
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    if (!ball_interior[i] || pot.inf_mask[i]) continue;
    double acc = 0.0;
    if (g.d == 1) {
      if (i > 0) acc += outside_value(i - 1);
      if (i + 1 < n) acc += outside_value(i + 1);
    } else {
      const std::int64_t r = i / n, c = i % n;
      if (c > 0) acc += outside_value(i - 1);
      if (c + 1 < n) acc += outside_value(i + 1);
      if (r > 0) acc += outside_value(i - n);
      if (r + 1 < n) acc += outside_value(i + n);
    }
    rhs.values[i] = ih2 * acc;
  }
  ScalarField inner = solve(op, rhs, tol);
  ScalarField out = u;
  for (std::int64_t i = 0; i < g.dofs(); ++i)
    if (ball_interior[i]) out.values[i] = pot.inf_mask[i] ? 0.0 : inner.values[i];
  return out;
}

std::vector<std::pair<double, double>> decay_profile(
    const ScalarField& w, const std::vector<double>& radii) {
  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  std::vector<double> sorted(radii);
  std::sort(sorted.begin(), sorted.end());
  for (double R : sorted) {
    double sup = 0.0;
    for (std::size_t i = 0; i < w.values.size(); ++i)
      if (node_radius(w.grid, static_cast<std::int64_t>(i)) > R)
        sup = std::max(sup, w.values[i]);
    out.emplace_back(R, sup);
  }
  return out;
}

LevelsetReport levelset_estimate_check(const ScalarField& u,
                                       const ScalarField& f, double p) {
  LevelsetReport rep;
  const double umax = linf_norm(u);
  if (umax == 0.0) return rep;
  const double fnorm = std::isinf(p) ? linf_norm(f) : lp_norm(f, p);
  const double expo = 2.0 / u.grid.d - (std::isinf(p) ? 0.0 : 1.0 / p);
  const int nt = 64;
  for (int j = 0; j < nt; ++j) {
    const double t = umax * j / nt;
    const double meas = superlevel_measure(u, t);
    if (meas <= 0.0 || fnorm <= 0.0) continue;
    double excess = 0.0;
    for (double v : u.values) excess = std::max(excess, v - t);
    if (excess <= 0.0) continue;
    const double ratio = excess / (fnorm * std::pow(meas, expo));
    rep.thresholds.push_back(t);
    rep.ratios.push_back(ratio);
    rep.empirical_C = std::max(rep.empirical_C, ratio);
  }
  return rep;
}

std::pair<double, double> linf_torsion_bound_check(const ScalarField& w) {
  const double l1 = lp_norm(w, 1.0);
  return {linf_norm(w), std::pow(l1, 2.0 / (w.grid.d + 2.0))};
}

std::optional<double> comparison_at_infinity(const GeneralizedPotential& pot,
                                             const ScalarField& f,
                                             double tol) {
  if (!same_grid(pot.grid, f.grid))
    throw std::invalid_argument("comparison_at_infinity: grid mismatch");
  const GridSpec& g = pot.grid;
  double tail_sup = 0.0, global_sup = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    const double a = std::fabs(f.values[i]);
    global_sup = std::max(global_sup, a);
    if (node_radius(g, static_cast<std::int64_t>(i)) > 0.5 * g.L)
      tail_sup = std::max(tail_sup, a);
  }
  const bool decaying_tail = tail_sup < 0.25;
  bool below_one = true;
  for (double v : f.values)
    if (v > 1.0) { below_one = false; break; }
  if (!decaying_tail && !below_one)
    throw std::invalid_argument(
        "comparison_at_infinity: f has no decaying tail (needs sup < 1/4 "
        "outside B_{L/2} or f <= 1 node-wise)");

  const ScalarField u = source_solution(pot, f, tol);
  const ScalarField w = torsion_function(pot, tol).w;
  double worst_radius = -1.0, max_radius = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double r = node_radius(g, static_cast<std::int64_t>(i));
    max_radius = std::max(max_radius, r);
    if (u.values[i] > w.values[i] + 1e-8) worst_radius = std::max(worst_radius, r);
  }
  if (worst_radius < 0.0) return 0.0;
  if (worst_radius >= max_radius - 0.5 * g.h) return std::nullopt;
  return worst_radius;
}

}  // namespace spectropt
