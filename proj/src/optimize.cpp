#include "spectropt/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "spectropt/kernels.hpp"
#include "spectropt/spectrum.hpp"
#include "spectropt/torsion.hpp"

namespace spectropt {

namespace {

constexpr double kUFloorRel = 1e-8;
constexpr double kGFloor = 1e-12;

double uniform_pm1(std::mt19937_64& eng) {
  return ((eng() >> 11) * 0x1.0p-53) * 2.0 - 1.0;
}

double effective_cap(const PenaltyConfig& cfg, const GridSpec& g) {
  return cfg.v_cap > 0.0 ? cfg.v_cap : 1e8 / (g.L * g.L);
}

GeneralizedPotential resolve_init(const PenaltyConfig& cfg,
                                  const GeneralizedPotential& init,
                                  const GridSpec& grid) {
  if (init.vfin.empty()) return default_init(grid, cfg.seed);
  if (!same_grid(init.grid, grid))
    throw std::invalid_argument("optimize: init grid mismatch");
  return init;
}

void finish_report(OptReport& rep, AuditFunctional functional,
                   const AuditParams& params) {
  const ScalarField w = torsion_function(rep.final).w;
  rep.support_radius = support_radius(w);
  rep.box_limited = rep.support_radius >= 0.9 * rep.final.grid.L;
  rep.audit = subsolution_audit(rep.final, functional, params);
}

}  // namespace

void PenaltyConfig::validate() const {
  if (k < 1) throw std::invalid_argument("PenaltyConfig: k >= 1 required");
  if (!(p > 0.0)) throw std::invalid_argument("PenaltyConfig: p > 0 required");
  if (k >= 2 && !(p < 1.0))
    throw std::invalid_argument("PenaltyConfig: p in (0,1) required for k >= 2");
  if (!(m > 0.0)) throw std::invalid_argument("PenaltyConfig: m > 0 required");
  if (!(damping > 0.0 && damping <= 1.0))
    throw std::invalid_argument("PenaltyConfig: damping in (0,1] required");
  if (max_iters < 1)
    throw std::invalid_argument("PenaltyConfig: max_iters >= 1 required");
  if (!(tol_obj > 0.0))
    throw std::invalid_argument("PenaltyConfig: tol_obj > 0 required");
  if (v_cap < 0.0)
    throw std::invalid_argument("PenaltyConfig: v_cap >= 0 required");
}

GeneralizedPotential default_init(const GridSpec& g, std::uint64_t seed) {
  GeneralizedPotential pot(g);
  std::mt19937_64 eng(seed);
  const double base = 1.0 / (g.L * g.L);
  for (double& v : pot.vfin) v = base * (1.0 + 0.1 * uniform_pm1(eng));
  return pot;
}

RescaleResult rescale_to_constraint(const GeneralizedPotential& pot,
                                    const PenaltyConfig& cfg,
                                    double target_mass, bool torsion_variant) {
  cfg.validate();
  if (!(target_mass > 0.0))
    throw std::invalid_argument("rescale_to_constraint: target_mass > 0");
  const double lam = eigs(pot, cfg.k).lambda(cfg.k);
  const double M = torsion_variant ? torsion_function(pot).P
                                   : inverse_power_mass(pot, cfg.p);
  if (!(lam > 0.0) || !(M > 0.0) || !std::isfinite(M))
    throw std::invalid_argument(
        "rescale_to_constraint: need positive finite lambda_k and mass");
  const double d = pot.grid.d;
  const double expo = torsion_variant ? 2.0 + d : 2.0 * cfg.p + d;
  RescaleResult res;
  res.t_star = std::pow(2.0 * lam / (cfg.m * expo * M), 1.0 / (expo + 2.0));

  // Nearest grid-representable factor (integer or reciprocal), log scale.
  double best = 1.0, best_err = std::fabs(std::log(res.t_star));
  for (int q = 2; q <= 64; ++q) {
    for (double cand : {static_cast<double>(q), 1.0 / q}) {
      const double err = std::fabs(std::log(res.t_star / cand));
      if (err < best_err) {
        best = cand;
        best_err = err;
      }
    }
  }
  res.t_applied = best;
  res.rescaled = rescale_potential(pot, best);
  res.scalar_applied = 1.0;
  if (!torsion_variant) {
    // Exact mass normalization: vfin *= s multiplies the mass by s^-p.
    const double cur = inverse_power_mass(res.rescaled, cfg.p);
    res.scalar_applied = std::pow(cur / target_mass, 1.0 / cfg.p);
    for (std::size_t i = 0; i < res.rescaled.vfin.size(); ++i)
      if (!res.rescaled.inf_mask[i]) res.rescaled.vfin[i] *= res.scalar_applied;
  }
  return res;
}

namespace {

// Closed-form block update: V = c^(1/p) |u|^(-2/(1+p)) on the kept set,
// masked where |u| <= u_floor or where V would exceed the cap; c is the
// kept-set integral of |u|^(2p/(1+p)), so the mass constraint is exact.
GeneralizedPotential lambda1_block_update(const ScalarField& u,
                                          const GeneralizedPotential& prev,
                                          double p, double cap) {
  const GridSpec& g = u.grid;
  const std::int64_t N = g.dofs();
  const double umax = linf_norm(u);
  if (umax <= 0.0)
    throw std::invalid_argument("optimize_lambda1: vanishing eigenfunction");
  const double floor = kUFloorRel * umax;
  const double q = 2.0 * p / (1.0 + p);

  std::vector<std::uint8_t> kept(static_cast<std::size_t>(N), 0);
  double c = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    if (prev.inf_mask[i]) continue;
    const double a = std::fabs(u.values[i]);
    if (a <= floor) continue;
    kept[i] = 1;
    c += std::pow(a, q);
  }
  c *= g.cell();

  auto v_of = [&](double a, double cc) {
    return std::pow(cc, 1.0 / p) * std::pow(a, -2.0 / (1.0 + p));
  };
  // One cap pass: dropping nodes shrinks c, which only lowers the others.
  double c_cut = 0.0;
  bool any_cut = false;
  for (std::int64_t i = 0; i < N; ++i) {
    if (!kept[i]) continue;
    const double a = std::fabs(u.values[i]);
    if (v_of(a, c) > cap) {
      kept[i] = 0;
      any_cut = true;
    } else {
      c_cut += std::pow(a, q);
    }
  }
  if (any_cut) c = c_cut * g.cell();

  GeneralizedPotential next(g);
  std::int64_t nkept = 0;
  for (std::int64_t i = 0; i < N; ++i) {
    if (kept[i]) {
      next.vfin[i] = v_of(std::fabs(u.values[i]), c);
      ++nkept;
    } else {
      next.inf_mask[i] = 1;
      next.vfin[i] = 0.0;
    }
  }
  if (nkept == 0)
    throw std::invalid_argument("optimize_lambda1: kept set is empty");
  return next;
}

}  // namespace

OptReport optimize_lambda1_potential(const PenaltyConfig& cfg,
                                     const GeneralizedPotential& init,
                                     const GridSpec& grid) {
  cfg.validate();
  if (cfg.k != 1)
    throw std::invalid_argument("optimize_lambda1_potential: cfg.k must be 1");
  const double cap = effective_cap(cfg, grid);

  OptReport rep;
  GeneralizedPotential pot = resolve_init(cfg, init, grid);
  {
    // Start on the constraint set, else the first trace step is incomparable.
    const double mass0 = inverse_power_mass(pot, cfg.p);
    if (mass0 > 0.0 && std::isfinite(mass0)) {
      const double s = std::pow(mass0, 1.0 / cfg.p);
      for (std::int64_t i = 0; i < grid.dofs(); ++i)
        if (!pot.inf_mask[i]) pot.vfin[i] *= s;
    }
  }
  Spectrum spec = eigs(pot, 1);
  double lam = spec.lambda(1);
  rep.objective_trace.push_back(lam);
  rep.lambda_trace.push_back(lam);
  rep.mass_or_torsion_trace.push_back(inverse_power_mass(pot, cfg.p));

  for (int it = 0; it < cfg.max_iters; ++it) {
    const GeneralizedPotential target =
        lambda1_block_update(spec.eigenfunctions[0], pot, cfg.p, cap);
    GeneralizedPotential next = target;
    if (cfg.damping < 1.0) {
      for (std::int64_t i = 0; i < grid.dofs(); ++i) {
        if (next.inf_mask[i] || pot.inf_mask[i]) {
          next.inf_mask[i] = 1;
          next.vfin[i] = 0.0;
        } else {
          next.vfin[i] =
              (1.0 - cfg.damping) * pot.vfin[i] + cfg.damping * next.vfin[i];
        }
      }
    }
    pot = std::move(next);
    spec = eigs(pot, 1, 1e-8, &spec);
    const double lam_next = spec.lambda(1);
    rep.objective_trace.push_back(lam_next);
    rep.lambda_trace.push_back(lam_next);
    rep.mass_or_torsion_trace.push_back(inverse_power_mass(pot, cfg.p));
    rep.iters = it + 1;
    const bool settled =
        std::fabs(lam_next - lam) <= cfg.tol_obj * std::max(1.0, lam_next);
    lam = lam_next;
    if (settled) {
      rep.converged = true;
      break;
    }
  }

  // Undamped closing step restores the exact constraint.
  pot = lambda1_block_update(spec.eigenfunctions[0], pot, cfg.p, cap);
  spec = eigs(pot, 1, 1e-8, &spec);
  lam = spec.lambda(1);
  rep.objective_trace.push_back(lam);
  rep.lambda_trace.push_back(lam);
  rep.mass_or_torsion_trace.push_back(inverse_power_mass(pot, cfg.p));
  rep.final = pot;

  {
    const ScalarField& u = spec.eigenfunctions[0];
    const double umax = linf_norm(u);
    const double q = 2.0 * cfg.p / (1.0 + cfg.p);
    double c = 0.0, vmax = 0.0;
    for (std::int64_t i = 0; i < grid.dofs(); ++i)
      if (!pot.inf_mask[i]) {
        c += std::pow(std::fabs(u.values[i]), q);
        vmax = std::max(vmax, pot.vfin[i]);
      }
    c = std::pow(c * grid.cell(), 1.0 / cfg.p);
    double worst = 0.0;
    for (std::int64_t i = 0; i < grid.dofs(); ++i) {
      if (pot.inf_mask[i]) continue;
      const double a = std::fabs(u.values[i]);
      if (a <= kUFloorRel * umax) continue;
      worst = std::max(
          worst, std::fabs(pot.vfin[i] * std::pow(a, 2.0 / (1.0 + cfg.p)) - c));
    }
    rep.kkt_residual = vmax > 0.0 ? worst / vmax : 0.0;
  }

  // Multiplier matching the constrained optimum to its penalized form.
  const double m_eff =
      2.0 * lam / ((2.0 * cfg.p + grid.d) *
                   std::max(rep.mass_or_torsion_trace.back(), 1e-300));
  finish_report(rep, AuditFunctional::LambdaKMass, {1, cfg.p, m_eff});
  return rep;
}

OptReport optimize_lambdak_potential(const PenaltyConfig& cfg,
                                     const GeneralizedPotential& init,
                                     const GridSpec& grid) {
  cfg.validate();
  if (cfg.k < 2)
    throw std::invalid_argument("optimize_lambdak_potential: cfg.k must be >= 2");
  const double cap = effective_cap(cfg, grid);
  const std::int64_t N = grid.dofs();

  OptReport rep;
  GeneralizedPotential pot = resolve_init(cfg, init, grid);
  Spectrum spec = eigs(pot, cfg.k);
  auto objective = [&](const GeneralizedPotential& q, const Spectrum* warm,
                       Spectrum* out) {
    *out = eigs(q, cfg.k, 1e-8, warm);
    return out->lambda(cfg.k) + cfg.m * inverse_power_mass(q, cfg.p);
  };
  // Chained cluster of eigenvalues tied to lambda_k at relative width tau.
  auto cluster_lo = [&](const Spectrum& s, double tau) {
    int lo = cfg.k - 1;
    while (lo > 0 &&
           s.eigenvalues[lo] - s.eigenvalues[lo - 1] <=
               tau * std::max(1.0, s.eigenvalues[lo]))
      --lo;
    return lo;
  };
  auto cluster_gradient = [&](const Spectrum& s, int lo) {
    ScalarField gf(grid);
    const double wgt = 1.0 / (cfg.k - lo);
    for (int j = lo; j < cfg.k; ++j)
      for (std::int64_t i = 0; i < N; ++i)
        gf.values[i] += wgt * s.eigenfunctions[j].values[i] *
                        s.eigenfunctions[j].values[i];
    return gf;
  };
  double F = spec.lambda(cfg.k) + cfg.m * inverse_power_mass(pot, cfg.p);
  rep.objective_trace.push_back(F);
  rep.lambda_trace.push_back(spec.lambda(cfg.k));
  rep.mass_or_torsion_trace.push_back(inverse_power_mass(pot, cfg.p));

  // Near a degenerate optimum the single-branch gradient zigzags with tiny
  // steps while the tie-averaged direction makes real progress, so every
  // distinct cluster width competes and the lowest candidate wins.
  for (int it = 0; it < cfg.max_iters; ++it) {
    const double accept_thresh = F + 1e-12 * std::max(1.0, std::fabs(F));
    bool accepted = false;
    GeneralizedPotential best;
    Spectrum best_spec;
    double best_F = std::numeric_limits<double>::infinity();
    int lo_tried = -1;
    for (double width = 1e-6; width <= 1e-2 * 1.5; width *= 100.0) {
      const int lo = cluster_lo(spec, width);
      if (lo == lo_tried) continue;
      lo_tried = lo;
      const ScalarField g = cluster_gradient(spec, lo);
      double theta = cfg.damping;
      for (int half = 0; half < 25; ++half, theta *= 0.5) {
        GeneralizedPotential cand(grid);
        for (std::int64_t i = 0; i < N; ++i) {
          if (pot.inf_mask[i] || g.values[i] <= kGFloor) {
            cand.inf_mask[i] = 1;
            continue;
          }
          const double vstar =
              std::pow(cfg.m * cfg.p / g.values[i], 1.0 / (1.0 + cfg.p));
          const double v = (1.0 - theta) * pot.vfin[i] + theta * vstar;
          if (v > cap)
            cand.inf_mask[i] = 1;
          else
            cand.vfin[i] = v;
        }
        if (cand.unmasked_count() == 0) break;
        Spectrum cand_spec;
        const double cand_F = objective(cand, &spec, &cand_spec);
        if (cand_F <= accept_thresh) {
          if (cand_F < best_F) {
            best = std::move(cand);
            best_spec = std::move(cand_spec);
            best_F = cand_F;
            accepted = true;
          }
          break;
        }
      }
    }
    if (!accepted) break;
    pot = std::move(best);
    spec = std::move(best_spec);
    rep.objective_trace.push_back(best_F);
    rep.lambda_trace.push_back(spec.lambda(cfg.k));
    rep.mass_or_torsion_trace.push_back(inverse_power_mass(pot, cfg.p));
    rep.iters = it + 1;
    const bool settled =
        std::fabs(best_F - F) <= cfg.tol_obj * std::max(1.0, std::fabs(best_F));
    F = best_F;
    if (settled) {
      rep.converged = true;
      break;
    }
  }

  rep.final = pot;
  {
    // Best stationarity certificate over the admissible tie tolerances.
    rep.kkt_residual = std::numeric_limits<double>::infinity();
    int lo_tried = -1;
    for (double width = 1e-6; width <= 1e-2 * 1.5; width *= 100.0) {
      const int lo = cluster_lo(spec, width);
      if (lo == lo_tried) continue;
      lo_tried = lo;
      const ScalarField g = cluster_gradient(spec, lo);
      double worst = 0.0, gmax = 0.0;
      for (std::int64_t i = 0; i < N; ++i) {
        if (pot.inf_mask[i]) continue;
        gmax = std::max(gmax, g.values[i]);
        const double r = g.values[i] -
                         cfg.m * cfg.p * std::pow(pot.vfin[i], -1.0 - cfg.p);
        worst = std::max(worst, std::fabs(r));
      }
      rep.kkt_residual =
          std::min(rep.kkt_residual, gmax > 0.0 ? worst / gmax : 0.0);
    }
  }
  finish_report(rep, AuditFunctional::LambdaKMass, {cfg.k, cfg.p, cfg.m});
  return rep;
}

OptReport optimize_spectral_torsion(const PenaltyConfig& cfg,
                                    const GeneralizedPotential& init,
                                    const GridSpec& grid) {
  cfg.validate();
  const double cap = effective_cap(cfg, grid);
  const std::int64_t N = grid.dofs();

  OptReport rep;
  GeneralizedPotential pot = resolve_init(cfg, init, grid);
  Spectrum spec = eigs(pot, cfg.k);
  ScalarField w = torsion_function(pot).w;
  double P = 0.5 * integrate(w);
  double F = spec.lambda(cfg.k) + cfg.m * P;
  rep.objective_trace.push_back(F);
  rep.lambda_trace.push_back(spec.lambda(cfg.k));
  rep.mass_or_torsion_trace.push_back(P);

  double step = 0.0;
  bool line_search_ok = true;

  // Hardening move: the optimal measure is +inf outside a compact set, and
  // plain gradient steps drain exterior tails too slowly to certify that.
  // Truncating to a ball is accepted whenever it strictly lowers F. Probes
  // run only between settled gradient phases: hardening an unconverged
  // iterate can lock in a mask that bars the better soft configurations.
  // The ball is centered on the torsion centroid and sized by the blob's
  // own extent, so off-center or small wells stay reachable at any L.
  auto truncation_probe = [&]() {
    double cx = 0.0, cy = 0.0, wmass = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
      double x, y;
      node_xy(grid, i, &x, &y);
      cx += x * w.values[i];
      cy += y * w.values[i];
      wmass += w.values[i];
    }
    if (!(wmass > 0.0)) return false;
    cx /= wmass;
    cy /= wmass;
    const double wtol = 1e-9 * linf_norm(w);
    double rmax = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
      if (w.values[i] <= wtol) continue;
      double x, y;
      node_xy(grid, i, &x, &y);
      rmax = std::max(rmax, std::hypot(x - cx, y - cy));
    }
    if (rmax == 0.0) return false;

    bool improved = false;
    for (double f : {0.45, 0.55, 0.65, 0.75, 0.85, 0.95, 1.05}) {
      const double r = f * rmax;
      std::vector<std::uint8_t> outside(static_cast<std::size_t>(N), 0);
      for (std::int64_t i = 0; i < N; ++i) {
        double x, y;
        node_xy(grid, i, &x, &y);
        outside[i] = std::hypot(x - cx, y - cy) >= r ? 1 : 0;
      }
      GeneralizedPotential cand = join_mask(pot, outside);
      if (cand.unmasked_count() == 0 ||
          cand.unmasked_count() == pot.unmasked_count())
        continue;
      Spectrum cand_spec = eigs(cand, cfg.k, 1e-8, &spec);
      const TorsionReport cand_tors = torsion_function(cand, 1e-10, &w);
      const double cand_F = cand_spec.lambda(cfg.k) + cfg.m * cand_tors.P;
      if (cand_F < F - 1e-12 * std::max(1.0, std::fabs(F))) {
        pot = std::move(cand);
        spec = std::move(cand_spec);
        w = cand_tors.w;
        P = cand_tors.P;
        F = cand_F;
        rep.objective_trace.push_back(F);
        rep.lambda_trace.push_back(spec.lambda(cfg.k));
        rep.mass_or_torsion_trace.push_back(P);
        improved = true;
      }
    }
    return improved;
  };

  // Draining an annulus by gradient steps alone is asymptotic (V must grow
  // without bound there), so a long run of near-flat accepted steps hands
  // control to the probe instead of grinding out the budget. A probe that
  // comes back flat disarms the stall trigger until a later probe hardens.
  const double stall_tol = std::max(1e-7, 10.0 * cfg.tol_obj);
  constexpr int kStallRun = 8;
  int iters_used = 0;
  bool stall_probe_armed = true;
  for (;;) {
    bool settled = false;
    bool stalled = false;
    int stall = 0;
    line_search_ok = true;
    while (iters_used < cfg.max_iters && !settled) {
      const ScalarField g = eigen_gradient(spec, cfg.k);
      ScalarField grad(grid);
      double gmax = 0.0;
      for (std::int64_t i = 0; i < N; ++i) {
        grad.values[i] = g.values[i] - 0.5 * cfg.m * w.values[i] * w.values[i];
        gmax = std::max(gmax, std::fabs(grad.values[i]));
      }
      if (gmax == 0.0) {
        settled = true;
        break;
      }
      if (step == 0.0) {
        const double vmax0 = kernels::sup_abs(pot.vfin.data(), N);
        step = 0.1 * (vmax0 + 1.0 / (grid.L * grid.L)) / gmax;
      }

      bool accepted = false;
      double trial = step;
      for (int half = 0; half < 30 && !accepted; ++half, trial *= 0.5) {
        GeneralizedPotential cand(grid);
        double move2 = 0.0;
        for (std::int64_t i = 0; i < N; ++i) {
          if (pot.inf_mask[i]) {
            cand.inf_mask[i] = 1;
            continue;
          }
          double v = pot.vfin[i] - trial * grad.values[i];
          if (v < 0.0) v = 0.0;
          const double dv = v - pot.vfin[i];
          move2 += dv * dv;
          if (v > cap)
            cand.inf_mask[i] = 1;
          else
            cand.vfin[i] = v;
        }
        move2 *= grid.cell();
        if (move2 == 0.0) break;
        Spectrum cand_spec = eigs(cand, cfg.k, 1e-8, &spec);
        const TorsionReport cand_tors = torsion_function(cand, 1e-10, &w);
        const double cand_F = cand_spec.lambda(cfg.k) + cfg.m * cand_tors.P;
        if (cand_F <= F - 1e-4 * move2 / trial) {
          pot = std::move(cand);
          spec = std::move(cand_spec);
          w = cand_tors.w;
          P = cand_tors.P;
          accepted = true;
          if (half == 0) step = trial * 2.0;
          else step = trial;
        }
      }
      if (!accepted) {
        // Flat to line-search resolution.
        line_search_ok = false;
        break;
      }
      const double F_prev = F;
      F = spec.lambda(cfg.k) + cfg.m * P;
      rep.objective_trace.push_back(F);
      rep.lambda_trace.push_back(spec.lambda(cfg.k));
      rep.mass_or_torsion_trace.push_back(P);
      rep.iters = ++iters_used;
      const double rel =
          std::fabs(F - F_prev) / std::max(1.0, std::fabs(F));
      settled = rel <= cfg.tol_obj;
      stall = rel <= stall_tol ? stall + 1 : 0;
      if (!settled && stall_probe_armed && stall >= kStallRun) {
        stalled = true;
        break;
      }
    }
    const bool hardened = truncation_probe();
    if (hardened) stall_probe_armed = true;
    if (iters_used >= cfg.max_iters) break;
    if (hardened) continue;
    if (stalled) {
      stall_probe_armed = false;
      continue;
    }
    rep.converged = settled || !line_search_ok;
    break;
  }

  rep.final = pot;
  {
    const ScalarField g = eigen_gradient(spec, cfg.k);
    double worst = 0.0, scale = 0.0;
    const double vmax = *std::max_element(pot.vfin.begin(), pot.vfin.end());
    for (std::int64_t i = 0; i < N; ++i) {
      const double half_mw2 = 0.5 * cfg.m * w.values[i] * w.values[i];
      scale = std::max({scale, g.values[i], half_mw2});
      if (pot.inf_mask[i]) continue;
      if (pot.vfin[i] <= 1e-12 * std::max(vmax, 1.0)) continue;
      if (pot.vfin[i] >= 0.5 * cap) continue;
      worst = std::max(worst, std::fabs(g.values[i] - half_mw2));
    }
    rep.kkt_residual = scale > 0.0 ? worst / scale : 0.0;
  }
  finish_report(rep, AuditFunctional::LambdaKTorsion, {cfg.k, cfg.p, cfg.m});
  return rep;
}

double support_radius(const ScalarField& w, double threshold) {
  const GridSpec& g = w.grid;
  const double wmax = linf_norm(w);
  if (wmax == 0.0) return 0.0;
  const double thr = threshold >= 0.0 ? threshold : kUFloorRel * wmax;
  double mass = 0.0, cx = 0.0, cy = 0.0;
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    const double v = w.values[i];
    if (v <= 0.0) continue;
    double x, y;
    node_xy(g, i, &x, &y);
    mass += v;
    cx += v * x;
    cy += v * y;
  }
  if (mass <= 0.0) return 0.0;
  cx /= mass;
  cy /= mass;
  double R = 0.0;
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    if (w.values[i] <= thr) continue;
    double x, y;
    node_xy(g, i, &x, &y);
    R = std::max(R, std::hypot(x - cx, y - cy));
  }
  return R;
}

std::vector<std::pair<double, double>> halfline_mass_profile(
    const ScalarField& w, int axis) {
  const GridSpec& g = w.grid;
  if (axis < 0 || axis >= g.d)
    throw std::invalid_argument("halfline_mass_profile: bad axis");
  const int n = g.n;
  // slab[j] = quadrature mass of the nodes with coordinate index j on axis.
  std::vector<double> slab(n, 0.0);
  if (g.d == 1) {
    for (int i = 0; i < n; ++i) slab[i] = w.values[i];
  } else {
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        slab[axis == 0 ? r : c] += w.values[static_cast<std::int64_t>(r) * n + c];
  }
  for (double& s : slab) s *= g.cell();

  std::vector<std::pair<double, double>> profile;
  profile.reserve(n + 2);
  double tail = 0.0;
  for (double s : slab) tail += s;
  profile.emplace_back(-g.L, tail);
  for (int j = 0; j < n; ++j) {
    tail -= slab[j];
    profile.emplace_back(g.coord(j), tail);
  }
  profile.emplace_back(g.L, 0.0);
  return profile;
}

double LevelSetGeometry::isoperimetric_ratio() const {
  if (!(area > 0.0)) return std::numeric_limits<double>::infinity();
  return perimeter * perimeter / (4.0 * std::acos(-1.0) * area);
}

LevelSetGeometry levelset_geometry(const ScalarField& w, double level) {
  const GridSpec& g = w.grid;
  if (g.d != 2)
    throw std::invalid_argument("levelset_geometry: d = 2 only");
  const int n = g.n;
  auto value = [&](int r, int c) -> double {
    if (r < 0 || r >= n || c < 0 || c >= n) return 0.0;
    return w.values[static_cast<std::int64_t>(r) * n + c];
  };

  LevelSetGeometry out;
  // March the cells of the lattice extended by the implicit zero ring, so
  // superlevel sets touching the box edge close properly.
  for (int r = -1; r < n; ++r) {
    for (int c = -1; c < n; ++c) {
      const double x0 = g.coord(r), y0 = g.coord(c);
      const double px[4] = {x0, x0 + g.h, x0 + g.h, x0};
      const double py[4] = {y0, y0, y0 + g.h, y0 + g.h};
      const double fv[4] = {value(r, c), value(r + 1, c), value(r + 1, c + 1),
                            value(r, c + 1)};
      bool any_in = false, any_out = false;
      for (double f : fv) (f >= level ? any_in : any_out) = true;
      if (!any_in) continue;

      // Clip the quad against f >= level, linear along each edge.
      double ox[8], oy[8];
      bool chord_to_here[8];
      int m = 0;
      for (int e = 0; e < 4; ++e) {
        const int e2 = (e + 1) & 3;
        const bool in1 = fv[e] >= level, in2 = fv[e2] >= level;
        if (in1) {
          ox[m] = px[e];
          oy[m] = py[e];
          chord_to_here[m] = false;
          ++m;
        }
        if (in1 != in2) {
          const double t = (level - fv[e]) / (fv[e2] - fv[e]);
          ox[m] = px[e] + t * (px[e2] - px[e]);
          oy[m] = py[e] + t * (py[e2] - py[e]);
          // Entering the set after a gap means the edge walked to reach this
          // vertex was the level chord.
          chord_to_here[m] = !in1;
          ++m;
        }
      }
      if (!any_out) {
        out.area += g.h * g.h;
        continue;
      }
      double a = 0.0;
      for (int i = 0; i < m; ++i) {
        const int j = (i + 1) % m;
        a += ox[i] * oy[j] - ox[j] * oy[i];
        if (chord_to_here[j])
          out.perimeter += std::hypot(ox[j] - ox[i], oy[j] - oy[i]);
      }
      out.area += 0.5 * std::fabs(a);
    }
  }
  return out;
}

}  // namespace spectropt
