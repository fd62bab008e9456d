#include "spectropt/grid.hpp"

#include <algorithm>
#include <cmath>

#include "spectropt/kernels.hpp"

namespace spectropt {

GridSpec build_grid(int d, double L, int n) {
  if (d != 1 && d != 2)
    throw std::invalid_argument("build_grid: unsupported dimension " +
                                std::to_string(d));
  if (!(L > 0.0)) throw std::invalid_argument("build_grid: L must be > 0");
  if (n < 3) throw std::invalid_argument("build_grid: n must be >= 3");
  GridSpec g;
  g.d = d;
  g.L = L;
  g.n = n;
  g.h = 2.0 * L / (n + 1);
  return g;
}

bool same_grid(const GridSpec& a, const GridSpec& b) {
  return a.d == b.d && a.n == b.n &&
         std::fabs(a.L - b.L) <= 1e-12 * std::max(a.L, b.L);
}

void node_xy(const GridSpec& g, std::int64_t idx, double* x, double* y) {
  if (g.d == 1) {
    *x = g.coord(static_cast<int>(idx));
    *y = 0.0;
  } else {
    *x = g.coord(static_cast<int>(idx / g.n));
    *y = g.coord(static_cast<int>(idx % g.n));
  }
}

double node_radius(const GridSpec& g, std::int64_t idx) {
  double x, y;
  node_xy(g, idx, &x, &y);
  return std::hypot(x, y);
}

std::int64_t GeneralizedPotential::unmasked_count() const {
  std::int64_t c = 0;
  for (auto m : inf_mask) c += m ? 0 : 1;
  return c;
}

namespace {

void require_same_grid(const GridSpec& a, const GridSpec& b,
                       const char* where) {
  if (!same_grid(a, b))
    throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace

double integrate(const ScalarField& f) {
  return f.grid.cell() * kernels::sum(f.values.data(), f.values.size());
}

double lp_norm(const ScalarField& f, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
  if (std::isinf(p)) return linf_norm(f);
  double acc = 0.0;
  for (double v : f.values) acc += std::pow(std::fabs(v), p);
  return std::pow(acc * f.grid.cell(), 1.0 / p);
}

double linf_norm(const ScalarField& f) {
  return kernels::sup_abs(f.values.data(), f.values.size());
}

double superlevel_measure(const ScalarField& f, double t) {
  std::int64_t count = 0;
  for (double v : f.values) count += v > t ? 1 : 0;
  return f.grid.cell() * static_cast<double>(count);
}

double gradient_energy(const ScalarField& f) {
  const GridSpec& g = f.grid;
  const double* u = f.values.data();
  const int n = g.n;
  double acc = 0.0;
  if (g.d == 1) {
    double prev = 0.0;  // implicit boundary zero
    for (int i = 0; i < n; ++i) {
      const double d = u[i] - prev;
      acc += d * d;
      prev = u[i];
    }
    acc += prev * prev;  // edge to the right boundary
  } else {
    for (int r = 0; r < n; ++r) {
      const double* row = u + static_cast<std::int64_t>(r) * n;
      double prev = 0.0;
      for (int c = 0; c < n; ++c) {
        const double d = row[c] - prev;
        acc += d * d;
        prev = row[c];
      }
      acc += prev * prev;
    }
    for (int c = 0; c < n; ++c) {
      double prev = 0.0;
      for (int r = 0; r < n; ++r) {
        const double v = u[static_cast<std::int64_t>(r) * n + c];
        const double d = v - prev;
        acc += d * d;
        prev = v;
      }
      acc += prev * prev;
    }
  }
  // (difference/h)^2 * h^d per edge
  return acc * g.cell() / (g.h * g.h);
}

double quadratic_form(const GeneralizedPotential& pot, const ScalarField& u) {
  require_same_grid(pot.grid, u.grid, "quadratic_form");
  const std::size_t N = u.values.size();
  for (std::size_t i = 0; i < N; ++i)
    if (pot.inf_mask[i] && u.values[i] != 0.0)
      throw std::invalid_argument(
          "quadratic_form: field is nonzero on a masked node");
  double pen = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    if (!pot.inf_mask[i]) pen += pot.vfin[i] * u.values[i] * u.values[i];
  return gradient_energy(u) + pen * pot.grid.cell();
}

void Operator::apply(const double* u, double* y) const {
  if (grid.d == 1)
    kernels::stencil_1d(u, y, diag.data(), keep.data(), grid.n, inv_h2);
  else
    kernels::stencil_2d(u, y, diag.data(), keep.data(), grid.n, grid.n,
                        inv_h2);
}

Operator assemble(const GeneralizedPotential& pot) {
  const std::int64_t N = pot.grid.dofs();
  Operator op;
  op.grid = pot.grid;
  op.inv_h2 = 1.0 / (pot.grid.h * pot.grid.h);
  op.diag.resize(N);
  op.keep.resize(N);
  op.inv_diag.resize(N);
  const double base = 2.0 * pot.grid.d * op.inv_h2;
  for (std::int64_t i = 0; i < N; ++i) {
    if (pot.vfin[i] < 0.0 || !std::isfinite(pot.vfin[i]))
      throw std::invalid_argument("assemble: vfin must be finite and >= 0");
    op.diag[i] = base + pot.vfin[i];
    op.keep[i] = pot.inf_mask[i] ? 0.0 : 1.0;
    op.inv_diag[i] = op.keep[i] / op.diag[i];
    op.unmasked += pot.inf_mask[i] ? 0 : 1;
  }
  if (op.unmasked == 0)
    throw std::invalid_argument("assemble: all nodes masked, empty operator");
  return op;
}

ScalarField solve(const Operator& op, const ScalarField& rhs, double tol,
                  SolveStats* stats, const ScalarField* warm_start) {
  require_same_grid(op.grid, rhs.grid, "solve");
  if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be > 0");
  const std::size_t N = rhs.values.size();
  ScalarField x(op.grid);
  std::vector<double> r(N), z(N), p(N), q(N);

  kernels::hadamard(op.keep.data(), rhs.values.data(), r.data(), N);
  const double bnorm = std::sqrt(kernels::dot(r.data(), r.data(), N));
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return x;
  }
  if (warm_start != nullptr) {
    require_same_grid(op.grid, warm_start->grid, "solve warm start");
    kernels::hadamard(op.keep.data(), warm_start->values.data(),
                      x.values.data(), N);
    op.apply(x.values.data(), q.data());
    kernels::axpy(-1.0, q.data(), r.data(), N);
  }

  kernels::hadamard(op.inv_diag.data(), r.data(), z.data(), N);
  p = z;
  double rz = kernels::dot(r.data(), z.data(), N);
  const std::int64_t cap = 50 * static_cast<std::int64_t>(N);
  double rnorm = std::sqrt(kernels::dot(r.data(), r.data(), N));
  for (std::int64_t it = 1; it <= cap; ++it) {
    op.apply(p.data(), q.data());
    const double pq = kernels::dot(p.data(), q.data(), N);
    if (pq <= 0.0)
      throw SolverError("solve: operator not positive definite on iterate",
                        rnorm / bnorm, it);
    const double alpha = rz / pq;
    kernels::axpy(alpha, p.data(), x.values.data(), N);
    kernels::axpy(-alpha, q.data(), r.data(), N);
    rnorm = std::sqrt(kernels::dot(r.data(), r.data(), N));
    if (rnorm <= tol * bnorm) {
      if (stats) *stats = {it, rnorm / bnorm};
      return x;
    }
    kernels::hadamard(op.inv_diag.data(), r.data(), z.data(), N);
    const double rz_next = kernels::dot(r.data(), z.data(), N);
    kernels::xpby(z.data(), rz_next / rz, p.data(), N);
    rz = rz_next;
  }
  throw SolverError("solve: CG iteration cap exceeded", rnorm / bnorm, cap);
}

GeneralizedPotential join(const GeneralizedPotential& a,
                          const GeneralizedPotential& b) {
  require_same_grid(a.grid, b.grid, "join");
  GeneralizedPotential out(a.grid);
  const std::size_t N = a.vfin.size();
  for (std::size_t i = 0; i < N; ++i) {
    out.inf_mask[i] = a.inf_mask[i] || b.inf_mask[i];
    out.vfin[i] = std::max(a.vfin[i], b.vfin[i]);
  }
  return out;
}

GeneralizedPotential join_mask(const GeneralizedPotential& a,
                               const std::vector<std::uint8_t>& mask) {
  if (mask.size() != a.inf_mask.size())
    throw std::invalid_argument("join_mask: mask size mismatch");
  GeneralizedPotential out = a;
  for (std::size_t i = 0; i < mask.size(); ++i)
    out.inf_mask[i] = out.inf_mask[i] || mask[i];
  return out;
}

GeneralizedPotential wedge(const GeneralizedPotential& a,
                           const GeneralizedPotential& b) {
  require_same_grid(a.grid, b.grid, "wedge");
  GeneralizedPotential out(a.grid);
  const std::size_t N = a.vfin.size();
  for (std::size_t i = 0; i < N; ++i) {
    const bool ma = a.inf_mask[i], mb = b.inf_mask[i];
    out.inf_mask[i] = ma && mb;
    if (ma && !mb) {
      out.vfin[i] = b.vfin[i];
    } else if (mb && !ma) {
      out.vfin[i] = a.vfin[i];
    } else if (!ma && !mb) {
      const double va = a.vfin[i], vb = b.vfin[i];
      out.vfin[i] = (va == 0.0 || vb == 0.0) ? 0.0 : 1.0 / (1.0 / va + 1.0 / vb);
    }
  }
  return out;
}

GeneralizedPotential rescale_potential(const GeneralizedPotential& pot,
                                       double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::invalid_argument("rescale_potential: t must be positive");
  const double ri = std::round(t);
  const double rr = std::round(1.0 / t);
  const bool int_up = ri >= 1.0 && std::fabs(t - ri) <= 1e-12 * ri;
  const bool int_dn = rr >= 1.0 && std::fabs(1.0 / t - rr) <= 1e-12 * rr;
  if (!int_up && !int_dn)
    throw std::invalid_argument(
        "rescale_potential: t must be an integer >= 1 or its reciprocal");
  const double tt = int_up ? ri : 1.0 / rr;
  GeneralizedPotential out(build_grid(pot.grid.d, tt * pot.grid.L, pot.grid.n));
  const double s = 1.0 / (tt * tt);
  for (std::size_t i = 0; i < pot.vfin.size(); ++i) {
    out.vfin[i] = s * pot.vfin[i];
    out.inf_mask[i] = pot.inf_mask[i];
  }
  return out;
}

double inverse_power_mass(const GeneralizedPotential& pot, double p) {
  if (!(p > 0.0)) throw std::invalid_argument("inverse_power_mass: p <= 0");
  double acc = 0.0;
  for (std::size_t i = 0; i < pot.vfin.size(); ++i) {
    if (pot.inf_mask[i]) continue;
    acc += std::pow(pot.vfin[i], -p);  // vfin = 0 -> +inf, surfaced honestly
  }
  return acc * pot.grid.cell();
}

bool potential_leq(const GeneralizedPotential& a,
                   const GeneralizedPotential& b) {
  if (!same_grid(a.grid, b.grid)) return false;
  for (std::size_t i = 0; i < a.vfin.size(); ++i) {
    if (a.inf_mask[i] && !b.inf_mask[i]) return false;
    if (!a.inf_mask[i] && !b.inf_mask[i] && a.vfin[i] > b.vfin[i]) return false;
  }
  return true;
}

}  // namespace spectropt
