#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectropt {

// Iterative solver gave up; carries the last relative residual.
struct SolverError : std::runtime_error {
  double residual;
  std::int64_t iters;
  SolverError(const std::string& what, double res, std::int64_t it)
      : std::runtime_error(what), residual(res), iters(it) {}
};

// Uniform grid on the box (-L, L)^d with implicit zero boundary.
// Interior node i sits at -L + (i+1)*h along each axis, h = 2L/(n+1).
struct GridSpec {
  int d = 1;
  double L = 1.0;
  int n = 3;
  double h = 0.5;

  std::int64_t dofs() const {
    std::int64_t N = n;
    return d == 1 ? N : N * N;
  }
  double coord(int i) const { return -L + (i + 1) * h; }
  double cell() const { return d == 1 ? h : h * h; }
};

GridSpec build_grid(int d, double L, int n);
bool same_grid(const GridSpec& a, const GridSpec& b);
// Node coordinates; for d=2 the flat index is row*n + col, x = coord(row),
// y = coord(col).
void node_xy(const GridSpec& g, std::int64_t idx, double* x, double* y);
double node_radius(const GridSpec& g, std::int64_t idx);

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), values(static_cast<std::size_t>(g.dofs()), fill) {}
};

// mu = vfin dx on unmasked nodes, +infinity on masked ones (u = 0 there).
struct GeneralizedPotential {
  GridSpec grid;
  std::vector<double> vfin;
  std::vector<std::uint8_t> inf_mask;

  GeneralizedPotential() = default;
  explicit GeneralizedPotential(const GridSpec& g, double v = 0.0)
      : grid(g),
        vfin(static_cast<std::size_t>(g.dofs()), v),
        inf_mask(static_cast<std::size_t>(g.dofs()), 0) {}
  std::int64_t unmasked_count() const;
};

double integrate(const ScalarField& f);
double lp_norm(const ScalarField& f, double p);
double linf_norm(const ScalarField& f);
double superlevel_measure(const ScalarField& f, double t);
double gradient_energy(const ScalarField& f);
// Throws std::invalid_argument if u is nonzero on a masked node.
double quadratic_form(const GeneralizedPotential& pot, const ScalarField& u);

// Matrix-free SPD operator on the unmasked nodes: 3/5-point Laplacian with
// Dirichlet elimination plus diagonal vfin. Fields keep the full n^d layout;
// masked entries stay pinned to zero.
struct Operator {
  GridSpec grid;
  std::vector<double> diag;      // 2d/h^2 + vfin
  std::vector<double> keep;      // 1.0 unmasked, 0.0 masked
  std::vector<double> inv_diag;  // keep / diag (Jacobi preconditioner)
  double inv_h2 = 1.0;
  std::int64_t unmasked = 0;

  void apply(const double* u, double* y) const;
};

Operator assemble(const GeneralizedPotential& pot);

struct SolveStats {
  std::int64_t iters = 0;
  double rel_residual = 0.0;
};

// Jacobi-preconditioned CG; relative residual <= tol, cap 50 * n^d.
ScalarField solve(const Operator& op, const ScalarField& rhs, double tol,
                  SolveStats* stats = nullptr,
                  const ScalarField* warm_start = nullptr);

GeneralizedPotential join(const GeneralizedPotential& a,
                          const GeneralizedPotential& b);
GeneralizedPotential join_mask(const GeneralizedPotential& a,
                               const std::vector<std::uint8_t>& mask);
GeneralizedPotential wedge(const GeneralizedPotential& a,
                           const GeneralizedPotential& b);

// Exact rescaling V_t(x) = t^-2 V(x/t) onto the grid with half-width t*L and
// the same node count; t an integer >= 1 or the reciprocal of one.
GeneralizedPotential rescale_potential(const GeneralizedPotential& pot,
                                       double t);

// Quadrature of vfin^-p over unmasked nodes (masked nodes contribute 0).
double inverse_power_mass(const GeneralizedPotential& pot, double p);

// pot_a "smaller" than pot_b: vfin_a <= vfin_b and mask_a subset of mask_b.
bool potential_leq(const GeneralizedPotential& a, const GeneralizedPotential& b);

}  // namespace spectropt
