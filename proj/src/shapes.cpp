#include "spectropt/shapes.hpp"

#include <cmath>
#include <limits>

namespace spectropt::shapes {

namespace {

// Masks every node whose distance to the shape complement is <= shift*h,
// given the signed interior distance (positive inside).
template <typename DistFn>
std::vector<std::uint8_t> mask_from_distance(const GridSpec& g, DistFn dist) {
  const std::int64_t N = g.dofs();
  std::vector<std::uint8_t> mask(N, 0);
  const double cut = kBoundaryShift * g.h;
  for (std::int64_t i = 0; i < N; ++i) {
    double x, y;
    node_xy(g, i, &x, &y);
    mask[i] = dist(x, y) > cut ? 0 : 1;
  }
  return mask;
}

}  // namespace

std::vector<std::uint8_t> mask_interval(const GridSpec& g, double R) {
  if (g.d != 1)
    throw std::invalid_argument("mask_interval: needs a 1-d grid");
  return mask_from_distance(g, [R](double x, double) { return R - std::fabs(x); });
}

std::vector<std::uint8_t> mask_disk(const GridSpec& g, double R, double cx,
                                    double cy) {
  if (g.d != 2) throw std::invalid_argument("mask_disk: needs a 2-d grid");
  return mask_from_distance(g, [=](double x, double y) {
    return R - std::hypot(x - cx, y - cy);
  });
}

std::vector<std::uint8_t> mask_ball(const GridSpec& g, double R, double cx,
                                    double cy) {
  return mask_from_distance(g, [=](double x, double y) {
    return g.d == 1 ? R - std::fabs(x - cx) : R - std::hypot(x - cx, y - cy);
  });
}

std::vector<std::uint8_t> mask_square(const GridSpec& g, double half_side) {
  return mask_rectangle(g, half_side, half_side);
}

std::vector<std::uint8_t> mask_rectangle(const GridSpec& g, double ax,
                                         double ay) {
  if (g.d != 2)
    throw std::invalid_argument("mask_rectangle: needs a 2-d grid");
  return mask_from_distance(g, [=](double x, double y) {
    return std::min(ax - std::fabs(x), ay - std::fabs(y));
  });
}

std::vector<std::uint8_t> mask_ellipse(const GridSpec& g, double a, double b) {
  if (g.d != 2) throw std::invalid_argument("mask_ellipse: needs a 2-d grid");
  // Effective semi-axes shrunk by the shift; the normal distance to an
  // ellipse has no closed form.
  const double cut = kBoundaryShift * g.h;
  const double ae = a - cut, be = b - cut;
  const std::int64_t N = g.dofs();
  std::vector<std::uint8_t> mask(N, 0);
  for (std::int64_t i = 0; i < N; ++i) {
    double x, y;
    node_xy(g, i, &x, &y);
    const double q = (x / ae) * (x / ae) + (y / be) * (y / be);
    mask[i] = q < 1.0 ? 0 : 1;
  }
  return mask;
}

std::vector<std::uint8_t> mask_annulus(const GridSpec& g, double r_in,
                                       double r_out) {
  if (!(0.0 < r_in && r_in < r_out))
    throw std::invalid_argument("mask_annulus: need 0 < r_in < r_out");
  return mask_from_distance(g, [=](double x, double y) {
    const double r = g.d == 1 ? std::fabs(x) : std::hypot(x, y);
    return std::min(r - r_in, r_out - r);
  });
}

std::vector<std::uint8_t> mask_halfspace_cut(const GridSpec& g, int axis,
                                             double t, bool keep_below) {
  if (axis < 0 || axis >= g.d)
    throw std::invalid_argument("mask_halfspace_cut: axis out of range");
  const std::int64_t N = g.dofs();
  std::vector<std::uint8_t> mask(N, 0);
  for (std::int64_t i = 0; i < N; ++i) {
    double xy[2];
    node_xy(g, i, &xy[0], &xy[1]);
    const double c = xy[axis];
    mask[i] = (keep_below ? c >= t : c <= t) ? 1 : 0;
  }
  return mask;
}

std::vector<std::uint8_t> mask_bridge(const GridSpec& g, double R1,
                                      double R2) {
  const std::int64_t N = g.dofs();
  std::vector<std::uint8_t> mask(N, 0);
  for (std::int64_t i = 0; i < N; ++i) {
    const double r = node_radius(g, i);
    mask[i] = (r >= R1 && r <= R2) ? 1 : 0;
  }
  return mask;
}

GeneralizedPotential domain_potential(const GridSpec& g,
                                      const std::vector<std::uint8_t>& mask) {
  GeneralizedPotential pot(g);
  if (mask.size() != pot.inf_mask.size())
    throw std::invalid_argument("domain_potential: mask size mismatch");
  pot.inf_mask = mask;
  return pot;
}

GeneralizedPotential constant_potential(const GridSpec& g, double c) {
  if (c < 0.0)
    throw std::invalid_argument("constant_potential: c must be >= 0");
  return GeneralizedPotential(g, c);
}

GeneralizedPotential oscillator_potential(const GridSpec& g) {
  GeneralizedPotential pot(g);
  for (std::int64_t i = 0; i < g.dofs(); ++i) {
    double x, y;
    node_xy(g, i, &x, &y);
    pot.vfin[i] = x * x + y * y;
  }
  return pot;
}

}  // namespace spectropt::shapes
