#pragma once

#include <vector>

#include "spectropt/grid.hpp"

namespace spectropt::shapes {

// Lattice approximation of a domain: node masked iff dist(x, complement of
// the shape) <= kBoundaryShift * h. The shift compensates the staircase
// boundary sitting outside the true one (calibrated once on disks, frozen);
// it also makes node-aligned intervals and axis-aligned rectangles exact and
// commutes with integer-factor rescaling.
inline constexpr double kBoundaryShift = 0.315;

// true = masked (+infinity outside the shape)
std::vector<std::uint8_t> mask_interval(const GridSpec& g, double R);
std::vector<std::uint8_t> mask_disk(const GridSpec& g, double R,
                                    double cx = 0.0, double cy = 0.0);
std::vector<std::uint8_t> mask_square(const GridSpec& g, double half_side);
std::vector<std::uint8_t> mask_rectangle(const GridSpec& g, double ax,
                                         double ay);
std::vector<std::uint8_t> mask_ellipse(const GridSpec& g, double a, double b);
std::vector<std::uint8_t> mask_annulus(const GridSpec& g, double r_in,
                                       double r_out);
// Ball in either dimension (interval for d=1, disk for d=2).
std::vector<std::uint8_t> mask_ball(const GridSpec& g, double R,
                                    double cx = 0.0, double cy = 0.0);
// Complement-of-half-space mask: masks {x_axis >= t} when keep_below, else
// {x_axis <= t}. No boundary shift: the cut line is the first masked column.
std::vector<std::uint8_t> mask_halfspace_cut(const GridSpec& g, int axis,
                                             double t, bool keep_below = true);
// Masks the bridge R1 <= |x| <= R2 (keeps the ball and the far region).
std::vector<std::uint8_t> mask_bridge(const GridSpec& g, double R1, double R2);

GeneralizedPotential domain_potential(const GridSpec& g,
                                      const std::vector<std::uint8_t>& mask);
GeneralizedPotential constant_potential(const GridSpec& g, double c);
// vfin = |x|^2
GeneralizedPotential oscillator_potential(const GridSpec& g);

}  // namespace spectropt::shapes
