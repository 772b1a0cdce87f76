#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace contextsim::plasticity {

// Band cross-section after squeezing: an ellipse with semi-axis `a`
// horizontal and `b` vertical, traced clockwise from the top pole. The
// breaking point lives on the perimeter at a fixed arc-length fraction,
// which is what makes the shape matter: equal perimeter fractions no
// longer mean equal heights.
struct EllipseShape {
  double semi_horizontal = 1.0;  // a
  double semi_vertical = 1.0;    // b
  EllipseShape() = default;
  EllipseShape(double a, double b);  // rejects non-finite or non-positive axes
};

// Height profile f(s) = y(s)/b sampled at s_i = i/resolution, where s is
// the clockwise arc-length fraction from the top pole. f(0) = 1 and
// f(1/2) = -1 exactly; the second half is the mirror of the first, so
// f(s) = f(1-s) holds exactly at sampled points. Off-sample queries
// interpolate linearly with period 1.
class ProfileTable {
 public:
  ProfileTable(std::vector<double> values);

  std::size_t resolution() const { return f_.size(); }
  double sample_fraction(std::size_t i) const;
  double sample_value(std::size_t i) const;
  double value(double fraction) const;

 private:
  std::vector<double> f_;
};

// Builds the profile by numerically inverting the cumulative arc length
// (composite Simpson on one quadrant plus the ellipse's symmetries).
// `resolution` must be >= 64; it is rounded up to a multiple of 4 and then
// doubled until the table's linear-interpolation error, measured against a
// doubled-resolution table, drops below 1e-4.
ProfileTable arc_length_profile(const EllipseShape& shape, std::size_t resolution);

// Pair law for two perimeter fractions read off one squeezed band:
//   E(t_a, t_b) = 1 - |f(t_a) - f(t_b)|.
// For the circle this reduces to the flat pair law with theta = 2*pi*t.
double squeezed_pair_expectation(const EllipseShape& shape, double t_alpha, double t_beta);
double squeezed_pair_expectation(const ProfileTable& profile, double t_alpha, double t_beta);

// Adaptive (re-aligned) correlation at perimeter fraction t:
//   E(t) = 1 - |1 - f(t)| = f(t).
// Circle: cos(2*pi*t). Tall-and-narrow limit (b >> a): 1 - 4t, the
// linear curve. Wide-and-flat limit (a >> b): sqrt(1 - 16 t^2) on
// [0, 1/4] -- flat near the pole, then a vertical drop at t = 1/4, the
// step-like curve. Every shape passes through f(1/4) = 0 exactly: a
// quarter of the perimeter always ends on the equator.
std::vector<double> squeezed_adaptive_curve(const EllipseShape& shape,
                                            std::span<const double> fractions);
double squeezed_adaptive_expectation(const ProfileTable& profile, double t);

// Profile used by the squeezed_* convenience overloads: resolution 8192,
// refined to a 1e-6 interpolation bound, enough for 1e-6 agreement with
// the circle's cosine law.
ProfileTable curve_profile(const EllipseShape& shape);

}  // namespace contextsim::plasticity
