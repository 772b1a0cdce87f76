#include "contextsim/plasticity.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contextsim::plasticity {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr std::size_t kQuadratureCells = 1 << 15;

// Cumulative arc length over the first quadrant of the ellipse
// (a sin tau, b cos tau), tau in [0, pi/2], i.e. from the top pole
// clockwise to (a, 0). The full perimeter is four mirror copies, so every
// arc-length query reduces to this quadrant.
class QuadrantArc {
 public:
  QuadrantArc(double a, double b) : a_(a), b_(b), cum_(kQuadratureCells + 1, 0.0) {
    const double h = kHalfPi / kQuadratureCells;
    for (std::size_t k = 0; k < kQuadratureCells; ++k) {
      const double t0 = k * h;
      const double t1 = t0 + h;
      cum_[k + 1] = cum_[k] + (h / 6.0) * (speed(t0) + 4.0 * speed(0.5 * (t0 + t1)) + speed(t1));
    }
  }

  double quarter_length() const { return cum_.back(); }

  // tau in [0, pi/2] with arc(tau) = target, by cell lookup + bisection.
  double invert(double target) const {
    if (target <= 0.0) return 0.0;
    if (target >= cum_.back()) return kHalfPi;
    std::size_t lo_cell = 0, hi_cell = kQuadratureCells;
    while (hi_cell - lo_cell > 1) {
      const std::size_t mid = (lo_cell + hi_cell) / 2;
      (cum_[mid] <= target ? lo_cell : hi_cell) = mid;
    }
    const double h = kHalfPi / kQuadratureCells;
    const double tau0 = lo_cell * h;
    double lo = tau0, hi = tau0 + h;
    const double want = target - cum_[lo_cell];
    for (int i = 0; i < 60 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      // Simpson on [tau0, mid]; the cell is tiny, one panel is exact enough
      const double arc =
          ((mid - tau0) / 6.0) * (speed(tau0) + 4.0 * speed(0.5 * (tau0 + mid)) + speed(mid));
      (arc < want ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  double speed(double tau) const { return std::hypot(a_ * std::cos(tau), b_ * std::sin(tau)); }

  double a_, b_;
  std::vector<double> cum_;
};

std::size_t round_up_multiple_of_4(std::size_t n) { return (n + 3) / 4 * 4; }

std::vector<double> build_samples(const QuadrantArc& arc, std::size_t resolution) {
  const double quarter = arc.quarter_length();
  std::vector<double> f(resolution);
  f[0] = 1.0;
  // First half from the quadrant inversion, second half mirrored so the
  // left-right symmetry f(s) = f(1-s) is exact at sampled points.
  for (std::size_t i = 1; i <= resolution / 2; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(resolution);
    double value;
    if (2 * i == resolution) {
      value = -1.0;  // bottom pole
    } else if (4 * i <= resolution) {
      value = std::cos(arc.invert(4.0 * s * quarter));
    } else {
      value = -std::cos(arc.invert(4.0 * (0.5 - s) * quarter));
    }
    f[i] = value;
    if (i != resolution - i && resolution - i < resolution) f[resolution - i] = value;
  }
  return f;
}

double interpolation_gap(const ProfileTable& coarse, const std::vector<double>& fine) {
  // Fine samples at even indices coincide with the coarse ones; the odd
  // indices sit at coarse cell midpoints, where linear interpolation is
  // worst for a smooth convex arc.
  double worst = 0.0;
  const std::size_t n = fine.size();
  for (std::size_t j = 1; j < n; j += 2) {
    const double s = static_cast<double>(j) / static_cast<double>(n);
    worst = std::max(worst, std::fabs(coarse.value(s) - fine[j]));
  }
  return worst;
}

ProfileTable profile_with_tolerance(const EllipseShape& shape, std::size_t resolution,
                                    double tolerance) {
  const QuadrantArc arc(shape.semi_horizontal, shape.semi_vertical);
  std::size_t res = round_up_multiple_of_4(resolution);
  ProfileTable table(build_samples(arc, res));
  for (int rounds = 0; rounds < 16; ++rounds) {
    std::vector<double> fine = build_samples(arc, 2 * res);
    if (interpolation_gap(table, fine) < tolerance) return table;
    res *= 2;
    table = ProfileTable(std::move(fine));
  }
  return table;  // unreachable for sane tolerances; densest table wins
}

}  // namespace

EllipseShape::EllipseShape(double a, double b) : semi_horizontal(a), semi_vertical(b) {
  if (!(std::isfinite(a) && std::isfinite(b)) || a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("ellipse semi-axes must be positive and finite");
}

ProfileTable::ProfileTable(std::vector<double> values) : f_(std::move(values)) {
  if (f_.size() < 2) throw std::invalid_argument("profile needs at least 2 samples");
}

double ProfileTable::sample_fraction(std::size_t i) const {
  if (i >= f_.size()) throw std::out_of_range("sample index out of range");
  return static_cast<double>(i) / static_cast<double>(f_.size());
}

double ProfileTable::sample_value(std::size_t i) const {
  if (i >= f_.size()) throw std::out_of_range("sample index out of range");
  return f_[i];
}

double ProfileTable::value(double fraction) const {
  if (!std::isfinite(fraction))
    throw std::invalid_argument("perimeter fraction must be finite");
  double t = fraction - std::floor(fraction);  // fold into [0, 1)
  if (t >= 1.0) t = 0.0;
  const std::size_t n = f_.size();
  double scaled = t * static_cast<double>(n);
  std::size_t i0 = static_cast<std::size_t>(scaled);
  if (i0 >= n) i0 = n - 1;
  const double frac = scaled - static_cast<double>(i0);
  const std::size_t i1 = (i0 + 1) % n;
  return f_[i0] * (1.0 - frac) + f_[i1] * frac;
}

ProfileTable arc_length_profile(const EllipseShape& shape, std::size_t resolution) {
  if (resolution < 64) throw std::invalid_argument("profile resolution must be at least 64");
  return profile_with_tolerance(shape, resolution, 1e-4);
}

ProfileTable curve_profile(const EllipseShape& shape) {
  return profile_with_tolerance(shape, 8192, 1e-6);
}

double squeezed_pair_expectation(const ProfileTable& profile, double t_alpha, double t_beta) {
  return 1.0 - std::fabs(profile.value(t_alpha) - profile.value(t_beta));
}

double squeezed_pair_expectation(const EllipseShape& shape, double t_alpha, double t_beta) {
  return squeezed_pair_expectation(curve_profile(shape), t_alpha, t_beta);
}

double squeezed_adaptive_expectation(const ProfileTable& profile, double t) {
  return 1.0 - std::fabs(1.0 - profile.value(t));
}

std::vector<double> squeezed_adaptive_curve(const EllipseShape& shape,
                                            std::span<const double> fractions) {
  const ProfileTable profile = curve_profile(shape);
  std::vector<double> out;
  out.reserve(fractions.size());
  for (double t : fractions) out.push_back(squeezed_adaptive_expectation(profile, t));
  return out;
}

}  // namespace contextsim::plasticity
