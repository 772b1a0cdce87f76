#include "contextsim/band.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contextsim::band {

Angle::Angle(double r) : radians(r) {
  if (!std::isfinite(r)) throw std::invalid_argument("angle must be finite");
}

BreakingPoint::BreakingPoint(double v) : x(v) {
  if (!(v >= -1.0 && v <= 1.0))
    throw std::invalid_argument("breaking point must lie in [-1, 1]");
}

int outcome(Angle setting, const BandShare& share) {
  const double c = std::cos(setting.radians - share.orientation.radians);
  return c >= share.breaking.x ? +1 : -1;
}

double prob_plus(Angle alpha) { return (1.0 + std::cos(alpha.radians)) / 2.0; }

double prob_minus(Angle alpha) { return 1.0 - prob_plus(alpha); }

double single_expectation(Angle alpha) { return 2.0 * prob_plus(alpha) - 1.0; }

double pair_expectation(Angle alpha, Angle beta, PairConvention convention) {
  const double e = 1.0 - std::fabs(std::cos(alpha.radians) - std::cos(beta.radians));
  return convention == PairConvention::correlated ? e : -e;
}

double adaptive_expectation(Angle theta) { return std::cos(theta.radians); }

double uniform_orientation_expectation(Angle theta) {
  if (theta.radians < 0.0 || theta.radians > std::numbers::pi)
    throw std::domain_error("uniform-orientation law is defined for theta in [0, pi]");
  return 1.0 - (2.0 / std::numbers::pi) * std::sin(theta.radians);
}

}  // namespace contextsim::band
