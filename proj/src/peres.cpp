#include "contextsim/peres.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace contextsim::peres {

namespace {

constexpr double kUnitTolerance = 1e-12;

void require_unit(const Direction3& d) {
  const double norm = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  if (!(std::fabs(norm - 1.0) <= kUnitTolerance))
    throw std::invalid_argument("direction must be a unit vector");
}

}  // namespace

Direction3 unit_direction(double x, double y, double z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    throw std::invalid_argument("direction components must be finite");
  Direction3 d{x, y, z};
  require_unit(d);
  return d;
}

Direction3 direction_in_xz(double angle_from_z) {
  if (!std::isfinite(angle_from_z))
    throw std::invalid_argument("angle must be finite");
  return Direction3{std::sin(angle_from_z), 0.0, std::cos(angle_from_z)};
}

Direction3 negated(const Direction3& d) { return Direction3{-d.x, -d.y, -d.z}; }

double dot(const Direction3& a, const Direction3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

int outcome(const Direction3& direction, const Direction3& j) {
  require_unit(direction);
  require_unit(j);
  return dot(direction, j) >= 0.0 ? +1 : -1;
}

PairOutcome pair_outcomes(const Direction3& j, const Direction3& a, const Direction3& b) {
  return PairOutcome{outcome(a, j), outcome(b, negated(j))};
}

double correlation_analytic(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw std::domain_error("correlation is defined for theta in [0, pi]");
  return 2.0 * theta / std::numbers::pi - 1.0;
}

Direction3 sample_direction_uniform(rng::Substream& stream) {
  const double z = stream.uniform_pm1();
  const double azimuth = 2.0 * std::numbers::pi * stream.uniform01();
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Direction3{r * std::cos(azimuth), r * std::sin(azimuth), z};
}

}  // namespace contextsim::peres
