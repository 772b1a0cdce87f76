#include "contextsim/urn.hpp"

#include <cmath>
#include <stdexcept>

namespace contextsim::urn {

bool operator==(const Assignment& lhs, const Assignment& rhs) {
  return lhs.a == rhs.a && lhs.a_prime == rhs.a_prime && lhs.b == rhs.b &&
         lhs.b_prime == rhs.b_prime;
}

const std::array<Assignment, 16>& assignments() {
  static const std::array<Assignment, 16> table = [] {
    std::array<Assignment, 16> t{};
    for (std::size_t i = 0; i < 16; ++i) {
      t[i].a = (i & 8) ? +1 : -1;
      t[i].a_prime = (i & 4) ? +1 : -1;
      t[i].b = (i & 2) ? +1 : -1;
      t[i].b_prime = (i & 1) ? +1 : -1;
    }
    return t;
  }();
  return table;
}

SingletPair make_singlet(const Assignment& first) {
  return SingletPair{first,
                     Assignment{-first.a, -first.a_prime, -first.b, -first.b_prime}};
}

int observe(const SingletPair& pair, Side side, Context context) {
  if (side == Side::A)
    return context == Context::unprimed ? pair.first.a : pair.first.a_prime;
  return context == Context::unprimed ? pair.second.b : pair.second.b_prime;
}

std::array<int, 2> cross_context_products(const Assignment& face) {
  return {face.a * face.a_prime, face.b * face.b_prime};
}

UrnDistribution make_distribution(const std::array<double, 16>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("urn weights must be non-negative");
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("urn weights must sum to 1");
  return UrnDistribution{weights};
}

UrnDistribution uniform_distribution() {
  std::array<double, 16> w{};
  w.fill(1.0 / 16.0);
  return UrnDistribution{w};
}

UrnDistribution point_mass(std::size_t index) {
  if (index >= 16) throw std::invalid_argument("assignment index out of range");
  std::array<double, 16> w{};
  w[index] = 1.0;
  return UrnDistribution{w};
}

PairExpectations expectations(const UrnDistribution& dist) {
  PairExpectations e;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto pair = make_singlet(assignments()[i]);
    const double w = dist.weights[i];
    const int a = observe(pair, Side::A, Context::unprimed);
    const int ap = observe(pair, Side::A, Context::primed);
    const int b = observe(pair, Side::B, Context::unprimed);
    const int bp = observe(pair, Side::B, Context::primed);
    e.ab += w * a * b;
    e.ab_prime += w * a * bp;
    e.a_prime_b += w * ap * b;
    e.a_prime_b_prime += w * ap * bp;
  }
  return e;
}

std::size_t sample_index(const UrnDistribution& dist, double u) {
  if (!(u >= 0.0 && u < 1.0)) throw std::invalid_argument("u must lie in [0, 1)");
  double cum = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    cum += dist.weights[i];
    if (u < cum) return i;
  }
  return 15;  // guard against accumulated rounding in the partial sums
}

}  // namespace contextsim::urn
