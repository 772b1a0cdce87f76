#pragma once

#include <array>
#include <cstddef>

namespace contextsim::urn {

// One ball face: pre-assigned answers (a, a', b, b'), each +1 or -1, for
// both measurement contexts on both sides.
struct Assignment {
  int a = -1, a_prime = -1, b = -1, b_prime = -1;
};

bool operator==(const Assignment& lhs, const Assignment& rhs);

// All 16 assignments in lexicographic order with -1 < +1, so index 0 is
// (-1,-1,-1,-1), index 1 is (-1,-1,-1,+1), ..., index 15 is (+1,+1,+1,+1).
const std::array<Assignment, 16>& assignments();

// A drawn ball as seen by the two parties: side B receives the
// component-wise negation of side A's face.
struct SingletPair {
  Assignment first, second;
};

SingletPair make_singlet(const Assignment& first);

enum class Side { A, B };
enum class Context { unprimed, primed };

// What the given side reports in the given context: side A reads a or a'
// from its own face, side B reads b or b' from the negated face.
int observe(const SingletPair& pair, Side side, Context context);

// Diagnostic only: the cross-context products (a*a', b*b') written on one
// face. Never observable in a run -- each side measures in one context per
// draw -- so protocol statistics must not consume this.
std::array<int, 2> cross_context_products(const Assignment& face);

// Probability weights over the 16 assignments. Weights must be
// non-negative and sum to 1 within 1e-12.
struct UrnDistribution {
  std::array<double, 16> weights{};
};

UrnDistribution make_distribution(const std::array<double, 16>& weights);
UrnDistribution uniform_distribution();
UrnDistribution point_mass(std::size_t index);

// The four pair expectations E_xy = sum_i w_i * observe_A * observe_B.
struct PairExpectations {
  double ab = 0.0, ab_prime = 0.0, a_prime_b = 0.0, a_prime_b_prime = 0.0;
};

PairExpectations expectations(const UrnDistribution& dist);

// Inverse-CDF draw: maps u in [0, 1) to an assignment index.
std::size_t sample_index(const UrnDistribution& dist, double u);

}  // namespace contextsim::urn
