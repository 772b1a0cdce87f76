#pragma once

#include "contextsim/rng.hpp"

namespace contextsim::peres {

// Unit vector in R^3. Build through unit_direction(), which enforces
// |norm - 1| <= 1e-12; the model is only meaningful for unit vectors.
struct Direction3 {
  double x = 0.0, y = 0.0, z = 1.0;
};

Direction3 unit_direction(double x, double y, double z);

// Direction in the x-z plane at `angle_from_z` radians from +z. Analyzer
// sweeps live in this plane without loss of generality: the fragment
// distribution is rotation invariant, so only the relative angle between
// the two analyzers matters.
Direction3 direction_in_xz(double angle_from_z);

Direction3 negated(const Direction3& d);
double dot(const Direction3& a, const Direction3& b);

// Fragment detector: +1 iff the fragment's angular momentum has a
// non-negative component along the analyzer direction (ties count as +1).
int outcome(const Direction3& direction, const Direction3& j);

// The two fragments fly apart with opposite angular momenta +J and -J.
// Returns (side A outcome at `a`, side B outcome at `b`) for fragment
// orientation j on side A and -j on side B.
struct PairOutcome {
  int a = 0, b = 0;
};
PairOutcome pair_outcomes(const Direction3& j, const Direction3& a, const Direction3& b);

// Product expectation over j uniform on the sphere, for analyzers at
// relative angle theta in [0, pi]:  E(theta) = 2*theta/pi - 1.
double correlation_analytic(double theta);

// j uniform on the unit sphere: z ~ U[-1, 1], azimuth ~ U[0, 2pi).
// Consumes one counter block (two doubles) from the stream.
Direction3 sample_direction_uniform(rng::Substream& stream);

}  // namespace contextsim::peres
