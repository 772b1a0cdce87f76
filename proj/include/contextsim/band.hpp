#pragma once

namespace contextsim::band {

// Measurement or share direction in radians. Only cosines of angle
// differences enter the model, so any finite value is legal.
struct Angle {
  double radians = 0.0;
  Angle() = default;
  explicit Angle(double r);  // rejects non-finite values
};

// Pre-assigned breaking point along the band diameter, measured from the
// center: +1 at the "plus" pole, -1 at the opposite pole.
struct BreakingPoint {
  double x = 0.0;
  BreakingPoint() = default;
  explicit BreakingPoint(double v);  // rejects values outside [-1, 1]
};

// One elastic band: a fixed orientation and a fixed breaking point, both
// decided at the source. The measurement outcome is then deterministic.
struct BandShare {
  Angle orientation;
  BreakingPoint breaking;
};

// +1 iff the band, stretched along `setting`, snaps on the plus side:
// cos(setting - orientation) >= x. The boundary case counts as +1.
int outcome(Angle setting, const BandShare& share);

// Single-side statistics over x ~ U[-1, 1]:
//   P+(alpha)  = (1 + cos alpha)/2 = cos^2(alpha/2)
//   E(alpha)   = P+ - P- = cos alpha
// with alpha measured from the share orientation.
double prob_plus(Angle alpha);
double prob_minus(Angle alpha);
double single_expectation(Angle alpha);  // defined as 2*prob_plus - 1, exactly

// Sign convention for the two-band source. `correlated` matches the
// construction used throughout (both parties read the same share);
// `anticorrelated` flips the product sign globally, for singlet-style
// conventions.
enum class PairConvention { correlated, anticorrelated };

// Product expectation for two settings read off one share, x ~ U[-1, 1]:
//   E(alpha, beta) = 1 - |cos alpha - cos beta|
// i.e. the outcomes agree except when x falls between the two cosines.
double pair_expectation(Angle alpha, Angle beta,
                        PairConvention convention = PairConvention::correlated);

// Pair expectation after the first side re-aligns its setting with the
// share orientation; only the relative angle theta survives: E = cos theta.
double adaptive_expectation(Angle theta);

// Pair law averaged over share orientations uniform on [0, pi]:
//   E(theta) = 1 - (2/pi) sin theta,  theta in [0, pi].
// Rejects theta outside that interval.
double uniform_orientation_expectation(Angle theta);

}  // namespace contextsim::band
