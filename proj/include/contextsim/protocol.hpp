#pragma once

#include "contextsim/band.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contextsim::protocol {

// The four CHSH settings. canonical() is the quad used for the reference
// valuation table: alpha = 0, alpha' = pi/2, beta = pi/4, beta' = -pi/4.
struct SettingsQuad {
  band::Angle alpha, alpha_prime, beta, beta_prime;
  static SettingsQuad canonical();
};

enum class ProtocolKind {
  nonadaptive,           // all four outcomes read off one share as-is
  adaptive,              // A-side re-aligns with the share before each term
  adaptive_fresh_shares  // experimental: an independent share per CHSH term
};

// One run: the drawn breaking point, the four outcomes A, A', B, B' (all
// read from the same share, orientation fixed), the four term products in
// the order AB, AB', A'B, A'B', and the CHSH row AB + AB' + A'B - A'B'.
// cobits counts context bits sent in the run: 1 per term in the adaptive
// protocol (4 per run), 0 otherwise. No outcome bits are ever sent.
struct TrialRecord {
  double x = 0.0;
  std::array<int, 4> outcomes{};
  std::array<int, 4> products{};
  int chsh_row = 0;
  int cobits = 0;
};

TrialRecord run_nonadaptive_trial(const SettingsQuad& settings, const band::BandShare& share);

// Adaptive rule: before each term the A side rotates its setting onto the
// share, so the term product collapses to sgn(cos(s_B - s_A) - x). Only
// the relative angle between the two settings enters; the share
// orientation is irrelevant to the products (it still determines the
// recorded raw outcomes).
TrialRecord run_adaptive_trial(const SettingsQuad& settings, const band::BandShare& share);

// A valuation-table row: the non-adaptive and adaptive halves for one
// breaking point at the canonical settings, orientation 0. x_text carries
// the input spelling so tables can be echoed verbatim; when no spellings
// are supplied it falls back to the shortest round-trip rendering of x.
struct TableRow {
  std::string x_text;
  double x = 0.0;
  std::array<int, 4> outcomes{};     // A, A', B, B'
  std::array<int, 4> na_products{};  // AB, AB', A'B, A'B'
  int na_chsh = 0;
  std::array<int, 4> ad_products{};
  int ad_chsh = 0;
};

std::vector<TableRow> build_table(std::span<const double> xs,
                                  std::span<const std::string> x_texts = {});

// The 20 breaking points of the built-in reference table, spelled exactly
// as published, and the frozen rows they must reproduce.
struct BuiltinX {
  const char* text;
  double value;
};
std::span<const BuiltinX> builtin_breaking_points();
const std::vector<TableRow>& reference_table();

// Signs-and-CHSH comparison against the reference table (x values are
// echoed, not compared). On mismatch, `detail` names the first bad row.
struct TableCheck {
  bool ok = true;
  std::size_t row = 0;
  std::string detail;
};
TableCheck check_against_reference(std::span<const TableRow> rows);

struct CorrelationEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n); 0 when n < 2
  std::uint64_t n = 0;     // trials kept
  std::uint64_t discarded = 0;  // tie-excluded trials (bomb model only)
  std::optional<double> analytic;
};

struct CommunicationLedger {
  std::uint64_t cobits_total = 0;
  std::uint64_t bits_total = 0;  // outcome bits; always 0 by construction
};

// Share orientation model for the non-adaptive estimator. The CHSH row is
// +-2 per trial for any settings and any orientation, so the soundness
// bound survives either choice; fixed_zero matches the closed-form law.
enum class OrientationModel { fixed_zero, uniform };

struct EstimateOptions {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  OrientationModel orientation = OrientationModel::fixed_zero;
  std::uint64_t trial_offset = 0;  // global index of the first trial
};

struct ChshEstimate {
  CorrelationEstimate estimate;
  CommunicationLedger ledger;
};

// Mean CHSH over per-trial integer rows. Per-trial substreams are derived
// from (seed, global trial index), and aggregation is integer-exact, so
// results are byte-identical for any worker count.
ChshEstimate estimate_chsh(ProtocolKind kind, const SettingsQuad& settings,
                           const EstimateOptions& options);

double nonadaptive_chsh_analytic(const SettingsQuad& settings);
double adaptive_chsh_analytic(const SettingsQuad& settings);

enum class CurveModel {
  band_adaptive,  // single aligned term: E = cos theta, theta free
  band_uniform,   // orientation ~ U[0, pi]: E = 1 - (2/pi) sin theta, theta in [0, pi]
  peres,          // bomb fragments: E = 2 theta/pi - 1, theta in [0, pi]
  urn             // uniform urn, contexts (a, b): E = 0, theta ignored
};

// One estimate per grid angle; grid point k uses global trials
// [k*trials, (k+1)*trials) so points are statistically independent.
std::vector<CorrelationEstimate> estimate_curve(CurveModel model,
                                                std::span<const double> thetas,
                                                const EstimateOptions& options);

// Closed-form value the estimator converges to (validates the domain).
double curve_analytic(CurveModel model, double theta);

}  // namespace contextsim::protocol
