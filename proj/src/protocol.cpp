#include "contextsim/protocol.hpp"

#include "contextsim/peres.hpp"
#include "contextsim/rng.hpp"
#include "contextsim/urn.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace contextsim::protocol {

namespace {

constexpr double kPi = std::numbers::pi;

// Integer accumulator for one estimator run. Every per-trial value is a
// small integer, so partial sums commute exactly and the merged result is
// identical for any partition of the trial range.
struct TrialStats {
  long long sum = 0;
  long long sum_squares = 0;
  std::uint64_t kept = 0;
  std::uint64_t discarded = 0;

  void add(int value) {
    sum += value;
    sum_squares += static_cast<long long>(value) * value;
    ++kept;
  }
  void merge(const TrialStats& other) {
    sum += other.sum;
    sum_squares += other.sum_squares;
    kept += other.kept;
    discarded += other.discarded;
  }
};

template <class Fn>
TrialStats accumulate_trials(std::uint64_t trials, std::uint64_t offset, unsigned workers,
                             Fn&& fn) {
  if (workers <= 1 || trials < 2) {
    TrialStats stats;
    for (std::uint64_t i = 0; i < trials; ++i) fn(offset + i, stats);
    return stats;
  }
  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::uint64_t>(workers, trials));
  std::vector<TrialStats> parts(nthreads);
  std::vector<std::thread> threads;
  threads.reserve(nthreads);
  for (unsigned w = 0; w < nthreads; ++w) {
    const std::uint64_t lo = trials * w / nthreads;
    const std::uint64_t hi = trials * (w + 1) / nthreads;
    threads.emplace_back([&fn, &parts, offset, lo, hi, w] {
      for (std::uint64_t i = lo; i < hi; ++i) fn(offset + i, parts[w]);
    });
  }
  for (auto& t : threads) t.join();
  TrialStats stats;
  for (const auto& p : parts) stats.merge(p);
  return stats;
}

CorrelationEstimate finish(const TrialStats& stats) {
  CorrelationEstimate e;
  e.n = stats.kept;
  e.discarded = stats.discarded;
  if (stats.kept > 0) e.mean = static_cast<double>(stats.sum) / static_cast<double>(stats.kept);
  if (stats.kept > 1) {
    const double n = static_cast<double>(stats.kept);
    const double sum = static_cast<double>(stats.sum);
    double var = (static_cast<double>(stats.sum_squares) - sum * sum / n) / (n - 1.0);
    if (var < 0.0) var = 0.0;
    e.std_error = std::sqrt(var / n);
  }
  return e;
}

void validate_options(const EstimateOptions& options) {
  if (options.trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (options.workers == 0) throw std::invalid_argument("workers must be at least 1");
}

double draw_breaking_point(std::uint64_t seed, std::uint64_t trial) {
  return rng::Substream(seed, trial, rng::kTagBreakingPoint).uniform_pm1();
}

std::array<band::Angle, 4> term_relative_angles(const SettingsQuad& q) {
  return {band::Angle(q.beta.radians - q.alpha.radians),
          band::Angle(q.beta_prime.radians - q.alpha.radians),
          band::Angle(q.beta.radians - q.alpha_prime.radians),
          band::Angle(q.beta_prime.radians - q.alpha_prime.radians)};
}

}  // namespace

SettingsQuad SettingsQuad::canonical() {
  return SettingsQuad{band::Angle(0.0), band::Angle(kPi / 2), band::Angle(kPi / 4),
                      band::Angle(-kPi / 4)};
}

TrialRecord run_nonadaptive_trial(const SettingsQuad& settings, const band::BandShare& share) {
  TrialRecord rec;
  rec.x = share.breaking.x;
  const int a = band::outcome(settings.alpha, share);
  const int ap = band::outcome(settings.alpha_prime, share);
  const int b = band::outcome(settings.beta, share);
  const int bp = band::outcome(settings.beta_prime, share);
  rec.outcomes = {a, ap, b, bp};
  rec.products = {a * b, a * bp, ap * b, ap * bp};
  rec.chsh_row = rec.products[0] + rec.products[1] + rec.products[2] - rec.products[3];
  rec.cobits = 0;
  return rec;
}

TrialRecord run_adaptive_trial(const SettingsQuad& settings, const band::BandShare& share) {
  TrialRecord rec;
  rec.x = share.breaking.x;
  const int a = band::outcome(settings.alpha, share);
  const int ap = band::outcome(settings.alpha_prime, share);
  const int b = band::outcome(settings.beta, share);
  const int bp = band::outcome(settings.beta_prime, share);
  rec.outcomes = {a, ap, b, bp};
  // Re-aligned term: the A side sits on the share, outcome +1, and the B
  // side reads the band at the relative angle. Same tie rule as outcome().
  const band::BandShare aligned{band::Angle(0.0), share.breaking};
  const auto rel = term_relative_angles(settings);
  for (std::size_t i = 0; i < 4; ++i) rec.products[i] = band::outcome(rel[i], aligned);
  rec.chsh_row = rec.products[0] + rec.products[1] + rec.products[2] - rec.products[3];
  rec.cobits = 4;  // one context bit per term
  return rec;
}

std::vector<TableRow> build_table(std::span<const double> xs,
                                  std::span<const std::string> x_texts) {
  if (!x_texts.empty() && x_texts.size() != xs.size())
    throw std::invalid_argument("x_texts must be empty or match xs in length");
  const auto settings = SettingsQuad::canonical();
  std::vector<TableRow> rows;
  rows.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= -1.0 && xs[i] <= 1.0))
      throw std::invalid_argument("breaking point " + std::to_string(i) +
                                  " lies outside [-1, 1]");
    const band::BandShare share{band::Angle(0.0), band::BreakingPoint(xs[i])};
    const TrialRecord na = run_nonadaptive_trial(settings, share);
    const TrialRecord ad = run_adaptive_trial(settings, share);
    TableRow row;
    row.x = xs[i];
    if (!x_texts.empty()) {
      row.x_text = x_texts[i];
    } else {  // shortest round-trip spelling
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof buf, xs[i]);
      row.x_text.assign(buf, res.ptr);
    }
    row.outcomes = na.outcomes;
    row.na_products = na.products;
    row.na_chsh = na.chsh_row;
    row.ad_products = ad.products;
    row.ad_chsh = ad.chsh_row;
    rows.push_back(std::move(row));
  }
  return rows;
}

TableCheck check_against_reference(std::span<const TableRow> rows) {
  const auto& ref = reference_table();
  TableCheck result;
  if (rows.size() != ref.size()) {
    result.ok = false;
    result.row = rows.size() < ref.size() ? rows.size() : ref.size();
    result.detail = "row count " + std::to_string(rows.size()) + " != " +
                    std::to_string(ref.size());
    return result;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const bool same = rows[i].outcomes == ref[i].outcomes &&
                      rows[i].na_products == ref[i].na_products &&
                      rows[i].na_chsh == ref[i].na_chsh &&
                      rows[i].ad_products == ref[i].ad_products &&
                      rows[i].ad_chsh == ref[i].ad_chsh;
    if (!same) {
      result.ok = false;
      result.row = i;
      result.detail = "row " + std::to_string(i) + " disagrees with the reference table";
      return result;
    }
  }
  return result;
}

ChshEstimate estimate_chsh(ProtocolKind kind, const SettingsQuad& settings,
                           const EstimateOptions& options) {
  validate_options(options);
  ChshEstimate out;
  TrialStats stats;

  switch (kind) {
    case ProtocolKind::nonadaptive: {
      const bool uniform = options.orientation == OrientationModel::uniform;
      stats = accumulate_trials(
          options.trials, options.trial_offset, options.workers,
          [&settings, seed = options.seed, uniform](std::uint64_t t, TrialStats& st) {
            const double x = draw_breaking_point(seed, t);
            double phi = 0.0;
            if (uniform)
              phi = 2.0 * kPi * rng::Substream(seed, t, rng::kTagOrientation).uniform01();
            const band::BandShare share{band::Angle(phi), band::BreakingPoint(x)};
            st.add(run_nonadaptive_trial(settings, share).chsh_row);
          });
      out.estimate = finish(stats);
      if (!uniform) out.estimate.analytic = nonadaptive_chsh_analytic(settings);
      out.ledger.cobits_total = 0;
      break;
    }
    case ProtocolKind::adaptive: {
      stats = accumulate_trials(
          options.trials, options.trial_offset, options.workers,
          [&settings, seed = options.seed](std::uint64_t t, TrialStats& st) {
            const double x = draw_breaking_point(seed, t);
            const band::BandShare share{band::Angle(0.0), band::BreakingPoint(x)};
            st.add(run_adaptive_trial(settings, share).chsh_row);
          });
      out.estimate = finish(stats);
      out.estimate.analytic = adaptive_chsh_analytic(settings);
      out.ledger.cobits_total = 4 * stats.kept;
      break;
    }
    case ProtocolKind::adaptive_fresh_shares: {
      const auto rel = term_relative_angles(settings);
      stats = accumulate_trials(
          options.trials, options.trial_offset, options.workers,
          [&rel, seed = options.seed](std::uint64_t t, TrialStats& st) {
            int row = 0;
            for (std::size_t i = 0; i < 4; ++i) {
              const double x =
                  rng::Substream(seed, t, rng::kTagFreshTerm + static_cast<std::uint32_t>(i))
                      .uniform_pm1();
              const band::BandShare share{band::Angle(0.0), band::BreakingPoint(x)};
              const int term = band::outcome(rel[i], share);
              row += (i == 3) ? -term : term;
            }
            st.add(row);
          });
      out.estimate = finish(stats);
      out.estimate.analytic = adaptive_chsh_analytic(settings);
      out.ledger.cobits_total = 4 * stats.kept;
      break;
    }
  }
  out.ledger.bits_total = 0;
  return out;
}

double nonadaptive_chsh_analytic(const SettingsQuad& q) {
  return band::pair_expectation(q.alpha, q.beta) +
         band::pair_expectation(q.alpha, q.beta_prime) +
         band::pair_expectation(q.alpha_prime, q.beta) -
         band::pair_expectation(q.alpha_prime, q.beta_prime);
}

double adaptive_chsh_analytic(const SettingsQuad& q) {
  const auto rel = term_relative_angles(q);
  return band::adaptive_expectation(rel[0]) + band::adaptive_expectation(rel[1]) +
         band::adaptive_expectation(rel[2]) - band::adaptive_expectation(rel[3]);
}

double curve_analytic(CurveModel model, double theta) {
  switch (model) {
    case CurveModel::band_adaptive:
      return band::adaptive_expectation(band::Angle(theta));
    case CurveModel::band_uniform:
      return band::uniform_orientation_expectation(band::Angle(theta));
    case CurveModel::peres:
      return peres::correlation_analytic(theta);
    case CurveModel::urn:
      if (!std::isfinite(theta)) throw std::invalid_argument("theta must be finite");
      return urn::expectations(urn::uniform_distribution()).ab;
  }
  throw std::invalid_argument("unknown curve model");
}

std::vector<CorrelationEstimate> estimate_curve(CurveModel model,
                                                std::span<const double> thetas,
                                                const EstimateOptions& options) {
  validate_options(options);
  std::vector<CorrelationEstimate> points;
  points.reserve(thetas.size());

  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double theta = thetas[k];
    const double analytic = curve_analytic(model, theta);  // also validates the domain
    const std::uint64_t offset = options.trial_offset + k * options.trials;
    TrialStats stats;

    switch (model) {
      case CurveModel::band_adaptive: {
        const band::Angle setting(theta);
        stats = accumulate_trials(
            options.trials, offset, options.workers,
            [setting, seed = options.seed](std::uint64_t t, TrialStats& st) {
              const double x = draw_breaking_point(seed, t);
              const band::BandShare share{band::Angle(0.0), band::BreakingPoint(x)};
              st.add(band::outcome(setting, share));
            });
        break;
      }
      case CurveModel::band_uniform: {
        // Per-trial integer value 1 + A - B in {-1, 1, 3}; its mean over
        // (orientation, x) is exactly the closed-form law, and integer
        // aggregation keeps the estimate partition-independent.
        const band::Angle setting(theta);
        stats = accumulate_trials(
            options.trials, offset, options.workers,
            [setting, seed = options.seed](std::uint64_t t, TrialStats& st) {
              const double phi =
                  kPi * rng::Substream(seed, t, rng::kTagOrientation).uniform01();
              const double x = draw_breaking_point(seed, t);
              const band::BandShare share{band::Angle(phi), band::BreakingPoint(x)};
              const int a = band::outcome(band::Angle(0.0), share);
              const int b = band::outcome(setting, share);
              st.add(1 + a - b);
            });
        break;
      }
      case CurveModel::peres: {
        const auto dir_a = peres::direction_in_xz(0.0);
        const auto dir_b = peres::direction_in_xz(theta);
        stats = accumulate_trials(
            options.trials, offset, options.workers,
            [&dir_a, &dir_b, seed = options.seed](std::uint64_t t, TrialStats& st) {
              rng::Substream stream(seed, t, rng::kTagSphere);
              const auto j = peres::sample_direction_uniform(stream);
              const double da = peres::dot(dir_a, j);
              const double db = peres::dot(dir_b, peres::negated(j));
              if (da == 0.0 || db == 0.0) {
                ++st.discarded;  // exact tie: fragment in an analyzer plane
                return;
              }
              st.add((da > 0.0 ? 1 : -1) * (db > 0.0 ? 1 : -1));
            });
        break;
      }
      case CurveModel::urn: {
        const auto dist = urn::uniform_distribution();
        stats = accumulate_trials(
            options.trials, offset, options.workers,
            [&dist, seed = options.seed](std::uint64_t t, TrialStats& st) {
              const double u = rng::Substream(seed, t, rng::kTagUrn).uniform01();
              const auto pair = urn::make_singlet(urn::assignments()[urn::sample_index(dist, u)]);
              st.add(urn::observe(pair, urn::Side::A, urn::Context::unprimed) *
                     urn::observe(pair, urn::Side::B, urn::Context::unprimed));
            });
        break;
      }
    }

    CorrelationEstimate e = finish(stats);
    e.analytic = analytic;
    points.push_back(e);
  }
  return points;
}

}  // namespace contextsim::protocol
