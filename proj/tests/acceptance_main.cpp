// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Each criterion is self-contained and runnable in any order.

#include "contextsim/band.hpp"
#include "contextsim/peres.hpp"
#include "contextsim/plasticity.hpp"
#include "contextsim/polytope.hpp"
#include "contextsim/protocol.hpp"
#include "contextsim/rng.hpp"
#include "contextsim/urn.hpp"

#include "oracles.hpp"
#include "spawn.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kWorkers = 4;

using contextsim::band::Angle;
using contextsim::band::BandShare;
using contextsim::band::BreakingPoint;
using contextsim::rng::Substream;
namespace protocol = contextsim::protocol;
namespace polytope = contextsim::polytope;
namespace plasticity = contextsim::plasticity;
namespace peres = contextsim::peres;
namespace urn = contextsim::urn;

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail << "    failed: " << what << "\n";
    }
  }
};

protocol::EstimateOptions mc_options(std::uint64_t trials, std::uint64_t seed) {
  protocol::EstimateOptions o;
  o.trials = trials;
  o.seed = seed;
  o.workers = kWorkers;
  return o;
}

// ---- criterion bodies -------------------------------------------------------

void criterion_table(Checker& c) {
  std::vector<double> xs;
  std::vector<std::string> texts;
  for (const protocol::BuiltinX& b : protocol::builtin_breaking_points()) {
    xs.push_back(b.value);
    texts.push_back(b.text);
  }
  const auto rows = protocol::build_table(xs, texts);
  const auto& ref = protocol::reference_table();
  c.require(rows.size() == 20 && ref.size() == 20, "20 rows on both sides");
  for (std::size_t i = 0; i < std::min(rows.size(), ref.size()); ++i) {
    const bool same = rows[i].outcomes == ref[i].outcomes &&
                      rows[i].na_products == ref[i].na_products &&
                      rows[i].na_chsh == ref[i].na_chsh &&
                      rows[i].ad_products == ref[i].ad_products &&
                      rows[i].ad_chsh == ref[i].ad_chsh && rows[i].x == ref[i].x;
    c.require(same, "row " + std::to_string(i) + " equals the reference row");
  }
  c.require(protocol::check_against_reference(rows).ok, "check_against_reference accepts");
}

void criterion_nonadaptive(Checker& c) {
  const auto q = protocol::SettingsQuad::canonical();
  const double analytic = protocol::nonadaptive_chsh_analytic(q);
  c.require(std::abs(analytic - std::sqrt(2.0)) <= 1e-12, "analytic CHSH equals sqrt(2)");
  const auto est = protocol::estimate_chsh(protocol::ProtocolKind::nonadaptive, q,
                                           mc_options(1000000, 1001));
  c.require(std::abs(est.estimate.mean - analytic) < 4.0 * est.estimate.std_error,
            "Monte Carlo mean within 4 standard errors of sqrt(2)");
  c.require(est.ledger.cobits_total == 0, "no communication in the non-adaptive protocol");
}

void criterion_adaptive(Checker& c) {
  const auto q = protocol::SettingsQuad::canonical();
  const double analytic = protocol::adaptive_chsh_analytic(q);
  c.require(std::abs(analytic - 2.0 * std::sqrt(2.0)) <= 1e-12,
            "analytic CHSH equals 2 sqrt(2)");
  const auto est =
      protocol::estimate_chsh(protocol::ProtocolKind::adaptive, q, mc_options(1000000, 1002));
  c.require(std::abs(est.estimate.mean - analytic) < 4.0 * est.estimate.std_error,
            "Monte Carlo mean within 4 standard errors of 2 sqrt(2)");
  c.require(est.estimate.mean > 2.0, "mean exceeds the classical bound 2");
  c.require(std::abs(est.estimate.mean - 2.828427) < 0.01, "mean reaches the Tsirelson value");
}

void criterion_single_observable(Checker& c) {
  const int n = 1000000;
  double worst = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double alpha = kPi * i / 18.0;
    int plus = 0;
    for (int t = 0; t < n; ++t) {
      Substream s(1004 + static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(t),
                  contextsim::rng::kTagBreakingPoint);
      const BandShare share{Angle(0.0), BreakingPoint(s.uniform_pm1())};
      if (contextsim::band::outcome(Angle(alpha), share) == 1) ++plus;
    }
    const double freq = static_cast<double>(plus) / n;
    const double law = std::cos(alpha / 2) * std::cos(alpha / 2);
    worst = std::max(worst, std::abs(freq - law));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |P+ - cos^2(alpha/2)| = %.2e < 5e-3", worst);
  c.require(worst < 5e-3, buf);
}

void criterion_band_laws(Checker& c) {
  Substream s(1005, 0, 0);
  double worst_pair = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const double alpha = -kPi + 2 * kPi * s.uniform01();
    const double beta = -kPi + 2 * kPi * s.uniform01();
    const double law = contextsim::band::pair_expectation(Angle(alpha), Angle(beta));
    worst_pair = std::max(worst_pair, std::abs(law - oracles::band_pair_integral(alpha, beta)));
  }
  c.require(worst_pair <= 1e-6, "pair law equals the brute-force x-integral to 1e-6");

  double worst_adaptive = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double theta = -kPi + 2 * kPi * i / 18.0;
    worst_adaptive = std::max(
        worst_adaptive, std::abs(contextsim::band::adaptive_expectation(Angle(theta)) -
                                 std::cos(theta)));
  }
  c.require(worst_adaptive <= 1e-12, "adaptive law equals cos(theta)");

  std::vector<double> grid(19);
  for (int i = 0; i <= 18; ++i) grid[i] = kPi * i / 18.0;
  const auto pts =
      protocol::estimate_curve(protocol::CurveModel::band_uniform, grid, mc_options(1000000, 1005));
  double worst_mc = 0.0, worst_law = 0.0;
  for (int i = 0; i <= 18; ++i) {
    const double law = contextsim::band::uniform_orientation_expectation(Angle(grid[i]));
    worst_mc = std::max(worst_mc, std::abs(pts[i].mean - law));
    worst_law = std::max(worst_law, std::abs(law - oracles::uniform_orientation_quadrature(grid[i])));
  }
  c.require(worst_mc <= 1e-2, "uniform-orientation Monte Carlo within 1e-2 of the law");
  c.require(worst_law <= 1e-10, "uniform-orientation law agrees with direct quadrature");
}

void criterion_peres(Checker& c) {
  std::vector<double> grid(19);
  for (int i = 0; i <= 18; ++i) grid[i] = kPi * i / 18.0;
  const auto pts =
      protocol::estimate_curve(protocol::CurveModel::peres, grid, mc_options(1000000, 1006));
  double worst = 0.0;
  for (int i = 0; i <= 18; ++i)
    worst = std::max(worst, std::abs(pts[i].mean - (2.0 * grid[i] / kPi - 1.0)));
  c.require(worst <= 1e-2, "Monte Carlo within 1e-2 of the linear law on the 19-point grid");

  const auto dir = peres::direction_in_xz(1.234);
  int violations = 0, kept = 0;
  for (int t = 0; t < 100000; ++t) {
    Substream s(1006, static_cast<std::uint64_t>(t), contextsim::rng::kTagSphere);
    const auto j = peres::sample_direction_uniform(s);
    if (peres::dot(dir, j) == 0.0) continue;  // exact tie excluded
    const auto o = peres::pair_outcomes(j, dir, dir);
    if (o.a * o.b != -1) ++violations;
    ++kept;
  }
  c.require(violations == 0 && kept > 0, "equal settings are perfectly anti-correlated");
}

void criterion_polytope(Checker& c) {
  const auto product = polytope::product_vertices();
  c.require(product.points.size() == 8, "exactly 8 distinct product vertices");
  const auto facets = polytope::enumerate_facets(product);
  for (const auto& signs : polytope::chsh_sign_variants()) {
    const polytope::Facet want{polytope::Point(signs.begin(), signs.end()), 2};
    c.require(std::find(facets.begin(), facets.end(), want) != facets.end(),
              "CHSH facet " + polytope::facet_line(want) + " present");
  }

  const auto raw_facets = polytope::enumerate_facets(polytope::raw_vertices());
  c.require(raw_facets.size() == 8, "raw coordinates give exactly 8 facets");
  for (const auto& f : raw_facets) {
    int nonzero = 0;
    for (long long v : f.coeffs)
      if (v != 0) nonzero += (v == 1 || v == -1) ? 1 : 100;
    c.require(nonzero == 1 && f.rhs == 1, "cube facet shape for " + polytope::facet_line(f));
  }

  double best = -10.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const auto e = urn::expectations(urn::point_mass(i));
    for (const auto& signs : polytope::chsh_sign_variants())
      best = std::max(best, polytope::chsh_sum(
                                {e.ab, e.ab_prime, e.a_prime_b, e.a_prime_b_prime}, signs));
  }
  c.require(best == 2.0, "max CHSH over the 16 deterministic urn states is exactly 2");
}

void criterion_soundness(Checker& c) {
  Substream s(1008, 0, 0);
  double worst_excess = -1.0;
  for (int rep = 0; rep < 200; ++rep) {
    const protocol::SettingsQuad q{Angle(-kPi + 2 * kPi * s.uniform01()),
                                   Angle(-kPi + 2 * kPi * s.uniform01()),
                                   Angle(-kPi + 2 * kPi * s.uniform01()),
                                   Angle(-kPi + 2 * kPi * s.uniform01())};
    auto o = mc_options(100000, 2000 + static_cast<std::uint64_t>(rep));
    o.orientation = (rep % 2 == 0) ? protocol::OrientationModel::fixed_zero
                                   : protocol::OrientationModel::uniform;
    const auto est = protocol::estimate_chsh(protocol::ProtocolKind::nonadaptive, q, o);
    worst_excess =
        std::max(worst_excess, std::abs(est.estimate.mean) -
                                   (2.0 + 4.0 * est.estimate.std_error));
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "no |mean| exceeded 2 + 4 stderr (worst margin %.2e)",
                worst_excess);
  c.require(worst_excess <= 0.0, buf);
}

void criterion_plasticity(Checker& c) {
  const plasticity::EllipseShape circle(1.0, 1.0);
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(0.5 * i / 64.0);
  const auto curve = plasticity::squeezed_adaptive_curve(circle, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(curve[i] - std::cos(2.0 * kPi * grid[i])));
  c.require(worst <= 1e-6, "circle reproduces the adaptive cosine within 1e-6");

  std::vector<double> quarter;
  for (double b : {1.0, 2.0, 4.0, 8.0})
    quarter.push_back(plasticity::squeezed_adaptive_curve(plasticity::EllipseShape(1.0, b),
                                                          std::vector<double>{0.25})[0]);
  for (std::size_t i = 1; i < quarter.size(); ++i)
    c.require(quarter[i] >= quarter[i - 1] - 1e-12,
              "E(0.25) non-decreasing from b = " + std::to_string(i));

  std::vector<double> eighth;
  for (double a : {1.0, 0.5, 0.25})
    eighth.push_back(plasticity::squeezed_adaptive_curve(plasticity::EllipseShape(a, 1.0),
                                                         std::vector<double>{0.125})[0]);
  for (std::size_t i = 1; i < eighth.size(); ++i)
    c.require(eighth[i] <= eighth[i - 1] + 1e-12,
              "E(0.125) non-increasing as the minor axis shrinks, step " + std::to_string(i));
}

void criterion_determinism(Checker& c) {
  const std::string cases[] = {
      "table1 --builtin-paper-rows",
      "chsh --protocol adaptive --trials 50000 --seed 31",
      "curve --model band-uniform --points 5 --trials 30000 --seed 32",
      "facets --coords product",
      "squeeze --minor 1 --major 2 --points 9",
  };
  for (const std::string& args : cases) {
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    c.require(a.exit_code == 0 && b.exit_code == 0, "exit 0 for: " + args);
    c.require(a.output == b.output, "byte-identical reruns for: " + args);
  }

  const std::string mc[] = {
      "chsh --protocol adaptive --trials 50000 --seed 31",
      "curve --model peres --points 5 --trials 30000 --seed 33",
  };
  for (const std::string& args : mc) {
    const std::string f1 = "/tmp/contextsim_accept_w1.csv";
    const std::string f4 = "/tmp/contextsim_accept_w4.csv";
    const CliResult a = run_cli(args + " --workers 1 --out " + f1);
    const CliResult b = run_cli(args + " --workers 4 --out " + f4);
    c.require(a.exit_code == 0 && b.exit_code == 0, "exit 0 for: " + args);
    c.require(slurp(f1) == slurp(f4), "worker count invisible in output for: " + args);
  }
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds; 0 = no limit
  std::function<void(Checker&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "valuation table reproduction", 1.0, criterion_table},
      {2, "non-adaptive CHSH = sqrt(2)", 5.0, criterion_nonadaptive},
      {3, "adaptive CHSH = 2 sqrt(2)", 5.0, criterion_adaptive},
      {4, "single-observable law cos^2(alpha/2)", 0.0, criterion_single_observable},
      {5, "band pair/adaptive/uniform laws", 0.0, criterion_band_laws},
      {6, "bomb-fragment linear law", 0.0, criterion_peres},
      {7, "polytope facets and urn bound", 2.0, criterion_polytope},
      {8, "non-adaptive soundness sweep", 0.0, criterion_soundness},
      {9, "squeezed-band properties", 0.0, criterion_plasticity},
      {10, "CLI determinism", 0.0, criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& cr : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checker);
    } catch (const std::exception& e) {
      checker.ok = false;
      checker.detail << "    exception: " << e.what() << "\n";
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (cr.time_limit > 0.0 && elapsed >= cr.time_limit)
      checker.require(false, "runtime " + std::to_string(elapsed) + " s exceeds " +
                                 std::to_string(cr.time_limit) + " s");
    if (!checker.ok) ++failures;
    std::printf("acceptance: criterion %d %s %s (%.2f s)\n", cr.id,
                checker.ok ? "PASS" : "FAIL", cr.name, elapsed);
    const std::string detail = checker.detail.str();
    if (!detail.empty()) std::fputs(detail.c_str(), stdout);
  }
  std::printf("acceptance: %d/10 criteria passed\n",
              static_cast<int>(criteria.size()) - failures);
  return failures;
}
