#include "contextsim/contextsim.h"

#include "contextsim/band.hpp"
#include "contextsim/peres.hpp"
#include "contextsim/plasticity.hpp"
#include "contextsim/polytope.hpp"
#include "contextsim/protocol.hpp"

#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

// Thin extern-C shell over the C++ core: exceptions become status codes,
// results travel through opaque handles or caller-provided storage.

namespace {

thread_local std::string g_last_error;

int fail(const char* what) {
  g_last_error = what ? what : "unknown error";
  return CONTEXTSIM_EINVAL;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return fail(e.what());
  } catch (...) {
    return fail("unknown error");
  }
}

using contextsim::protocol::CorrelationEstimate;

void fill_estimate(const CorrelationEstimate& src, std::uint64_t cobits,
                   contextsim_estimate* dst) {
  dst->mean = src.mean;
  dst->std_error = src.std_error;
  dst->analytic = src.analytic.value_or(0.0);
  dst->has_analytic = src.analytic.has_value() ? 1 : 0;
  dst->n = src.n;
  dst->discarded = src.discarded;
  dst->cobits_total = cobits;
  dst->bits_total = 0;
}

}  // namespace

struct contextsim_table {
  std::vector<contextsim::protocol::TableRow> rows;
};

struct contextsim_facets {
  std::size_t dim = 0;
  std::vector<contextsim::polytope::Facet> facets;
};

extern "C" {

const char* contextsim_version(void) { return "1.0.0"; }

const char* contextsim_last_error(void) { return g_last_error.c_str(); }

int contextsim_band_prob_plus(double alpha, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::band::prob_plus(contextsim::band::Angle(alpha));
    return CONTEXTSIM_OK;
  });
}

int contextsim_band_single_expectation(double alpha, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::band::single_expectation(contextsim::band::Angle(alpha));
    return CONTEXTSIM_OK;
  });
}

int contextsim_band_pair_expectation(double alpha, double beta, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::band::pair_expectation(contextsim::band::Angle(alpha),
                                              contextsim::band::Angle(beta));
    return CONTEXTSIM_OK;
  });
}

int contextsim_band_adaptive_expectation(double theta, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::band::adaptive_expectation(contextsim::band::Angle(theta));
    return CONTEXTSIM_OK;
  });
}

int contextsim_band_uniform_expectation(double theta, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::band::uniform_orientation_expectation(contextsim::band::Angle(theta));
    return CONTEXTSIM_OK;
  });
}

int contextsim_peres_correlation(double theta, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    *out = contextsim::peres::correlation_analytic(theta);
    return CONTEXTSIM_OK;
  });
}

int contextsim_table_create(const double* x, size_t count, contextsim_table** out) {
  if (!out) return fail("out must not be NULL");
  if (count > 0 && !x) return fail("x must not be NULL when count > 0");
  return guarded([&]() -> int {
    auto rows = contextsim::protocol::build_table({x, count});
    *out = new contextsim_table{std::move(rows)};
    return CONTEXTSIM_OK;
  });
}

int contextsim_table_create_builtin(contextsim_table** out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    const auto builtin = contextsim::protocol::builtin_breaking_points();
    std::vector<double> xs;
    std::vector<std::string> texts;
    xs.reserve(builtin.size());
    texts.reserve(builtin.size());
    for (const auto& b : builtin) {
      xs.push_back(b.value);
      texts.push_back(b.text);
    }
    auto rows = contextsim::protocol::build_table(xs, texts);
    *out = new contextsim_table{std::move(rows)};
    return CONTEXTSIM_OK;
  });
}

void contextsim_table_free(contextsim_table* table) { delete table; }

size_t contextsim_table_size(const contextsim_table* table) {
  return table ? table->rows.size() : 0;
}

int contextsim_table_get_row(const contextsim_table* table, size_t index,
                             contextsim_table_row* out) {
  if (!table) return fail("table must not be NULL");
  if (!out) return fail("out must not be NULL");
  if (index >= table->rows.size()) return fail("row index out of range");
  const auto& row = table->rows[index];
  out->x = row.x;
  for (int i = 0; i < 4; ++i) {
    out->outcomes[i] = row.outcomes[i];
    out->na_products[i] = row.na_products[i];
    out->ad_products[i] = row.ad_products[i];
  }
  out->na_chsh = row.na_chsh;
  out->ad_chsh = row.ad_chsh;
  return CONTEXTSIM_OK;
}

int contextsim_table_check_reference(const contextsim_table* table) {
  if (!table) return fail("table must not be NULL");
  const auto check = contextsim::protocol::check_against_reference(table->rows);
  if (check.ok) return CONTEXTSIM_OK;
  g_last_error = check.detail;
  return CONTEXTSIM_EMISMATCH;
}

size_t contextsim_builtin_x_count(void) {
  return contextsim::protocol::builtin_breaking_points().size();
}

int contextsim_builtin_x(size_t index, double* value, const char** text) {
  const auto builtin = contextsim::protocol::builtin_breaking_points();
  if (index >= builtin.size()) return fail("builtin index out of range");
  if (value) *value = builtin[index].value;
  if (text) *text = builtin[index].text;
  return CONTEXTSIM_OK;
}

int contextsim_chsh_estimate(int protocol, const double settings[4], uint64_t trials,
                             uint64_t seed, unsigned workers, contextsim_estimate* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    contextsim::protocol::ProtocolKind kind;
    switch (protocol) {
      case CONTEXTSIM_PROTOCOL_NONADAPTIVE:
        kind = contextsim::protocol::ProtocolKind::nonadaptive;
        break;
      case CONTEXTSIM_PROTOCOL_ADAPTIVE:
        kind = contextsim::protocol::ProtocolKind::adaptive;
        break;
      case CONTEXTSIM_PROTOCOL_ADAPTIVE_FRESH:
        kind = contextsim::protocol::ProtocolKind::adaptive_fresh_shares;
        break;
      default:
        return fail("unknown protocol");
    }
    auto quad = contextsim::protocol::SettingsQuad::canonical();
    if (settings) {
      quad = contextsim::protocol::SettingsQuad{
          contextsim::band::Angle(settings[0]), contextsim::band::Angle(settings[1]),
          contextsim::band::Angle(settings[2]), contextsim::band::Angle(settings[3])};
    }
    contextsim::protocol::EstimateOptions options;
    options.trials = trials;
    options.seed = seed;
    options.workers = workers;
    const auto result = contextsim::protocol::estimate_chsh(kind, quad, options);
    fill_estimate(result.estimate, result.ledger.cobits_total, out);
    return CONTEXTSIM_OK;
  });
}

int contextsim_curve_estimate(int model, const double* thetas, size_t count,
                              uint64_t trials, uint64_t seed, unsigned workers,
                              contextsim_estimate* out_points) {
  if (count > 0 && (!thetas || !out_points))
    return fail("thetas and out_points must not be NULL when count > 0");
  return guarded([&]() -> int {
    contextsim::protocol::CurveModel m;
    switch (model) {
      case CONTEXTSIM_MODEL_BAND_ADAPTIVE:
        m = contextsim::protocol::CurveModel::band_adaptive;
        break;
      case CONTEXTSIM_MODEL_BAND_UNIFORM:
        m = contextsim::protocol::CurveModel::band_uniform;
        break;
      case CONTEXTSIM_MODEL_PERES:
        m = contextsim::protocol::CurveModel::peres;
        break;
      case CONTEXTSIM_MODEL_URN:
        m = contextsim::protocol::CurveModel::urn;
        break;
      default:
        return fail("unknown curve model");
    }
    contextsim::protocol::EstimateOptions options;
    options.trials = trials;
    options.seed = seed;
    options.workers = workers;
    const auto points = contextsim::protocol::estimate_curve(m, {thetas, count}, options);
    const std::uint64_t cobits_per_trial = (m == contextsim::protocol::CurveModel::band_adaptive) ? 1 : 0;
    for (size_t i = 0; i < points.size(); ++i)
      fill_estimate(points[i], cobits_per_trial * points[i].n, &out_points[i]);
    return CONTEXTSIM_OK;
  });
}

int contextsim_facets_enumerate(int coords, contextsim_facets** out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    contextsim::polytope::VertexSet vertices;
    switch (coords) {
      case CONTEXTSIM_COORDS_RAW:
        vertices = contextsim::polytope::raw_vertices();
        break;
      case CONTEXTSIM_COORDS_PRODUCT:
        vertices = contextsim::polytope::product_vertices();
        break;
      default:
        return fail("unknown coordinate system");
    }
    auto facets = contextsim::polytope::enumerate_facets(vertices);
    *out = new contextsim_facets{vertices.dim, std::move(facets)};
    return CONTEXTSIM_OK;
  });
}

void contextsim_facets_free(contextsim_facets* facets) { delete facets; }

size_t contextsim_facets_size(const contextsim_facets* facets) {
  return facets ? facets->facets.size() : 0;
}

size_t contextsim_facets_dim(const contextsim_facets* facets) {
  return facets ? facets->dim : 0;
}

int contextsim_facets_get(const contextsim_facets* facets, size_t index, long long* coeffs,
                          long long* rhs) {
  if (!facets) return fail("facets must not be NULL");
  if (index >= facets->facets.size()) return fail("facet index out of range");
  if (!coeffs || !rhs) return fail("coeffs and rhs must not be NULL");
  const auto& f = facets->facets[index];
  for (std::size_t j = 0; j < f.coeffs.size(); ++j) coeffs[j] = f.coeffs[j];
  *rhs = f.rhs;
  return CONTEXTSIM_OK;
}

int contextsim_facets_line(const contextsim_facets* facets, size_t index, char* buf,
                           size_t buflen) {
  if (!facets) return fail("facets must not be NULL");
  if (index >= facets->facets.size()) return fail("facet index out of range");
  if (!buf) return fail("buf must not be NULL");
  const std::string line = contextsim::polytope::facet_line(facets->facets[index]);
  if (line.size() + 1 > buflen) return fail("buffer too small for facet line");
  std::memcpy(buf, line.c_str(), line.size() + 1);
  return CONTEXTSIM_OK;
}

int contextsim_squeeze_curve(double semi_horizontal, double semi_vertical,
                             const double* fractions, size_t count, double* out) {
  if (count > 0 && (!fractions || !out))
    return fail("fractions and out must not be NULL when count > 0");
  return guarded([&]() -> int {
    const contextsim::plasticity::EllipseShape shape(semi_horizontal, semi_vertical);
    const auto values = contextsim::plasticity::squeezed_adaptive_curve(
        shape, {fractions, count});
    for (size_t i = 0; i < values.size(); ++i) out[i] = values[i];
    return CONTEXTSIM_OK;
  });
}

int contextsim_squeeze_pair(double semi_horizontal, double semi_vertical, double t_alpha,
                            double t_beta, double* out) {
  if (!out) return fail("out must not be NULL");
  return guarded([&]() -> int {
    const contextsim::plasticity::EllipseShape shape(semi_horizontal, semi_vertical);
    *out = contextsim::plasticity::squeezed_pair_expectation(shape, t_alpha, t_beta);
    return CONTEXTSIM_OK;
  });
}

}  // extern "C"
