// contextsim command-line front end. Talks to the model exclusively through
// the C API in contextsim/contextsim.h; everything here is argument
// handling, file I/O, and CSV/JSON formatting.
//
// Exit codes: 0 success, 2 usage or validation error, 3 --check mismatch.

#include "contextsim/contextsim.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_radians(double value, bool radians) {
  return radians ? value : (value / 180.0) * std::numbers::pi;
}

[[noreturn]] void die(const std::string& message) {
  std::cerr << "contextsim: " << message << "\n";
  std::exit(kExitUsage);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) die("cannot open output file: " + path);
  out << content;
  if (!out) die("failed to write output file: " + path);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CONTEXTSIM_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0')
      die(std::string("CONTEXTSIM_SEED is not a valid seed: ") + env);
    return v;
  }
  return 0;
}

void check_status(int status) {
  if (status != CONTEXTSIM_OK) die(contextsim_last_error());
}

char sign_char(int v) { return v > 0 ? '+' : '-'; }

// ---- table1 ----------------------------------------------------------------

struct ParsedX {
  std::vector<double> values;
  std::vector<std::string> texts;
};

ParsedX read_x_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) die("cannot open x file: " + path);
  ParsedX parsed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;  // blank line
    const auto last = line.find_last_not_of(" \t\r\n");
    const std::string token = line.substr(first, last - first + 1);
    char* end = nullptr;
    errno = 0;
    const double x = std::strtod(token.c_str(), &end);
    if (errno != 0 || end != token.c_str() + token.size())
      die(path + ":" + std::to_string(lineno) + ": not a number: '" + token + "'");
    if (!(x >= -1.0 && x <= 1.0))
      die(path + ":" + std::to_string(lineno) + ": breaking point " + token +
          " lies outside [-1, 1]");
    parsed.values.push_back(x);
    parsed.texts.push_back(token);
  }
  return parsed;
}

int run_table1(const std::string& x_file, bool builtin, bool check,
               const std::string& out_path, const std::string& format) {
  ParsedX parsed;
  if (builtin) {
    const size_t n = contextsim_builtin_x_count();
    for (size_t i = 0; i < n; ++i) {
      double value = 0.0;
      const char* text = nullptr;
      check_status(contextsim_builtin_x(i, &value, &text));
      parsed.values.push_back(value);
      parsed.texts.push_back(text);
    }
  } else {
    parsed = read_x_file(x_file);
  }

  contextsim_table* table = nullptr;
  check_status(contextsim_table_create(parsed.values.data(), parsed.values.size(), &table));

  std::string content;
  if (format == "csv") {
    content =
        "x,A,Ap,B,Bp,na_AB,na_ABp,na_ApB,na_ApBp,na_chsh,ad_AB,ad_ABp,ad_ApB,ad_ApBp,ad_chsh\n";
    for (size_t i = 0; i < contextsim_table_size(table); ++i) {
      contextsim_table_row row;
      check_status(contextsim_table_get_row(table, i, &row));
      content += parsed.texts[i];
      for (int k = 0; k < 4; ++k) content += std::string(",") + sign_char(row.outcomes[k]);
      for (int k = 0; k < 4; ++k) content += std::string(",") + sign_char(row.na_products[k]);
      content += "," + std::to_string(row.na_chsh);
      for (int k = 0; k < 4; ++k) content += std::string(",") + sign_char(row.ad_products[k]);
      content += "," + std::to_string(row.ad_chsh);
      content += '\n';
    }
  } else {
    json doc;
    doc["command"] = "table1";
    doc["source"] = builtin ? std::string("builtin") : x_file;
    json rows = json::array();
    for (size_t i = 0; i < contextsim_table_size(table); ++i) {
      contextsim_table_row row;
      check_status(contextsim_table_get_row(table, i, &row));
      json r;
      r["x_text"] = parsed.texts[i];
      r["x"] = row.x;
      r["A"] = row.outcomes[0];
      r["Ap"] = row.outcomes[1];
      r["B"] = row.outcomes[2];
      r["Bp"] = row.outcomes[3];
      r["na_AB"] = row.na_products[0];
      r["na_ABp"] = row.na_products[1];
      r["na_ApB"] = row.na_products[2];
      r["na_ApBp"] = row.na_products[3];
      r["na_chsh"] = row.na_chsh;
      r["ad_AB"] = row.ad_products[0];
      r["ad_ABp"] = row.ad_products[1];
      r["ad_ApB"] = row.ad_products[2];
      r["ad_ApBp"] = row.ad_products[3];
      r["ad_chsh"] = row.ad_chsh;
      rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    content = doc.dump(2) + "\n";
  }

  int exit_code = kExitOk;
  if (check) {
    const int status = contextsim_table_check_reference(table);
    if (status == CONTEXTSIM_EMISMATCH) {
      std::cerr << "contextsim: table check failed: " << contextsim_last_error() << "\n";
      exit_code = kExitMismatch;
    } else if (status != CONTEXTSIM_OK) {
      contextsim_table_free(table);
      die(contextsim_last_error());
    }
  }
  contextsim_table_free(table);
  write_output(out_path, content);
  return exit_code;
}

// ---- chsh ------------------------------------------------------------------

std::vector<double> parse_settings(const std::string& text, bool radians) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &end);
    if (errno != 0 || token.empty() || end != token.c_str() + token.size())
      die("bad --settings component: '" + token + "'");
    values.push_back(to_radians(v, radians));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (values.size() != 4) die("--settings needs exactly 4 comma-separated angles");
  return values;
}

json estimate_json(const contextsim_estimate& e) {
  json j;
  j["mean"] = e.mean;
  j["stderr"] = e.std_error;
  j["n"] = e.n;
  if (e.has_analytic)
    j["analytic"] = e.analytic;
  else
    j["analytic"] = nullptr;
  return j;
}

int run_chsh(const std::string& protocol, const std::string& settings_text, bool radians,
             std::uint64_t trials, std::uint64_t seed, unsigned workers,
             const std::string& out_path, const std::string& format) {
  int kind = -1;
  if (protocol == "nonadaptive")
    kind = CONTEXTSIM_PROTOCOL_NONADAPTIVE;
  else if (protocol == "adaptive")
    kind = CONTEXTSIM_PROTOCOL_ADAPTIVE;
  else if (protocol == "adaptive-fresh")
    kind = CONTEXTSIM_PROTOCOL_ADAPTIVE_FRESH;
  else
    die("unknown protocol '" + protocol + "' (expected nonadaptive, adaptive, adaptive-fresh)");

  std::vector<double> settings;
  const double* settings_ptr = nullptr;
  if (!settings_text.empty()) {
    settings = parse_settings(settings_text, radians);
    settings_ptr = settings.data();
  }

  contextsim_estimate est;
  check_status(contextsim_chsh_estimate(kind, settings_ptr, trials, seed, workers, &est));

  std::string content;
  if (format == "csv") {
    content = "protocol,mean,stderr,n,analytic,cobits_total,bits_total\n";
    content += protocol + "," + fmt(est.mean) + "," + fmt(est.std_error) + "," +
               std::to_string(est.n) + "," + fmt(est.analytic) + "," +
               std::to_string(est.cobits_total) + "," + std::to_string(est.bits_total) + "\n";
  } else {
    json doc = estimate_json(est);
    doc["command"] = "chsh";
    doc["protocol"] = protocol;
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["workers"] = workers;
    doc["cobits_total"] = est.cobits_total;
    doc["bits_total"] = est.bits_total;
    content = doc.dump(2) + "\n";
  }
  write_output(out_path, content);
  return kExitOk;
}

// ---- curve -----------------------------------------------------------------

int run_curve(const std::string& model, double theta_min, double theta_max,
              std::size_t points, bool radians, std::uint64_t trials, std::uint64_t seed,
              unsigned workers, const std::string& out_path, const std::string& format) {
  int model_id = -1;
  if (model == "band-adaptive")
    model_id = CONTEXTSIM_MODEL_BAND_ADAPTIVE;
  else if (model == "band-uniform")
    model_id = CONTEXTSIM_MODEL_BAND_UNIFORM;
  else if (model == "peres")
    model_id = CONTEXTSIM_MODEL_PERES;
  else if (model == "urn")
    model_id = CONTEXTSIM_MODEL_URN;
  else
    die("unknown model '" + model +
        "' (expected band-adaptive, band-uniform, peres, urn)");

  if (points == 0) die("--points must be at least 1");
  if (points > 1 && !(theta_max > theta_min))
    die("--theta-max must exceed --theta-min when --points > 1");

  std::vector<double> grid(points), grid_rad(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = points == 1 ? theta_min
                          : theta_min + (theta_max - theta_min) * static_cast<double>(i) /
                                            static_cast<double>(points - 1);
    grid_rad[i] = to_radians(grid[i], radians);
  }

  std::vector<contextsim_estimate> est(points);
  check_status(contextsim_curve_estimate(model_id, grid_rad.data(), points, trials, seed,
                                         workers, est.data()));

  std::string content;
  if (format == "csv") {
    content = "theta,mean,stderr,n,analytic\n";
    for (std::size_t i = 0; i < points; ++i)
      content += fmt(grid[i]) + "," + fmt(est[i].mean) + "," + fmt(est[i].std_error) + "," +
                 std::to_string(est[i].n) + "," + fmt(est[i].analytic) + "\n";
  } else {
    json doc;
    doc["command"] = "curve";
    doc["model"] = model;
    doc["unit"] = radians ? "radians" : "degrees";
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["workers"] = workers;
    json pts = json::array();
    for (std::size_t i = 0; i < points; ++i) {
      json p = estimate_json(est[i]);
      p["theta"] = grid[i];
      pts.push_back(std::move(p));
    }
    doc["points"] = std::move(pts);
    content = doc.dump(2) + "\n";
  }
  write_output(out_path, content);
  return kExitOk;
}

// ---- facets ----------------------------------------------------------------

int run_facets(const std::string& coords, const std::string& out_path,
               const std::string& format) {
  int coords_id = -1;
  if (coords == "raw")
    coords_id = CONTEXTSIM_COORDS_RAW;
  else if (coords == "product")
    coords_id = CONTEXTSIM_COORDS_PRODUCT;
  else
    die("unknown coordinate system '" + coords + "' (expected raw or product)");

  contextsim_facets* facets = nullptr;
  check_status(contextsim_facets_enumerate(coords_id, &facets));

  const size_t count = contextsim_facets_size(facets);
  const size_t dim = contextsim_facets_dim(facets);
  std::string content;
  if (format == "csv") {
    char line[256];
    for (size_t i = 0; i < count; ++i) {
      check_status(contextsim_facets_line(facets, i, line, sizeof line));
      content += line;
      content += '\n';
    }
  } else {
    json doc;
    doc["command"] = "facets";
    doc["coords"] = coords;
    doc["dimension"] = dim;
    doc["count"] = count;
    json list = json::array();
    std::vector<long long> coeffs(dim);
    for (size_t i = 0; i < count; ++i) {
      long long rhs = 0;
      check_status(contextsim_facets_get(facets, i, coeffs.data(), &rhs));
      json f;
      f["coeffs"] = coeffs;
      f["rhs"] = rhs;
      list.push_back(std::move(f));
    }
    doc["facets"] = std::move(list);
    content = doc.dump(2) + "\n";
  }
  contextsim_facets_free(facets);
  write_output(out_path, content);
  return kExitOk;
}

// ---- squeeze -----------------------------------------------------------------

int run_squeeze(double minor, double major, double t_min, double t_max, std::size_t points,
                const std::string& out_path, const std::string& format) {
  if (points == 0) die("--points must be at least 1");
  if (points > 1 && !(t_max > t_min)) die("--t-max must exceed --t-min when --points > 1");

  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = points == 1 ? t_min
                          : t_min + (t_max - t_min) * static_cast<double>(i) /
                                        static_cast<double>(points - 1);

  std::vector<double> values(points);
  check_status(contextsim_squeeze_curve(minor, major, grid.data(), points, values.data()));

  std::string content;
  if (format == "csv") {
    content = "a,b,theta,mean,stderr,n,analytic\n";
    for (std::size_t i = 0; i < points; ++i)
      content += fmt(minor) + "," + fmt(major) + "," + fmt(grid[i]) + "," + fmt(values[i]) +
                 ",0,0," + fmt(values[i]) + "\n";
  } else {
    json doc;
    doc["command"] = "squeeze";
    doc["a"] = minor;
    doc["b"] = major;
    json pts = json::array();
    for (std::size_t i = 0; i < points; ++i) {
      json p;
      p["theta"] = grid[i];
      p["mean"] = values[i];
      p["stderr"] = 0;
      p["n"] = 0;
      p["analytic"] = values[i];
      pts.push_back(std::move(p));
    }
    doc["points"] = std::move(pts);
    content = doc.dump(2) + "\n";
  }
  write_output(out_path, content);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical EPR share models and context-communication protocols"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "csv";
  bool radians = false;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t trials = 100000;
  unsigned workers = 1;

  auto add_common = [&](CLI::App* cmd, bool with_rng) {
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    if (with_rng) {
      cmd->add_option("--trials", trials, "Monte Carlo trials per estimate");
      cmd->add_option("--seed", seed_flag, "RNG seed (default: $CONTEXTSIM_SEED or 0)");
      cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    }
  };

  // table1
  auto* table1 = app.add_subcommand("table1", "deterministic valuation table");
  std::string x_file;
  bool builtin_rows = false;
  bool check = false;
  table1->add_option("--x-file", x_file, "file with one breaking point per line");
  table1->add_flag("--builtin-paper-rows", builtin_rows, "use the built-in 20-row data set");
  table1->add_flag("--check", check, "verify signs and CHSH against the reference rows");
  add_common(table1, false);

  // chsh
  auto* chsh = app.add_subcommand("chsh", "CHSH estimate for one protocol");
  std::string protocol;
  std::string settings_text;
  chsh->add_option("--protocol", protocol, "nonadaptive | adaptive | adaptive-fresh")
      ->required();
  chsh->add_option("--settings", settings_text,
                   "alpha,alpha',beta,beta' (default: 0,90,45,-45 degrees)");
  chsh->add_flag("--radians", radians, "interpret angles as radians");
  add_common(chsh, true);

  // curve
  auto* curve = app.add_subcommand("curve", "correlation vs relative angle");
  std::string model;
  double theta_min = 0.0, theta_max = 180.0;
  std::size_t points = 19;
  curve->add_option("--model", model, "band-adaptive | band-uniform | peres | urn")
      ->required();
  curve->add_option("--theta-min", theta_min, "grid start (default 0)");
  curve->add_option("--theta-max", theta_max, "grid end (default 180)");
  curve->add_option("--points", points, "grid size (default 19)");
  curve->add_flag("--radians", radians, "interpret angles as radians");
  add_common(curve, true);

  // facets
  auto* facets = app.add_subcommand("facets", "correlation polytope facets");
  std::string coords;
  facets->add_option("--coords", coords, "raw | product")->required();
  add_common(facets, false);

  // squeeze
  auto* squeeze = app.add_subcommand("squeeze", "squeezed-band adaptive correlation");
  double minor = 0.0, major = 0.0;
  double t_min = 0.0, t_max = 0.5;
  std::size_t t_points = 51;
  squeeze->add_option("--minor", minor, "horizontal semi-axis a")->required();
  squeeze->add_option("--major", major, "vertical semi-axis b")->required();
  squeeze->add_option("--t-min", t_min, "perimeter fraction grid start (default 0)");
  squeeze->add_option("--t-max", t_max, "perimeter fraction grid end (default 0.5)");
  squeeze->add_option("--points", t_points, "grid size (default 51)");
  add_common(squeeze, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::uint64_t seed = resolve_seed(seed_flag);

  if (table1->parsed()) {
    if (builtin_rows == !x_file.empty())
      die("table1 needs exactly one of --x-file or --builtin-paper-rows");
    return run_table1(x_file, builtin_rows, check, out_path, format);
  }
  if (chsh->parsed())
    return run_chsh(protocol, settings_text, radians, trials, seed, workers, out_path,
                    format);
  if (curve->parsed())
    return run_curve(model, theta_min, theta_max, points, radians, trials, seed, workers,
                     out_path, format);
  if (facets->parsed()) return run_facets(coords, out_path, format);
  if (squeeze->parsed())
    return run_squeeze(minor, major, t_min, t_max, t_points, out_path, format);
  die("no subcommand given");
}
