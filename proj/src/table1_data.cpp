#include "contextsim/protocol.hpp"

#include <array>

namespace contextsim::protocol {

namespace {

// The published 20-run reference table, frozen as data. Each row carries
// the breaking point exactly as printed, the four raw outcomes (A, A', B,
// B'), the non-adaptive products and CHSH row, and the adaptive products
// and CHSH row. build_table() must reproduce these from the mechanics
// alone; the tests treat any drift as a regression.
struct ReferenceRow {
  const char* x_text;
  double x;
  const char* outcomes;  // A A' B B'
  const char* na;        // AB AB' A'B A'B'
  int na_chsh;
  const char* ad;
  int ad_chsh;
};

constexpr std::array<ReferenceRow, 20> kReferenceRows{{
    {"-0.514823", -0.514823, "++++", "++++", 2, "+++-", 4},
    {"-0.832267", -0.832267, "++++", "++++", 2, "++++", 2},
    {"0.920526", 0.920526, "+---", "--++", -2, "----", -2},
    {"0.013375", 0.013375, "+-++", "++--", 2, "+++-", 4},
    {"0.444354", 0.444354, "+-++", "++--", 2, "+++-", 4},
    {"0.486249", 0.486249, "+-++", "++--", 2, "+++-", 4},
    {"-0.760656", -0.760656, "++++", "++++", 2, "++++", 2},
    {"0.425472", 0.425472, "+-++", "++--", 2, "+++-", 4},
    {"0.973582", 0.973582, "+---", "--++", -2, "----", -2},
    {"0.626781", 0.626781, "+-++", "++--", 2, "+++-", 4},
    {"-0.35275", -0.35275, "++++", "++++", 2, "+++-", 4},
    {"0.988427", 0.988427, "+---", "--++", -2, "----", -2},
    {"-0.762208", -0.762208, "++++", "++++", 2, "++++", 2},
    {"0.735898", 0.735898, "+---", "--++", -2, "----", -2},
    {"0.0588852", 0.0588852, "+-++", "++--", 2, "+++-", 4},
    {"-0.498925", -0.498925, "++++", "++++", 2, "+++-", 4},
    {"-0.53331", -0.53331, "++++", "++++", 2, "+++-", 4},
    {"-0.822113", -0.822113, "++++", "++++", 2, "++++", 2},
    {"0.0398871", 0.0398871, "+-++", "++--", 2, "+++-", 4},
    {"-0.226003", -0.226003, "++++", "++++", 2, "+++-", 4},
}};

constexpr std::array<BuiltinX, 20> kBuiltinX = [] {
  std::array<BuiltinX, 20> xs{};
  for (std::size_t i = 0; i < 20; ++i) xs[i] = {kReferenceRows[i].x_text, kReferenceRows[i].x};
  return xs;
}();

std::array<int, 4> decode_signs(const char* s) {
  std::array<int, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) out[i] = s[i] == '+' ? +1 : -1;
  return out;
}

}  // namespace

std::span<const BuiltinX> builtin_breaking_points() { return kBuiltinX; }

const std::vector<TableRow>& reference_table() {
  static const std::vector<TableRow> rows = [] {
    std::vector<TableRow> out;
    out.reserve(kReferenceRows.size());
    for (const auto& r : kReferenceRows) {
      TableRow row;
      row.x_text = r.x_text;
      row.x = r.x;
      row.outcomes = decode_signs(r.outcomes);
      row.na_products = decode_signs(r.na);
      row.na_chsh = r.na_chsh;
      row.ad_products = decode_signs(r.ad);
      row.ad_chsh = r.ad_chsh;
      out.push_back(std::move(row));
    }
    return out;
  }();
  return rows;
}

}  // namespace contextsim::protocol
