#pragma once

// The thirteen intervals [h, h'] of consecutive known Hadamard orders where
// 4 <= d <= h' - h - 2 and 6 d^3 > h, with the construction used for each.

#include "maxdet/border_search.hpp"
#include "maxdet/constructions.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxdet {

struct Table1Row {
  std::uint64_t h;
  std::uint64_t h_next;
  unsigned d_lo;
  unsigned d_hi;
  std::uint64_t p;
  Recipe::Base method;
};

inline constexpr std::array<Table1Row, 13> table1_rows = {{
    {664, 672, 5, 6, 331, Recipe::Base::paley1},
    {712, 720, 5, 6, 709, Recipe::Base::conference},
    {888, 896, 6, 6, 443, Recipe::Base::paley1},
    {1000, 1008, 6, 6, 499, Recipe::Base::paley1},
    {1128, 1136, 6, 6, 563, Recipe::Base::paley1},
    {1240, 1248, 6, 6, 619, Recipe::Base::paley1},
    {2868, 2880, 8, 10, 1433, Recipe::Base::paley2},
    {5744, 5760, 10, 14, 5749, Recipe::Base::conference},
    {10048, 10064, 12, 14, 5023, Recipe::Base::paley1},
    {23980, 24000, 16, 18, 23993, Recipe::Base::conference},
    {47964, 47988, 20, 22, 47963, Recipe::Base::paley1},
    {53732, 53760, 21, 26, 53731, Recipe::Base::paley1},
    {60456, 60480, 22, 22, 60457, Recipe::Base::conference},
}};

/// Rows with h above this are only run on request.
inline constexpr std::uint64_t table1_fast_ceiling = 6000;

inline const char* method_name(Recipe::Base b) {
  switch (b) {
  case Recipe::Base::identity: return "h1";
  case Recipe::Base::paley1: return "Paley1";
  case Recipe::Base::paley2: return "Paley2";
  case Recipe::Base::conference: return "conference";
  }
  return "?";
}

/// d in [4, h' - h - 2] with 6 d^3 > h.
inline std::vector<unsigned> exceptional_d(std::uint64_t h, std::uint64_t h_next) {
  std::vector<unsigned> out;
  if (h_next < h + 6)
    return out;
  for (std::uint64_t d = 4; d + 2 <= h_next - h; ++d)
    if (6 * d * d * d > h)
      out.push_back(static_cast<unsigned>(d));
  return out;
}

/// Paley recipes are doubled until they reach order h; conference cores are used as is.
inline Recipe table1_recipe(const Table1Row& row) {
  Recipe r{row.method, row.p, 0};
  if (row.method != Recipe::Base::conference)
    while (r.order() < row.h)
      ++r.doublings;
  if (row.method != Recipe::Base::conference && r.order() != row.h)
    throw construction_error("row " + std::to_string(row.h) + ": " + r.str() + " has order " +
                             std::to_string(r.order()));
  return r;
}

/// 0.07 * 0.352^d.
inline double uniform_target(unsigned d) { return 0.07 * std::pow(0.352, d); }

/// (2/(pi e))^{d/2}.
inline double strong_target(unsigned d) { return std::pow(2 / (std::numbers::pi * std::exp(1.0)), d / 2.0); }

struct Table1Case {
  std::uint64_t n = 0;
  unsigned d = 0;           // n - h
  std::size_t width = 0;    // n - core order
  TrialResult best;
  bool uniform_ok = false;  // ratio > 0.07 * 0.352^d
  bool strong_ok = false;   // ratio > (2/(pi e))^{d/2}
  bool plain_ok = false;    // ratio > 0.352^d
};

inline Table1Case run_table1_case(const QuasiOrthogonal& core, const Table1Row& row, unsigned d,
                                  const SearchConfig& cfg) {
  Table1Case c;
  c.n = row.h + d;
  c.d = d;
  if (c.n < core.order())
    throw construction_error("core order exceeds n = " + std::to_string(c.n));
  c.width = c.n - core.order();
  c.best = search(core, c.width, cfg);
  const double l = c.best.ratio.sign == 0 ? -INFINITY : c.best.ratio.log_abs;
  c.uniform_ok = l > std::log(uniform_target(d));
  c.strong_ok = l > std::log(strong_target(d));
  c.plain_ok = l > d * std::log(0.352);
  return c;
}

}  // namespace maxdet
