#pragma once

// Closed-form lower bounds on D(n), D(n)/h^{h/2} and D(n)/h^{n/2}, and a
// brute-force maximal determinant oracle for n <= 6.

#include "maxdet/exact.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace maxdet {

inline const double c_const = std::sqrt(2.0 / std::numbers::pi);

/// g(h) = 1 + h binom(h, h/2) / 2^h, exactly.
inline mpq_class g_of_h(std::uint64_t h) {
  if (h < 2 || h % 2 != 0)
    throw std::invalid_argument("g_of_h: h must be even and >= 2, got " + std::to_string(h));
  mpz_class binom, pow2;
  mpz_bin_uiui(binom.get_mpz_t(), h, h / 2);
  mpz_ui_pow_ui(pow2.get_mpz_t(), 2, h);
  mpq_class g(mpz_class(static_cast<unsigned long>(h)) * binom, pow2);
  g.canonicalize();
  return g + 1;
}

/// g(h) in double precision via lgamma, usable for large h.
inline double g_of_h_double(double h) {
  const double lb = std::lgamma(h + 1) - 2 * std::lgamma(h / 2 + 1) - h * std::log(2.0);
  return 1.0 + h * std::exp(lb);
}

/// h0(d) = (e (pi/2)^{d/2} (d-1)! + d)^2.
inline double h0(unsigned d) {
  if (d == 0)
    throw std::invalid_argument("h0: d must be >= 1");
  const double f = std::exp(1.0) * std::pow(std::numbers::pi / 2, d / 2.0) * std::tgamma(static_cast<double>(d));
  return (f + d) * (f + d);
}

struct BoundContext {
  std::uint64_t n = 0, h = 0, d = 0;
  double epsilon = 0.0;  // sqrt(4 d ln h / h), 0 when d = 0
  double delta = 0.0;    // 6 d^3 / h
  double c = c_const;
  std::optional<double> g_h;
  std::optional<double> h0_d;

  static BoundContext make(std::uint64_t n, std::uint64_t h, std::uint64_t d) {
    if (n != h + d)
      throw std::invalid_argument("bound context: n = " + std::to_string(n) + " is not h + d = " +
                                  std::to_string(h) + " + " + std::to_string(d));
    if (h == 0)
      throw std::invalid_argument("bound context: h must be >= 1");
    BoundContext ctx;
    ctx.n = n;
    ctx.h = h;
    ctx.d = d;
    const double hd = static_cast<double>(h), dd = static_cast<double>(d);
    if (d >= 1 && h >= 3)
      ctx.epsilon = std::sqrt(4 * dd * std::log(hd) / hd);
    ctx.delta = 6 * dd * dd * dd / hd;
    if (h >= 2 && h % 2 == 0)
      ctx.g_h = g_of_h_double(hd);
    if (d >= 1)
      ctx.h0_d = h0(static_cast<unsigned>(d));
    return ctx;
  }
};

enum class BoundTarget { D_over_h_half_h, D_over_h_half_n, Dbar };

inline const char* to_string(BoundTarget t) {
  switch (t) {
  case BoundTarget::D_over_h_half_h: return "D(n)/h^(h/2)";
  case BoundTarget::D_over_h_half_n: return "D(n)/h^(n/2)";
  case BoundTarget::Dbar: return "Dbar(n)";
  }
  return "?";
}

struct BoundEntry {
  std::string name;
  bool applicable = false;
  std::string reason;
  std::optional<LogScalar> value;  // set iff applicable
  BoundTarget target = BoundTarget::Dbar;
};

struct BoundReport {
  BoundContext ctx;
  std::vector<BoundEntry> entries;

  const BoundEntry& at(const std::string& name) const {
    for (const auto& e : entries)
      if (e.name == name)
        return e;
    throw std::out_of_range("bound report has no entry " + name);
  }

  /// Largest applicable lower bound on Dbar(n).
  std::optional<LogScalar> best_dbar() const {
    std::optional<LogScalar> best;
    for (const auto& e : entries)
      if (e.applicable && e.target == BoundTarget::Dbar && (!best || *e.value > *best))
        best = e.value;
    return best;
  }
};

/// Every closed-form bound at (n, h, d) with its applicability. Values are on the log scale.
inline BoundReport evaluate_bounds(std::uint64_t n, std::uint64_t h, std::uint64_t d) {
  BoundReport r;
  r.ctx = BoundContext::make(n, h, d);
  const auto& x = r.ctx;
  const double nd = static_cast<double>(n), hd = static_cast<double>(h), dd = static_cast<double>(d);
  const double pi = std::numbers::pi;
  const double l_2pie = std::log(2 / (pi * std::exp(1.0)));

  auto add = [&](std::string name, BoundTarget t, bool ok, std::string reason, double log_value) {
    BoundEntry e{std::move(name), ok, std::move(reason), std::nullopt, t};
    if (ok)
      e.value = LogScalar::from_log(log_value);
    r.entries.push_back(std::move(e));
  };
  auto pos = [](double v) { return v > 0 ? std::log(v) : -INFINITY; };

  add("hadamard", BoundTarget::Dbar, d == 0, d == 0 ? "n is a Hadamard order" : "d > 0", 0.0);

  const bool t1 = d >= 1 && hd >= x.h0_d.value_or(INFINITY);
  const std::string t1_why = d == 0 ? "d = 0" : (t1 ? "h >= h0(d)" : "h < h0(d) = " + std::to_string(*x.h0_d));
  add("large_h", BoundTarget::D_over_h_half_h, t1, t1_why, 0.5 * dd * std::log(2 * nd / pi));

  const bool sd = d >= 1 && d <= 3 && h >= 4;
  const std::string sd_why = sd ? "1 <= d <= 3, h >= 4" : "needs 1 <= d <= 3 and h >= 4";
  add("small_d", BoundTarget::D_over_h_half_h, sd, sd_why, 0.5 * dd * std::log(2 * nd / pi));
  add("small_d_dbar", BoundTarget::Dbar, sd, sd_why, 0.5 * dd * l_2pie);

  add("large_h_dbar", BoundTarget::Dbar, t1, t1_why, 0.5 * dd * l_2pie);

  const bool t2 = h >= 656 && 16 * dd * dd * dd <= hd / std::log(hd);
  const std::string t2_why =
      h < 656 ? "h < 656" : (t2 ? "h >= 656, 16 d^3 <= h / ln h" : "16 d^3 > h / ln h");
  add("moderate_d", BoundTarget::D_over_h_half_n, t2, t2_why, 0.5 * dd * std::log(2 / pi) - 2.31 * dd * x.epsilon);
  add("moderate_d_dbar", BoundTarget::Dbar, t2, t2_why, 0.5 * dd * l_2pie - 2.38 * dd * x.epsilon);

  const bool t3 = d >= 1 && x.delta <= 1;
  const std::string t3_why = d == 0 ? "d = 0" : (t3 ? "delta = 6 d^3 / h <= 1" : "delta = 6 d^3 / h > 1");
  add("cubic_d", BoundTarget::D_over_h_half_n, t3, t3_why, dd * std::log(0.594) + pos(1 - 0.93 * x.delta));
  add("cubic_d_dbar", BoundTarget::Dbar, t3, t3_why, dd * std::log(0.352) + pos(1 - 0.93 * x.delta));

  add("uniform", BoundTarget::Dbar, true, "always", std::log(0.07) + dd * std::log(0.352));
  return r;
}

/// Published upper bounds on the best constants kappa_1..kappa_3 (documentation only).
struct KappaBound {
  unsigned d;
  double value;
  const char* expression;
};

inline std::array<KappaBound, 3> kappa_upper_bounds() {
  return {{{1, 7.0 * 2048.0 / std::pow(3.0, 9), "Dbar(9) = 7*2^11/3^9"},
           {2, 2.0 / std::exp(1.0), "2/e"},
           {3, 5.0 * 65536.0 / std::pow(11.0, 5.5), "Dbar(11) = 5*2^16/11^(11/2)"}}};
}

/// Conjectured reference line for Dbar(n).
inline constexpr double reference_dbar_conjecture = 0.5;

// ---------------------------------------------------------------------------
// Oracle

/// D(n) by exhaustive search over +-1 matrices with first row and column +1.
/// Threads split the search on the leading bits of the free entries.
inline std::int64_t maxdet_oracle(unsigned n, unsigned threads = 1) {
  if (n == 0 || n > 6)
    throw std::invalid_argument("maxdet_oracle: n must be in 1..6, got " + std::to_string(n));
  if (n == 1)
    return 1;
  const unsigned free = (n - 1) * (n - 1);
  const std::uint64_t total = std::uint64_t{1} << free;
  threads = std::max(1U, threads);
  std::atomic<std::uint64_t> next_block{0};
  const std::uint64_t block = std::min<std::uint64_t>(total, 1 << 12);
  std::vector<std::int64_t> best(threads, 0);
  auto work = [&](unsigned t) {
    std::vector<std::int64_t> a(n * n);
    for (std::uint64_t b; (b = next_block.fetch_add(block)) < total;) {
      for (std::uint64_t mask = b; mask < std::min(total, b + block); ++mask) {
        for (unsigned i = 0; i < n; ++i)
          for (unsigned j = 0; j < n; ++j) {
            if (i == 0 || j == 0) {
              a[i * n + j] = 1;
              continue;
            }
            const unsigned bit = (i - 1) * (n - 1) + (j - 1);
            a[i * n + j] = ((mask >> bit) & 1U) ? -1 : 1;
          }
        const std::int64_t det = bareiss_determinant(a, n);
        best[t] = std::max(best[t], det < 0 ? -det : det);
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back(work, t);
    for (auto& th : pool)
      th.join();
  }
  return *std::max_element(best.begin(), best.end());
}

}  // namespace maxdet
