#pragma once

// Numerical checkers for the auxiliary inequalities behind the bounds:
// determinant perturbation bounds, a one-sided tail bound, Hoeffding's tail
// bound, and a grid of scalar inequalities.

#include "maxdet/bounds.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxdet {

enum class CheckStatus { pass, fail, skip };

inline const char* to_string(CheckStatus s) {
  switch (s) {
  case CheckStatus::pass: return "pass";
  case CheckStatus::fail: return "fail";
  case CheckStatus::skip: return "skip";
  }
  return "?";
}

struct CheckCounts {
  std::uint64_t pass = 0, fail = 0, skip = 0;

  void add(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: ++pass; break;
    case CheckStatus::fail: ++fail; break;
    case CheckStatus::skip: ++skip; break;
    }
  }
  void add(bool ok) { add(ok ? CheckStatus::pass : CheckStatus::fail); }
};

/// Named check counts in insertion-independent (sorted) order.
using CheckReport = std::map<std::string, CheckCounts>;

inline bool all_passed(const CheckReport& r) {
  for (const auto& [name, c] : r)
    if (c.fail)
      return false;
  return true;
}

/// Determinant of a d x d row-major matrix by LU with partial pivoting.
inline long double det_float(std::vector<long double> a, std::size_t d) {
  long double det = 1;
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < d; ++i)
      if (std::fabs(a[i * d + k]) > std::fabs(a[p * d + k]))
        p = i;
    if (a[p * d + k] == 0)
      return 0;
    if (p != k) {
      for (std::size_t j = 0; j < d; ++j)
        std::swap(a[k * d + j], a[p * d + j]);
      det = -det;
    }
    det *= a[k * d + k];
    for (std::size_t i = k + 1; i < d; ++i) {
      const long double f = a[i * d + k] / a[k * d + k];
      for (std::size_t j = k + 1; j < d; ++j)
        a[i * d + j] -= f * a[k * d + j];
    }
  }
  return det;
}

enum class PertLemma {
  identity_minus_e,       // A = I - E, |e_ij| <= eps, d eps <= 1: det A >= 1 - d eps
  zero_diagonal,          // also e_ii = 0, (d-1) eps <= 1: det A >= (1 - (d-1) eps)(1 + eps)^{d-1}
  diagonally_dominant,    // A is DD(eps): |det A| >= prod |a_ii| (1 - (d-1)^2 eps^2)
};

/// Checks one determinant lower bound on the matrix A (row-major, d x d).
/// Skips when the lemma's hypotheses fail. `slack` is relative to max(1, |bound|);
/// a negative slack tightens the bound.
inline CheckStatus check_pert_bound(const std::vector<double>& a, std::size_t d, double eps, PertLemma lemma,
                                    double slack = 1e-12) {
  if (a.size() != d * d || d == 0)
    throw std::invalid_argument("check_pert_bound: matrix is not d x d");
  const double tol = 1e-15;
  const double dd = static_cast<double>(d);
  long double bound = 0;
  std::vector<long double> m(a.begin(), a.end());
  switch (lemma) {
  case PertLemma::identity_minus_e:
  case PertLemma::zero_diagonal: {
    const bool zero_diag = lemma == PertLemma::zero_diagonal;
    if (eps < 0 || (zero_diag ? (dd - 1) * eps > 1 : dd * eps > 1))
      return CheckStatus::skip;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        const double e = (i == j ? 1.0 : 0.0) - a[i * d + j];
        if (std::fabs(e) > eps + tol || (zero_diag && i == j && e != 0))
          return CheckStatus::skip;
      }
    bound = zero_diag ? (1 - (dd - 1) * static_cast<long double>(eps)) * std::pow(1 + static_cast<long double>(eps), dd - 1)
                      : 1 - dd * static_cast<long double>(eps);
    break;
  }
  case PertLemma::diagonally_dominant: {
    if (eps < 0)
      return CheckStatus::skip;
    long double diag = 1;
    for (std::size_t i = 0; i < d; ++i) {
      diag *= std::fabs(static_cast<long double>(a[i * d + i]));
      for (std::size_t j = 0; j < d; ++j)
        if (i != j && std::fabs(a[i * d + j]) > eps * std::fabs(a[i * d + i]) + tol)
          return CheckStatus::skip;
    }
    bound = diag * (1 - (dd - 1) * (dd - 1) * static_cast<long double>(eps) * eps);
    const long double det = std::fabs(det_float(m, d));
    return det >= bound - slack * std::max<long double>(1, std::fabs(bound)) ? CheckStatus::pass : CheckStatus::fail;
  }
  }
  const long double det = det_float(m, d);
  return det >= bound - slack * std::max<long double>(1, std::fabs(bound)) ? CheckStatus::pass : CheckStatus::fail;
}

/// Finite distribution on [0, 1]: outcomes with nonnegative weights.
struct FiniteDistribution {
  std::vector<double> values;
  std::vector<double> weights;  // empty: equiprobable

  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }

  double total() const {
    double t = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      t += weight(i);
    return t;
  }

  double mean() const {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      s += weight(i) * values[i];
    return s / total();
  }

  double tail(double lambda) const {
    double s = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] >= lambda)
        s += weight(i);
    return s / total();
  }
};

/// Pr(X >= lambda) >= (mu - lambda) / (1 - lambda) for X in [0, 1], lambda < mu.
inline CheckStatus check_mean_tail(const FiniteDistribution& x, double lambda, double tol = 1e-12) {
  if (x.values.empty())
    throw std::invalid_argument("check_mean_tail: empty distribution");
  if (!x.weights.empty() && x.weights.size() != x.values.size())
    throw std::invalid_argument("check_mean_tail: weights and values differ in length");
  for (double v : x.values)
    if (v < -tol || v > 1 + tol)
      return CheckStatus::skip;
  const double mu = x.mean();
  if (lambda >= mu)
    return CheckStatus::skip;
  return x.tail(lambda) >= (mu - lambda) / (1 - lambda) - tol ? CheckStatus::pass : CheckStatus::fail;
}

/// 2 exp(-2 t^2 / sum (b_i - a_i)^2).
inline double hoeffding_bound(double t, const std::vector<std::pair<double, double>>& ranges) {
  if (!(t > 0))
    throw std::invalid_argument("hoeffding_bound: t must be > 0");
  if (ranges.empty())
    throw std::invalid_argument("hoeffding_bound: no ranges");
  double s = 0;
  for (auto [a, b] : ranges)
    s += (b - a) * (b - a);
  return 2 * std::exp(-2 * t * t / s);
}

// ---------------------------------------------------------------------------
// Scalar inequalities

/// h^h / n^n > (1/(n e))^alpha with h = n - alpha, in the form
/// (n - alpha) log1p(-alpha/n) + alpha > 0.
inline bool power_ratio_holds(double n, double alpha) {
  const long double x = alpha / n;
  return (n - alpha) * std::log1p(-x) + alpha > 0;
}

/// (h/n)^n > exp(-alpha - alpha^2/h) with h = n - alpha.
inline bool power_ratio_exp_holds(double n, double alpha) {
  const long double h = n - alpha;
  return n * std::log1p(-static_cast<long double>(alpha) / n) > -alpha - alpha * alpha / h;
}

/// 1 + kappa eps >= exp(beta eps) on [0, eps0] at `samples` + 1 points.
inline CheckCounts linear_exp_check(double kappa, double eps0, unsigned samples = 64) {
  CheckCounts c;
  if (!(eps0 > 0) || std::fabs(kappa * eps0) >= 1) {
    c.add(CheckStatus::skip);
    return c;
  }
  const double beta = std::log1p(kappa * eps0) / eps0;
  for (unsigned s = 0; s <= samples; ++s) {
    const double e = eps0 * s / samples;
    c.add(1 + kappa * e >= std::exp(beta * e) - 1e-15);
  }
  return c;
}

inline constexpr double epsilon_alpha = 1.7262;

/// Conditions on eps = sqrt(4 d ln h / h) at one (d, h) with d >= 1, h >= 656,
/// 16 d^3 <= h / ln h. Returns (name, holds) pairs; empty if (d, h) is outside.
inline std::vector<std::pair<std::string, bool>> epsilon_conditions(unsigned d, double h) {
  const double dd = d, c = c_const;
  if (d < 1 || h < 656 || 16 * dd * dd * dd > h / std::log(h))
    return {};
  const double eps = std::sqrt(4 * dd * std::log(h) / h);
  std::vector<std::pair<std::string, bool>> out;
  out.emplace_back("eps_half", dd * eps <= 0.5);
  out.emplace_back("eps_floor", eps >= 8 * dd / h);
  out.emplace_back("eps_cap", eps <= (c - 0.5) / 1.1 && eps <= std::cbrt(2 * std::log(h) / h));
  // 2 d^2 exp(-eps^2 h / 8) <= (2 eps)^d, in logs.
  out.emplace_back("tail_vs_power", std::log(2 * dd * dd) - eps * eps * h / 8 <= dd * std::log(2 * eps));
  out.emplace_back("exp_alpha", 1 - 1.1 * eps / c >= std::exp(-epsilon_alpha * eps));
  out.emplace_back("g_growth", g_of_h_double(h) - 1 >= (c - eps / 10) * std::sqrt(h));
  return out;
}

struct ScalarGrid {
  unsigned n_max = 200;           // power ratio checks: n in 2..n_max
  unsigned alpha_steps = 8;       // fractional alpha steps per unit
  double h_max = 1e4;             // epsilon conditions: h in [656, h_max], step 4
  unsigned d_max = 8;
};

/// Runs every scalar inequality over the grid and the fixed numeric claims.
inline CheckReport check_scalar_inequalities(const ScalarGrid& g = {}) {
  CheckReport r;
  for (unsigned n = 2; n <= g.n_max; ++n)
    for (unsigned s = 1; s < n * g.alpha_steps; ++s) {
      const double a = static_cast<double>(s) / g.alpha_steps;
      for (double alpha : {a, -a}) {
        r["power_ratio"].add(power_ratio_holds(n, alpha));
        r["power_ratio_exp"].add(power_ratio_exp_holds(n, alpha));
      }
    }
  for (double kappa : {-3.0, -1.1 / c_const, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0})
    for (double eps0 : {0.01, 0.1, 0.2, 0.271, 0.3}) {
      const CheckCounts s = linear_exp_check(kappa, eps0);
      auto& c = r["linear_exp"];
      c.pass += s.pass;
      c.fail += s.fail;
      c.skip += s.skip;
    }
  for (double h = 656; h <= g.h_max; h += 4)
    for (unsigned d = 1; d <= g.d_max; ++d)
      for (auto& [name, ok] : epsilon_conditions(d, h))
        r[name].add(ok);

  const double c = c_const;
  auto& claims = r["numeric_claims"];
  // alpha from the exp_alpha condition at eps0 = 0.271, beta from the linear_exp step.
  const double alpha = -std::log(1 - 0.271 * 1.1 / c) / 0.271;
  const double beta = 2 * std::log(4.0 / 3.0);
  claims.add(alpha <= epsilon_alpha && epsilon_alpha - alpha < 1e-4);
  claims.add(epsilon_alpha + beta < 2.31);
  claims.add(2.31 + 1.0 / 16 < 2.38);
  claims.add(std::fabs((c - 0.5) / 1.1 - 0.2708) < 1e-3 && std::fabs(std::cbrt(2 * std::log(656.0) / 656) - 0.2704) < 1e-4);
  double worst = 0;
  for (unsigned d = 4; d <= 10000; ++d) {
    const double dd = d;
    worst = std::max(worst, 3.92 * (dd - 1) * (dd - 1) / (dd * dd) * (1 + std::log2(2 * dd * (dd - 1)) / dd));
  }
  claims.add(worst < 5.57);
  claims.add(5.57 / 6 < 0.93);
  // c2 = 2 c (1 - 1/(4h)) - 1 at its smallest admissible h = 384; the rounded 0.594 alone gives 3.929.
  const double c2 = 2 * c * (1 - 1 / (4 * 384.0)) - 1;
  claims.add(c2 >= 0.594);
  claims.add(2 * std::log(2.0) / (c2 * c2) < 3.92);
  claims.add(0.594 * std::exp(-0.5 - 1.0 / 48) > 0.352);
  // ln(2 d^2)/d * 2 <= 4 sqrt(2)/e for all d >= 1, and ln(16 d ln h) exceeds it for h >= 2.
  for (unsigned d = 1; d <= 1000; ++d) {
    const double rhs = 2 * std::log(2.0 * d * d) / d;
    claims.add(rhs <= 4 * std::sqrt(2.0) / std::exp(1.0) + 1e-12);
    claims.add(std::log(16 * d * std::log(2.0)) >= rhs);
  }
  return r;
}

/// Interval coverage used to push the gap condition to infinity: the intervals
/// I_k = [3 * 2^{18k+16}, 2^{32k+6}], k >= 3, overlap consecutively and the
/// overlap I_k n I_{k+1} holds a gap of 2^{6k+11}. Checked in log2 for k in 3..k_max.
inline bool livinskyi_intervals_cover(unsigned k_max = 200) {
  const double l3 = std::log2(3.0);
  for (unsigned k = 3; k < k_max; ++k) {
    const double lo_next = l3 + 18.0 * (k + 1) + 16, hi = 32.0 * k + 6;
    if (!(lo_next <= hi))
      return false;
    // 6 * (2^{6k+11})^3 <= 3 * 2^{18k+34}: the gap rule at k+1 applies throughout the overlap.
    if (!(std::log2(6.0) + 3 * (6.0 * k + 11) <= l3 + 18.0 * k + 34 + 1e-9))
      return false;
  }
  return true;
}

}  // namespace maxdet
