#pragma once

// Randomized bordering of a quasi-orthogonal core Q of order m:
//
//       A~ = [ Q  B ]     B: m x d random signs, C = sgn(B^T Q),
//            [ C  D ]     D: diagonal -1, off-diagonals chosen greedily.
//
// det A~ = det Q * det(D - C Q^{-1} B) and Q^{-1} = Q^T / k, so everything
// reduces to the integer d x d matrix N = G - k D with G = C Q^T B.

#include "maxdet/constructions.hpp"
#include "maxdet/exact.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace maxdet {

struct witness_corrupt : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct consistency_error : std::logic_error {
  using std::logic_error::logic_error;
};

enum class GreedyOrder { row_major, column_major };

struct SearchConfig {
  std::uint64_t trials = 256;
  std::uint64_t master_seed = 0;
  GreedyOrder greedy_order = GreedyOrder::row_major;
  std::size_t direct_check_limit = 64;
  bool signed_objective = false;  // maximize det(N) instead of |det(N)|
  unsigned threads = 0;           // 0: MAXDET_THREADS, else hardware concurrency
};

struct Border {
  SignMatrix B;  // m x d
  SignMatrix C;  // d x m
  SignMatrix D;  // d x d
  IntMatrix G;   // d x d
  mpz_class det_N;
};

struct TrialResult {
  LogScalar ratio;
  std::uint64_t trial_index = 0;
  Border border;
  std::string recipe;
  std::size_t m = 0;
  std::int64_t k = 0;
  MatrixKind kind = MatrixKind::hadamard;
  std::uint64_t master_seed = 0;

  std::size_t d() const { return border.B.cols(); }
  std::size_t n() const { return m + d(); }
};

// ---------------------------------------------------------------------------
// Randomness

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Stream seed for one trial: splitmix64(splitmix64(master) + index).
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) {
  return splitmix64(splitmix64(master_seed) + trial_index);
}

/// Fair coin flips drawn 64 at a time from mt19937_64.
class TrialStream {
public:
  TrialStream(std::uint64_t master_seed, std::uint64_t trial_index) : engine_(trial_seed(master_seed, trial_index)) {}
  explicit TrialStream(std::mt19937_64 engine) : engine_(std::move(engine)) {}

  bool coin() {
    if (left_ == 0) {
      bits_ = engine_();
      left_ = 64;
    }
    const bool b = bits_ & 1U;
    bits_ >>= 1;
    --left_;
    return b;
  }

private:
  std::mt19937_64 engine_;
  std::uint64_t bits_ = 0;
  unsigned left_ = 0;
};

/// m x d signs, filled column by column; a set coin bit gives -1.
inline SignMatrix sample_border_columns(TrialStream& rng, std::size_t m, std::size_t d) {
  if (m == 0 || d == 0)
    throw std::invalid_argument("sample_border_columns: need m >= 1 and d >= 1");
  SignMatrix b(m, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < m; ++i)
      if (rng.coin())
        b.flip(i, j);
  return b;
}

// ---------------------------------------------------------------------------
// Sign completion and the Gram block

namespace detail {

/// Column j of B packed like a Q column: set bit means -1.
inline std::vector<std::uint64_t> pack_column(const SignMatrix& b, std::size_t j, std::size_t words) {
  std::vector<std::uint64_t> w(words, 0);
  for (std::size_t i = 0; i < b.rows(); ++i)
    if (b(i, j) < 0)
      w[i / 64] |= std::uint64_t{1} << (i % 64);
  return w;
}

inline void check_border_shape(const SignMatrix& b, const QuasiOrthogonal& q) {
  if (b.rows() != q.order())
    throw dimension_error("border has " + std::to_string(b.rows()) + " rows, core has order " +
                          std::to_string(q.order()));
}

}  // namespace detail

/// (B^T Q) as a d x m row-major table of exact integers.
inline std::vector<std::int64_t> border_products(const SignMatrix& b, const QuasiOrthogonal& q) {
  detail::check_border_shape(b, q);
  const std::size_t m = q.order(), d = b.cols();
  const std::vector<std::uint32_t> none;
  std::vector<std::int64_t> bq(d * m);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = detail::pack_column(b, j, q.words());
    for (std::size_t l = 0; l < m; ++l)
      bq[j * m + l] = QuasiOrthogonal::masked_dot(col.data(), q.col_words(l), q.words(), m, none, q.col_zeros(l));
  }
  return bq;
}

namespace detail {

inline SignMatrix signs_of(const std::vector<std::int64_t>& bq, std::size_t d, std::size_t m) {
  SignMatrix c(d, m);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t l = 0; l < m; ++l)
      if (bq[i * m + l] < 0)
        c.set(i, l, -1);
  return c;
}

/// G_ij = sum_l C_il (B^T Q)_jl.
inline IntMatrix gram_from_products(const SignMatrix& c, const std::vector<std::int64_t>& bq) {
  const std::size_t d = c.rows(), m = c.cols();
  IntMatrix g(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      std::int64_t s = 0;
      for (std::size_t l = 0; l < m; ++l)
        s += c(i, l) * bq[j * m + l];
      g(i, j) = static_cast<long>(s);
    }
  return g;
}

}  // namespace detail

/// C = sgn(B^T Q) with sgn(0) = +1.
inline SignMatrix sign_completion(const SignMatrix& b, const QuasiOrthogonal& q) {
  return detail::signs_of(border_products(b, q), b.cols(), q.order());
}

/// G = C Q^T B.
inline IntMatrix gram_block(const QuasiOrthogonal& q, const SignMatrix& b, const SignMatrix& c) {
  detail::check_border_shape(b, q);
  if (c.rows() != b.cols() || c.cols() != q.order())
    throw dimension_error("gram_block: C must be d x m");
  return detail::gram_from_products(c, border_products(b, q));
}

// ---------------------------------------------------------------------------
// Greedy completion of D

inline std::vector<std::pair<std::size_t, std::size_t>> greedy_positions(std::size_t d, GreedyOrder order) {
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b)
      if (a != b)
        pos.emplace_back(order == GreedyOrder::row_major ? a : b, order == GreedyOrder::row_major ? b : a);
  return pos;
}

namespace detail {

inline mpz_class det_of(const IntMatrix& a) {
  std::vector<mpz_class> buf;
  buf.reserve(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      buf.push_back(a(i, j));
  return bareiss_determinant(buf, a.rows());
}

}  // namespace detail

struct Completion {
  SignMatrix D;
  mpz_class det_N;
};

/// Fixes the off-diagonal signs of D one at a time, holding undecided ones at 0.
///
/// det(N) is affine in each entry, so f(-1) = 2 f(0) - f(+1) and one exact
/// determinant per position suffices. Ties keep D_ij = +1.
inline Completion greedy_complete(const IntMatrix& g, std::int64_t k, GreedyOrder order = GreedyOrder::row_major,
                                  bool signed_objective = false) {
  if (g.rows() != g.cols())
    throw dimension_error("greedy_complete: G must be square");
  const std::size_t d = g.rows();
  const mpz_class kk = static_cast<long>(k);
  IntMatrix n = g;
  for (std::size_t i = 0; i < d; ++i)
    n(i, i) += kk;
  mpz_class f0 = detail::det_of(n);
#ifndef NDEBUG
  const mpz_class start = abs(f0);
#endif
  SignMatrix dm(d, d);
  for (std::size_t i = 0; i < d; ++i)
    dm.set(i, i, -1);
  for (auto [i, j] : greedy_positions(d, order)) {
    n(i, j) = g(i, j) - kk;
    const mpz_class f_plus = detail::det_of(n);
    const mpz_class f_minus = 2 * f0 - f_plus;
    const bool take_minus = signed_objective ? f_minus > f_plus : abs(f_minus) > abs(f_plus);
    if (take_minus) {
      n(i, j) = g(i, j) + kk;
      dm.set(i, j, -1);
      f0 = f_minus;
    } else {
      f0 = f_plus;
    }
  }
#ifndef NDEBUG
  if (!signed_objective)
    assert(abs(f0) >= start);
#endif
  return {std::move(dm), std::move(f0)};
}

// ---------------------------------------------------------------------------
// Trials

/// ln(|det A~| / n^{n/2}) = (m/2) ln k + ln|det N| - d ln k - (n/2) ln n.
inline LogScalar bordered_ratio(std::size_t m, std::int64_t k, std::size_t d, const mpz_class& det_n) {
  if (det_n == 0)
    return LogScalar::zero();
  const double lk = std::log(static_cast<double>(k));
  const double nn = static_cast<double>(m + d);
  const double l = 0.5 * static_cast<double>(m) * lk + log_abs(det_n) - static_cast<double>(d) * lk -
                   0.5 * nn * std::log(nn);
  return LogScalar::from_log(l);
}

inline TrialResult run_with_border(const QuasiOrthogonal& q, SignMatrix b, const SearchConfig& cfg = {}) {
  detail::check_border_shape(b, q);
  const std::size_t d = b.cols(), m = q.order();
  TrialResult r;
  r.recipe = q.recipe();
  r.m = m;
  r.k = q.weight();
  r.kind = q.kind();
  r.master_seed = cfg.master_seed;
  const auto bq = border_products(b, q);
  r.border.C = detail::signs_of(bq, d, m);
  r.border.G = detail::gram_from_products(r.border.C, bq);
  auto comp = greedy_complete(r.border.G, q.weight(), cfg.greedy_order, cfg.signed_objective);
  r.border.D = std::move(comp.D);
  r.border.det_N = std::move(comp.det_N);
  r.border.B = std::move(b);
  r.ratio = bordered_ratio(m, q.weight(), d, r.border.det_N);
  return r;
}

inline TrialResult run_trial(const QuasiOrthogonal& q, std::size_t d, std::uint64_t trial_index,
                             const SearchConfig& cfg = {}) {
  if (d == 0) {
    TrialResult r = run_with_border(q, SignMatrix(q.order(), 0), cfg);
    r.trial_index = trial_index;
    return r;
  }
  TrialStream rng(cfg.master_seed, trial_index);
  TrialResult r = run_with_border(q, sample_border_columns(rng, q.order(), d), cfg);
  r.trial_index = trial_index;
  return r;
}

inline unsigned default_threads() {
  if (const char* env = std::getenv("MAXDET_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1)
      return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// (ratio, -index) order: larger ratio wins, lower index breaks ties.
inline bool better_trial(const TrialResult& a, const TrialResult& b) {
  if (a.ratio > b.ratio)
    return true;
  if (b.ratio > a.ratio)
    return false;
  return a.trial_index < b.trial_index;
}

/// Best of trials 0..cfg.trials-1; independent of thread count and scheduling.
inline TrialResult search(const QuasiOrthogonal& q, std::size_t d, const SearchConfig& cfg) {
  if (cfg.trials == 0)
    throw std::invalid_argument("search: trials must be >= 1");
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(cfg.threads ? cfg.threads : default_threads(), cfg.trials));
  std::atomic<std::uint64_t> next{0};
  std::vector<std::optional<TrialResult>> best(threads);
  auto work = [&](unsigned t) {
    for (std::uint64_t i; (i = next.fetch_add(1)) < cfg.trials;) {
      TrialResult r = run_trial(q, d, i, cfg);
      if (!best[t] || better_trial(r, *best[t]))
        best[t] = std::move(r);
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
  std::optional<TrialResult> out;
  for (auto& b : best)
    if (b && (!out || better_trial(*b, *out)))
      out = std::move(b);
  return std::move(*out);
}

/// Calls fn(B) for every m x d sign matrix, in lexicographic order of the
/// column-major bit string (bit set means -1). Only for tiny m*d.
inline void for_each_border(std::size_t m, std::size_t d, const std::function<void(const SignMatrix&)>& fn) {
  const std::size_t bits = m * d;
  if (bits >= 32)
    throw std::invalid_argument("for_each_border: m*d must be < 32");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    SignMatrix b(m, d);
    for (std::size_t t = 0; t < bits; ++t)
      if ((mask >> t) & 1U)
        b.flip(t % m, t / m);
    fn(b);
  }
}

/// Best trial over every possible B; trial_index is the enumeration index.
inline TrialResult exhaustive_search(const QuasiOrthogonal& q, std::size_t d, const SearchConfig& cfg = {}) {
  std::optional<TrialResult> best;
  std::uint64_t index = 0;
  for_each_border(q.order(), d, [&](const SignMatrix& b) {
    TrialResult r = run_with_border(q, b, cfg);
    r.trial_index = index++;
    if (!best || better_trial(r, *best))
      best = std::move(r);
  });
  return std::move(*best);
}

// ---------------------------------------------------------------------------
// Witnesses

/// Full n x n bordered matrix [[Q, B], [C, D]].
inline IntMatrix assemble(const QuasiOrthogonal& q, const Border& w) {
  const std::size_t m = q.order(), d = w.B.cols(), n = m + d;
  IntMatrix a(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      a(i, j) = q(i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < d; ++j)
      a(i, m + j) = w.B(i, j);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < m; ++j)
      a(m + i, j) = w.C(i, j);
    for (std::size_t j = 0; j < d; ++j)
      a(m + i, m + j) = w.D(i, j);
  }
  return a;
}

/// Checks det(A~)^2 k^{2d} = k^m det(N)^2 on the assembled matrix.
inline bool direct_check(const QuasiOrthogonal& q, const Border& w) {
  const mpz_class direct = det_exact(assemble(q, w));
  const std::size_t m = q.order(), d = w.B.cols();
  mpz_class k = static_cast<long>(q.weight()), lhs, rhs;
  mpz_class k2d, km;
  mpz_pow_ui(k2d.get_mpz_t(), k.get_mpz_t(), 2 * d);
  mpz_pow_ui(km.get_mpz_t(), k.get_mpz_t(), m);
  lhs = direct * direct * k2d;
  rhs = km * w.det_N * w.det_N;
  return lhs == rhs;
}

struct Witness {
  std::size_t n = 0, m = 0, d = 0;
  MatrixKind kind = MatrixKind::hadamard;
  std::int64_t weight = 0;
  std::string recipe;
  std::uint64_t master_seed = 0;
  std::uint64_t trial_index = 0;
  SignMatrix B;
  std::optional<SignMatrix> C;  // absent in files; recomputed on verify
  SignMatrix D;
  double ratio_log = 0.0;

  static Witness from_trial(const TrialResult& r) {
    Witness w;
    w.m = r.m;
    w.d = r.d();
    w.n = w.m + w.d;
    w.kind = r.kind;
    w.weight = r.k;
    w.recipe = r.recipe;
    w.master_seed = r.master_seed;
    w.trial_index = r.trial_index;
    w.B = r.border.B;
    w.C = r.border.C;
    w.D = r.border.D;
    w.ratio_log = r.ratio.sign == 0 ? -INFINITY : r.ratio.log_abs;
    return w;
  }
};

/// Recomputes the ratio from recipe, B and D; throws witness_corrupt or consistency_error.
inline LogScalar verify_witness(const Witness& w, std::size_t direct_check_limit = 64) {
  const Recipe recipe = Recipe::parse(w.recipe);
  if (recipe.order() != w.m || recipe.kind() != w.kind || recipe.weight() != w.weight || w.n != w.m + w.d)
    throw witness_corrupt("witness header does not match recipe " + w.recipe);
  if (w.B.rows() != w.m || w.B.cols() != w.d || w.D.rows() != w.d || w.D.cols() != w.d)
    throw witness_corrupt("witness block shapes do not match (m, d)");
  for (std::size_t i = 0; i < w.d; ++i)
    if (w.D(i, i) != -1)
      throw witness_corrupt("witness D diagonal must be -1");
  const QuasiOrthogonal q = recipe.build();
  Border b;
  b.B = w.B;
  b.D = w.D;
  const auto bq = border_products(w.B, q);
  b.C = detail::signs_of(bq, w.d, w.m);
  if (w.C && !(*w.C == b.C))
    throw witness_corrupt("stored C differs from sgn(B^T Q)");
  b.G = detail::gram_from_products(b.C, bq);
  IntMatrix n = b.G;
  const mpz_class k = static_cast<long>(w.weight);
  for (std::size_t i = 0; i < w.d; ++i)
    for (std::size_t j = 0; j < w.d; ++j)
      n(i, j) -= k * w.D(i, j);
  b.det_N = detail::det_of(n);
  const LogScalar ratio = bordered_ratio(w.m, w.weight, w.d, b.det_N);
  const double got = ratio.sign == 0 ? -INFINITY : ratio.log_abs;
  if (!(got == w.ratio_log || std::fabs(got - w.ratio_log) <= 1e-9))
    throw witness_corrupt("recomputed ratio_log " + std::to_string(got) + " differs from stored " +
                          std::to_string(w.ratio_log));
  if (w.n <= direct_check_limit && !direct_check(q, b))
    throw consistency_error("direct determinant disagrees with the Schur complement path");
  return ratio;
}

}  // namespace maxdet
