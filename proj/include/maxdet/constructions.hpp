#pragma once

// Hadamard and conference matrices: Paley I/II, Paley conference, Sylvester
// doubling, Kronecker products, and the recipe strings that name them.

#include "maxdet/exact.hpp"
#include "maxdet/number_theory.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maxdet {

struct construction_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class MatrixKind { hadamard, conference };

inline const char* to_string(MatrixKind k) { return k == MatrixKind::hadamard ? "hadamard" : "conference"; }

/// Square {-1,0,+1} matrix Q with (intended) Q Q^T = weight * I.
///
/// Entries are bit-packed twice, by row and by column, so row and column inner
/// products run on popcounts. A set bit means -1; zero entries are listed
/// sparsely per row and column (conference matrices only have the diagonal).
class QuasiOrthogonal {
public:
  QuasiOrthogonal() = default;

  template <class F>
  static QuasiOrthogonal build(std::size_t order, std::int64_t weight, MatrixKind kind, F&& entry) {
    QuasiOrthogonal q;
    q.order_ = order;
    q.weight_ = weight;
    q.kind_ = kind;
    q.words_ = (order + 63) / 64;
    q.rows_.assign(order * q.words_, 0);
    q.cols_.assign(order * q.words_, 0);
    q.row_zeros_.assign(order, {});
    q.col_zeros_.assign(order, {});
    for (std::size_t i = 0; i < order; ++i)
      for (std::size_t j = 0; j < order; ++j) {
        const int v = entry(i, j);
        if (v < 0) {
          q.rows_[i * q.words_ + j / 64] |= std::uint64_t{1} << (j % 64);
          q.cols_[j * q.words_ + i / 64] |= std::uint64_t{1} << (i % 64);
        } else if (v == 0) {
          q.row_zeros_[i].push_back(static_cast<std::uint32_t>(j));
          q.col_zeros_[j].push_back(static_cast<std::uint32_t>(i));
        }
      }
    return q;
  }

  std::size_t order() const { return order_; }
  std::int64_t weight() const { return weight_; }
  MatrixKind kind() const { return kind_; }
  const std::string& recipe() const { return recipe_; }
  void set_recipe(std::string r) { recipe_ = std::move(r); }

  int operator()(std::size_t i, std::size_t j) const {
    if (std::binary_search(row_zeros_[i].begin(), row_zeros_[i].end(), static_cast<std::uint32_t>(j)))
      return 0;
    return bit(row_words(i), j) ? -1 : 1;
  }

  /// Overwrites one entry; used to build deliberately broken matrices.
  void set(std::size_t i, std::size_t j, int v) {
    auto erase = [](std::vector<std::uint32_t>& z, std::uint32_t x) {
      auto it = std::lower_bound(z.begin(), z.end(), x);
      if (it != z.end() && *it == x)
        z.erase(it);
    };
    auto insert = [](std::vector<std::uint32_t>& z, std::uint32_t x) {
      auto it = std::lower_bound(z.begin(), z.end(), x);
      if (it == z.end() || *it != x)
        z.insert(it, x);
    };
    const auto ii = static_cast<std::uint32_t>(i), jj = static_cast<std::uint32_t>(j);
    std::uint64_t& rw = rows_[i * words_ + j / 64];
    std::uint64_t& cw = cols_[j * words_ + i / 64];
    const std::uint64_t rb = std::uint64_t{1} << (j % 64), cb = std::uint64_t{1} << (i % 64);
    rw &= ~rb;
    cw &= ~cb;
    if (v == 0) {
      insert(row_zeros_[i], jj);
      insert(col_zeros_[j], ii);
      return;
    }
    erase(row_zeros_[i], jj);
    erase(col_zeros_[j], ii);
    if (v < 0) {
      rw |= rb;
      cw |= cb;
    }
  }

  std::size_t words() const { return words_; }
  const std::uint64_t* row_words(std::size_t i) const { return rows_.data() + i * words_; }
  const std::uint64_t* col_words(std::size_t j) const { return cols_.data() + j * words_; }
  const std::vector<std::uint32_t>& row_zeros(std::size_t i) const { return row_zeros_[i]; }
  const std::vector<std::uint32_t>& col_zeros(std::size_t j) const { return col_zeros_[j]; }

  bool has_zeros() const {
    return std::any_of(row_zeros_.begin(), row_zeros_.end(), [](const auto& z) { return !z.empty(); });
  }

  /// Sum over c of Q(i,c) Q(j,c).
  std::int64_t row_dot(std::size_t i, std::size_t j) const {
    return masked_dot(row_words(i), row_words(j), words_, order_, row_zeros_[i], row_zeros_[j]);
  }

  IntMatrix to_int_matrix() const {
    IntMatrix m(order_, order_);
    for (std::size_t i = 0; i < order_; ++i)
      for (std::size_t j = 0; j < order_; ++j)
        m(i, j) = (*this)(i, j);
    return m;
  }

  static bool bit(const std::uint64_t* w, std::size_t c) { return (w[c / 64] >> (c % 64)) & 1U; }

  /// Inner product of two packed {-1,0,+1} vectors of length len whose zero
  /// positions are za and zb (sorted).
  static std::int64_t masked_dot(const std::uint64_t* a, const std::uint64_t* b, std::size_t words, std::size_t len,
                                 const std::vector<std::uint32_t>& za, const std::vector<std::uint32_t>& zb) {
    std::int64_t differ = 0;
    for (std::size_t w = 0; w < words; ++w)
      differ += std::popcount(a[w] ^ b[w]);
    std::int64_t live = static_cast<std::int64_t>(len);
    if (!za.empty() || !zb.empty()) {
      // Drop every position that is zero in either vector.
      auto drop = [&](std::uint32_t c) {
        --live;
        differ -= static_cast<std::int64_t>(bit(a, c) != bit(b, c));
      };
      std::size_t x = 0, y = 0;
      while (x < za.size() || y < zb.size()) {
        if (y == zb.size() || (x < za.size() && za[x] < zb[y]))
          drop(za[x++]);
        else if (x == za.size() || zb[y] < za[x])
          drop(zb[y++]);
        else {
          drop(za[x]);
          ++x;
          ++y;
        }
      }
    }
    return live - 2 * differ;
  }

private:
  std::size_t order_ = 0;
  std::int64_t weight_ = 0;
  MatrixKind kind_ = MatrixKind::hadamard;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
  std::vector<std::uint64_t> cols_;
  std::vector<std::vector<std::uint32_t>> row_zeros_;
  std::vector<std::vector<std::uint32_t>> col_zeros_;
  std::string recipe_;
};

/// True iff Q Q^T = weight * I exactly and the kind's entry pattern holds.
inline bool validate(const QuasiOrthogonal& q) {
  const std::size_t m = q.order();
  if (m == 0)
    return false;
  if (q.kind() == MatrixKind::hadamard) {
    if (q.weight() != static_cast<std::int64_t>(m) || q.has_zeros())
      return false;
  } else {
    if (q.weight() != static_cast<std::int64_t>(m) - 1)
      return false;
    for (std::size_t i = 0; i < m; ++i)
      if (q.row_zeros(i).size() != 1 || q.row_zeros(i)[0] != i)
        return false;
  }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      if (q.row_dot(i, j) != (i == j ? q.weight() : 0))
        return false;
  return true;
}

inline QuasiOrthogonal hadamard_one() {
  auto q = QuasiOrthogonal::build(1, 1, MatrixKind::hadamard, [](std::size_t, std::size_t) { return 1; });
  q.set_recipe("h1");
  return q;
}

namespace detail {

inline std::uint32_t checked_prime(std::uint64_t p, unsigned residue_mod4, const char* who) {
  if (p > 0x7fffffffULL || !is_prime(p) || p % 2 == 0)
    throw construction_error(std::string(who) + ": " + std::to_string(p) + " is not an odd prime");
  if (p % 4 != residue_mod4)
    throw construction_error(std::string(who) + ": need p = " + std::to_string(residue_mod4) + " (mod 4), got p = " +
                             std::to_string(p));
  return static_cast<std::uint32_t>(p);
}

/// Symmetric Paley conference core [[0, 1^T], [1, Q]] for p = 1 (mod 4).
inline int paley_conference_entry(const std::vector<std::int8_t>& chi, std::uint32_t p, std::size_t i, std::size_t j) {
  if (i == 0 && j == 0)
    return 0;
  if (i == 0 || j == 0)
    return 1;
  return chi[(j + p - i) % p];
}

}  // namespace detail

/// Hadamard matrix of order p+1 (p = 3 mod 4), normalized to an all-ones first row and column.
inline QuasiOrthogonal paley_one(std::uint64_t p_in) {
  const std::uint32_t p = detail::checked_prime(p_in, 3, "paley_one");
  const auto chi = quadratic_character(p);
  auto q = QuasiOrthogonal::build(p + 1, p + 1, MatrixKind::hadamard, [&](std::size_t i, std::size_t j) {
    if (i == 0 || j == 0)
      return 1;
    // I + [[0, 1^T], [-1, Jacobsthal]] with rows 1..p negated.
    const int v = chi[(j + p - i) % p] + (i == j ? 1 : 0);
    return -v;
  });
  q.set_recipe("paley1(" + std::to_string(p) + ")");
  return q;
}

/// Hadamard matrix of order 2(p+1) (p = 1 mod 4) from the symmetric conference core C:
/// [[C + I, C - I], [C - I, -C - I]].
inline QuasiOrthogonal paley_two(std::uint64_t p_in) {
  const std::uint32_t p = detail::checked_prime(p_in, 1, "paley_two");
  const auto chi = quadratic_character(p);
  const std::size_t half = p + 1;
  auto q = QuasiOrthogonal::build(2 * half, static_cast<std::int64_t>(2 * half), MatrixKind::hadamard,
                                  [&](std::size_t i, std::size_t j) {
                                    const std::size_t bi = i / half, bj = j / half;
                                    const std::size_t ci = i % half, cj = j % half;
                                    const int c = detail::paley_conference_entry(chi, p, ci, cj);
                                    const int id = ci == cj ? 1 : 0;
                                    if (bi == 1 && bj == 1)
                                      return -c - id;
                                    return (bi == 0 && bj == 0) ? c + id : c - id;
                                  });
  q.set_recipe("paley2(" + std::to_string(p) + ")");
  return q;
}

/// Symmetric conference matrix of order p+1 and weight p (p = 1 mod 4).
inline QuasiOrthogonal paley_conference(std::uint64_t p_in) {
  const std::uint32_t p = detail::checked_prime(p_in, 1, "paley_conference");
  const auto chi = quadratic_character(p);
  auto q = QuasiOrthogonal::build(p + 1, p, MatrixKind::conference, [&](std::size_t i, std::size_t j) {
    return detail::paley_conference_entry(chi, p, i, j);
  });
  q.set_recipe("conference(" + std::to_string(p) + ")");
  return q;
}

/// [[Q, Q], [Q, -Q]].
inline QuasiOrthogonal sylvester_double(const QuasiOrthogonal& q) {
  if (q.kind() != MatrixKind::hadamard)
    throw construction_error("sylvester_double: input must be a Hadamard matrix");
  const std::size_t m = q.order();
  auto r = QuasiOrthogonal::build(2 * m, static_cast<std::int64_t>(2 * m), MatrixKind::hadamard,
                                  [&](std::size_t i, std::size_t j) {
                                    const int v = q(i % m, j % m);
                                    return (i >= m && j >= m) ? -v : v;
                                  });
  r.set_recipe(q.recipe().empty() ? std::string{} : q.recipe() + ";double");
  return r;
}

inline QuasiOrthogonal kronecker(const QuasiOrthogonal& a, const QuasiOrthogonal& b) {
  if (a.kind() != MatrixKind::hadamard || b.kind() != MatrixKind::hadamard)
    throw construction_error("kronecker: both factors must be Hadamard matrices");
  const std::size_t mb = b.order();
  const std::size_t m = a.order() * mb;
  return QuasiOrthogonal::build(m, static_cast<std::int64_t>(m), MatrixKind::hadamard,
                                [&](std::size_t i, std::size_t j) { return a(i / mb, j / mb) * b(i % mb, j % mb); });
}

/// A construction named by a base family plus a number of Sylvester doublings.
///
/// Grammar: base (";double")*, base = "h1" | "paley1(p)" | "paley2(p)" | "conference(p)".
struct Recipe {
  enum class Base { identity, paley1, paley2, conference };

  Base base = Base::identity;
  std::uint64_t p = 0;
  unsigned doublings = 0;

  std::size_t order() const {
    std::size_t m = 1;
    switch (base) {
    case Base::identity: m = 1; break;
    case Base::paley1: m = p + 1; break;
    case Base::paley2: m = 2 * (p + 1); break;
    case Base::conference: m = p + 1; break;
    }
    return m << doublings;
  }

  MatrixKind kind() const { return base == Base::conference ? MatrixKind::conference : MatrixKind::hadamard; }

  std::int64_t weight() const {
    const auto m = static_cast<std::int64_t>(order());
    return kind() == MatrixKind::conference ? m - 1 : m;
  }

  std::string str() const {
    std::string s;
    switch (base) {
    case Base::identity: s = "h1"; break;
    case Base::paley1: s = "paley1(" + std::to_string(p) + ")"; break;
    case Base::paley2: s = "paley2(" + std::to_string(p) + ")"; break;
    case Base::conference: s = "conference(" + std::to_string(p) + ")"; break;
    }
    for (unsigned i = 0; i < doublings; ++i)
      s += ";double";
    return s;
  }

  static Recipe parse(std::string_view text) {
    auto fail = [&](const std::string& why) -> Recipe {
      throw construction_error("recipe \"" + std::string(text) + "\": " + why);
    };
    Recipe r;
    const auto semi = text.find(';');
    std::string_view head = text.substr(0, semi);
    if (head == "h1") {
      r.base = Base::identity;
    } else {
      const auto open = head.find('(');
      if (open == std::string_view::npos || head.back() != ')')
        return fail("expected base(p)");
      const auto name = head.substr(0, open);
      const auto digits = head.substr(open + 1, head.size() - open - 2);
      if (name == "paley1")
        r.base = Base::paley1;
      else if (name == "paley2")
        r.base = Base::paley2;
      else if (name == "conference")
        r.base = Base::conference;
      else
        return fail("unknown base \"" + std::string(name) + "\"");
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), r.p);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty())
        return fail("bad prime \"" + std::string(digits) + "\"");
    }
    std::string_view rest = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    while (!rest.empty()) {
      const auto next = rest.find(';');
      const auto op = rest.substr(0, next);
      if (op != "double")
        return fail("unknown operation \"" + std::string(op) + "\"");
      ++r.doublings;
      rest = next == std::string_view::npos ? std::string_view{} : rest.substr(next + 1);
    }
    if (r.base == Base::conference && r.doublings > 0)
      return fail("conference matrices cannot be doubled");
    return r;
  }

  QuasiOrthogonal build() const {
    QuasiOrthogonal q;
    switch (base) {
    case Base::identity: q = hadamard_one(); break;
    case Base::paley1: q = paley_one(p); break;
    case Base::paley2: q = paley_two(p); break;
    case Base::conference: q = paley_conference(p); break;
    }
    for (unsigned i = 0; i < doublings; ++i)
      q = sylvester_double(q);
    q.set_recipe(str());
    return q;
  }

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

/// Finds a Paley/Sylvester recipe for a Hadamard matrix of order m, preferring
/// the fewest doublings, then Paley I over Paley II.
inline std::optional<Recipe> plan_hadamard(std::size_t m) {
  if (m == 0)
    return std::nullopt;
  for (unsigned j = 0; (m >> j) >= 1 && ((m >> j) << j) == m; ++j) {
    const std::size_t base = m >> j;
    if (base >= 4 && is_prime(base - 1) && (base - 1) % 4 == 3)
      return Recipe{Recipe::Base::paley1, base - 1, j};
    if (base % 2 == 0 && base / 2 >= 6 && is_prime(base / 2 - 1) && (base / 2 - 1) % 4 == 1)
      return Recipe{Recipe::Base::paley2, base / 2 - 1, j};
    if (base == 1)
      return Recipe{Recipe::Base::identity, 0, j};
  }
  return std::nullopt;
}

/// Largest order below m that plan_hadamard can realize (0 if none).
inline std::size_t nearest_planned_below(std::size_t m) {
  for (std::size_t x = m; x-- > 1;)
    if (plan_hadamard(x))
      return x;
  return 0;
}

/// Conference recipe with the largest prime p = 1 (mod 4) such that p + 1 <= n.
inline std::optional<Recipe> plan_conference_at_most(std::size_t n) {
  for (std::size_t p = n; p >= 5; --p)
    if (p + 1 <= n && p % 4 == 1 && is_prime(p))
      return Recipe{Recipe::Base::conference, p, 0};
  return std::nullopt;
}

}  // namespace maxdet
