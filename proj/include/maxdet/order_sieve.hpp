#pragma once

// Known-constructible Hadamard orders up to a limit, generated by order
// arithmetic only, plus the gap function and the n -> (h, d) resolver.

#include "maxdet/number_theory.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxdet {

enum class Rule : std::uint8_t {
  paley_sylvester_turyn = 1,
  agaian_sarukhanyan = 2,
  craigen_seberry_zhang = 3,
  twin_prime = 4,
  complex_golay = 5,
  miyamoto_1 = 6,
  miyamoto_2 = 7,
  yamada_kiyasu = 8,
  small_orders = 9,
  baumert_hall_williamson = 10,
  seberry_yamada = 11,
  livinskyi = 12,
  turyn_williamson = 13,
};

inline constexpr std::array<Rule, 13> all_rules = {
    Rule::paley_sylvester_turyn, Rule::agaian_sarukhanyan,      Rule::craigen_seberry_zhang, Rule::twin_prime,
    Rule::complex_golay,         Rule::miyamoto_1,              Rule::miyamoto_2,            Rule::yamada_kiyasu,
    Rule::small_orders,          Rule::baumert_hall_williamson, Rule::seberry_yamada,        Rule::livinskyi,
    Rule::turyn_williamson};

inline const char* rule_name(Rule r) {
  switch (r) {
  case Rule::paley_sylvester_turyn: return "paley-sylvester-turyn";
  case Rule::agaian_sarukhanyan: return "agaian-sarukhanyan";
  case Rule::craigen_seberry_zhang: return "craigen-seberry-zhang";
  case Rule::twin_prime: return "twin-prime";
  case Rule::complex_golay: return "complex-golay";
  case Rule::miyamoto_1: return "miyamoto-1";
  case Rule::miyamoto_2: return "miyamoto-2";
  case Rule::yamada_kiyasu: return "yamada-kiyasu";
  case Rule::small_orders: return "small-orders";
  case Rule::baumert_hall_williamson: return "baumert-hall-williamson";
  case Rule::seberry_yamada: return "seberry-yamada";
  case Rule::livinskyi: return "livinskyi";
  case Rule::turyn_williamson: return "turyn-williamson";
  }
  return "?";
}

class RuleSet {
public:
  constexpr RuleSet() = default;
  constexpr RuleSet(std::initializer_list<Rule> rules) {
    for (Rule r : rules)
      bits_ |= mask(r);
  }

  /// Everything except the Livinskyi rule, which is opt-in.
  static constexpr RuleSet defaults() {
    RuleSet s;
    for (Rule r : all_rules)
      if (r != Rule::livinskyi)
        s.bits_ |= mask(r);
    return s;
  }
  static constexpr RuleSet all() {
    RuleSet s = defaults();
    s.bits_ |= mask(Rule::livinskyi);
    return s;
  }

  constexpr bool has(Rule r) const { return bits_ & mask(r); }
  constexpr RuleSet with(Rule r) const {
    RuleSet s = *this;
    s.bits_ |= mask(r);
    return s;
  }
  constexpr RuleSet without(Rule r) const {
    RuleSet s = *this;
    s.bits_ &= ~mask(r);
    return s;
  }
  constexpr bool superset_of(RuleSet o) const { return (bits_ & o.bits_) == o.bits_; }
  constexpr std::uint32_t bits() const { return bits_; }

  std::vector<int> numbers() const {
    std::vector<int> v;
    for (Rule r : all_rules)
      if (has(r))
        v.push_back(static_cast<int>(r));
    return v;
  }

  friend constexpr bool operator==(RuleSet, RuleSet) = default;

private:
  static constexpr std::uint32_t mask(Rule r) { return std::uint32_t{1} << static_cast<unsigned>(r); }
  std::uint32_t bits_ = 0;
};

/// Orders in 4..2056 not covered by the small-order table.
inline constexpr std::array<std::uint32_t, 13> small_order_exceptions = {668,  716,  892,  1004, 1132, 1244, 1388,
                                                                         1436, 1676, 1772, 1916, 1948, 1964};
inline constexpr std::uint32_t small_order_ceiling = 2056;
inline constexpr std::array<std::uint32_t, 4> williamson_exceptions = {35, 47, 53, 59};
inline constexpr std::uint32_t williamson_ceiling = 64;
inline constexpr std::array<std::uint32_t, 2> baumert_hall_exceptions = {97, 103};
inline constexpr std::uint32_t baumert_hall_ceiling = 108;

/// Membership bitset over {1, 2} and the multiples of 4 up to `limit`.
class OrderSet {
public:
  OrderSet() = default;
  explicit OrderSet(std::uint64_t limit) : limit_(limit), bits_((limit / 4) / 64 + 1, 0) {}

  std::uint64_t limit() const { return limit_; }
  /// Largest multiple of 4 the set can describe.
  std::uint64_t top() const { return 4 * (limit_ / 4); }

  bool contains(std::uint64_t n) const {
    if (n == 1)
      return has1_;
    if (n == 2)
      return has2_;
    if (n == 0 || n % 4 != 0 || n > limit_)
      return false;
    const std::uint64_t i = n / 4;
    return (bits_[i / 64] >> (i % 64)) & 1U;
  }

  /// Returns true if n was newly added.
  bool insert(std::uint64_t n, std::uint8_t tag = 0) {
    if (n > limit_ || contains(n))
      return false;
    if (n == 1)
      has1_ = true;
    else if (n == 2)
      has2_ = true;
    else if (n % 4 != 0 || n == 0)
      throw std::invalid_argument("OrderSet: order " + std::to_string(n) + " is not 1, 2 or a multiple of 4");
    else {
      const std::uint64_t i = n / 4;
      bits_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    if (!tags_.empty() && n >= 4)
      tags_[n / 4] = tag;
    ++count_;
    return true;
  }

  void enable_tags() {
    if (tags_.empty())
      tags_.assign(limit_ / 4 + 1, 0);
  }
  bool has_tags() const { return !tags_.empty(); }

  /// Rule that first produced n (0 for the fixed orders 1 and 2 or when untracked).
  std::optional<Rule> tag(std::uint64_t n) const {
    if (tags_.empty() || n < 4 || !contains(n) || tags_[n / 4] == 0)
      return std::nullopt;
    return static_cast<Rule>(tags_[n / 4]);
  }

  std::size_t size() const { return count_; }

  /// Smallest member > n, if inside the limit.
  std::optional<std::uint64_t> next(std::uint64_t n) const {
    if (n < 1 && has1_)
      return 1;
    if (n < 2 && has2_)
      return 2;
    std::uint64_t i = n < 4 ? 1 : n / 4 + 1;
    const std::uint64_t last = limit_ / 4;
    while (i <= last) {
      const std::uint64_t w = bits_[i / 64] >> (i % 64);
      if (w != 0) {
        i += static_cast<std::uint64_t>(std::countr_zero(w));
        return i <= last ? std::optional<std::uint64_t>(4 * i) : std::nullopt;
      }
      i = (i / 64 + 1) * 64;
    }
    return std::nullopt;
  }

  /// Largest member <= n.
  std::optional<std::uint64_t> prev(std::uint64_t n) const {
    if (n >= 4) {
      std::int64_t i = static_cast<std::int64_t>(std::min(n, limit_) / 4);
      while (i >= 1) {
        const std::uint64_t w = bits_[static_cast<std::size_t>(i) / 64] << (63 - i % 64);
        if (w != 0) {
          i -= std::countl_zero(w);
          if (i >= 1)
            return 4 * static_cast<std::uint64_t>(i);
          break;
        }
        i = (i / 64) * 64 - 1;
      }
    }
    if (n >= 2 && has2_)
      return 2;
    if (n >= 1 && has1_)
      return 1;
    return std::nullopt;
  }

  std::vector<std::uint64_t> members() const {
    std::vector<std::uint64_t> out;
    for (auto x = next(0); x; x = next(*x))
      out.push_back(*x);
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return bits_; }

  // Raw access for the cache format.
  static OrderSet from_raw(std::uint64_t limit, bool has1, bool has2, std::vector<std::uint64_t> words) {
    OrderSet s(limit);
    if (words.size() != s.bits_.size())
      throw std::invalid_argument("OrderSet: bitset size does not match limit");
    s.bits_ = std::move(words);
    s.bits_[0] &= ~std::uint64_t{1};  // order 0 is never a member
    const std::uint64_t last = limit / 4;
    if ((last + 1) % 64 != 0)
      s.bits_.back() &= (std::uint64_t{1} << ((last + 1) % 64)) - 1;
    s.has1_ = has1;
    s.has2_ = has2;
    s.count_ = (has1 ? 1 : 0) + (has2 ? 1 : 0);
    for (auto w : s.bits_)
      s.count_ += static_cast<std::size_t>(std::popcount(w));
    return s;
  }

  RuleSet rules() const { return rules_; }
  void set_rules(RuleSet r) { rules_ = r; }

private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint64_t> bits_;
  bool has1_ = false;
  bool has2_ = false;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> tags_;
  RuleSet rules_;
};

namespace detail {

inline std::vector<std::uint64_t> complex_golay_numbers(std::uint64_t bound) {
  // 2^{a-1} 6^b 10^c 22^d 26^e, enumerated as 2^{a-1} times a product of the
  // four even factors; a = 0 halves the product, which must then be even.
  std::vector<std::uint64_t> evens = {1};
  for (std::uint64_t f : {6, 10, 22, 26}) {
    const std::size_t n = evens.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::uint64_t x = evens[i] * f; x <= 2 * bound; x *= f)
        evens.push_back(x);
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t e : evens) {
    if (e % 2 == 0 && e / 2 <= bound)
      out.push_back(e / 2);
    for (std::uint64_t x = e; x <= bound; x *= 2)
      out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

/// Applies the selected order-arithmetic rules up to `limit`; the product and
/// recursive rules (2, 3, 6, 8) are iterated to a fixpoint.
inline OrderSet build_order_set(std::uint64_t limit, RuleSet rules = RuleSet::defaults(), bool track_rules = false) {
  if (limit < 4)
    throw std::invalid_argument("build_order_set: limit must be >= 4");
  OrderSet set(limit);
  set.set_rules(rules);
  if (track_rules)
    set.enable_tags();
  set.insert(1);
  set.insert(2);

  const PrimeTable primes(static_cast<std::size_t>(limit));
  auto pp = [&](std::uint64_t q) { return q <= limit ? primes.prime_power(static_cast<std::size_t>(q)) : is_prime(q); };
  auto add = [&](std::uint64_t h, Rule r) { return set.insert(h, static_cast<std::uint8_t>(r)); };

  if (rules.has(Rule::paley_sylvester_turyn)) {
    // 2^j (q + 1) with q = 0, 1 or a prime power.
    for (std::uint64_t q = 0; q + 1 <= limit; ++q) {
      if (q > 1 && !primes.prime_power(static_cast<std::size_t>(q)))
        continue;
      for (std::uint64_t h = q + 1; h <= limit; h *= 2)
        if (h % 4 == 0)
          add(h, Rule::paley_sylvester_turyn);
    }
  }
  if (rules.has(Rule::twin_prime)) {
    for (std::uint64_t q = 3; (q + 1) * (q + 1) <= limit; q += 2)
      if (pp(q) && pp(q + 2))
        add((q + 1) * (q + 1), Rule::twin_prime);
  }
  if (rules.has(Rule::complex_golay)) {
    const auto golay = detail::complex_golay_numbers(limit / 8);
    for (std::size_t i = 0; i < golay.size(); ++i)
      for (std::size_t j = i; j < golay.size() && golay[i] + golay[j] <= limit / 8; ++j)
        add(8 * (golay[i] + golay[j]), Rule::complex_golay);
  }
  if (rules.has(Rule::miyamoto_2)) {
    for (std::uint64_t q = 3; 8 * q <= limit; q += 4)
      if (pp(q) && pp(2 * q - 3))
        add(8 * q, Rule::miyamoto_2);
  }
  if (rules.has(Rule::small_orders)) {
    for (std::uint64_t h = 4; h <= std::min<std::uint64_t>(limit, small_order_ceiling); h += 4)
      if (std::find(small_order_exceptions.begin(), small_order_exceptions.end(), h) == small_order_exceptions.end())
        add(h, Rule::small_orders);
  }
  if (rules.has(Rule::baumert_hall_williamson) || rules.has(Rule::seberry_yamada) ||
      rules.has(Rule::turyn_williamson)) {
    std::vector<std::uint64_t> williamson;
    std::vector<Rule> williamson_source;
    if (rules.has(Rule::baumert_hall_williamson))
      for (std::uint64_t w = 1; w <= williamson_ceiling; ++w)
        if (std::find(williamson_exceptions.begin(), williamson_exceptions.end(), w) == williamson_exceptions.end()) {
          williamson.push_back(w);
          williamson_source.push_back(Rule::baumert_hall_williamson);
        }
    if (rules.has(Rule::turyn_williamson))
      // (q + 1)/2 for q = 1 (mod 4) a prime power.
      for (std::uint64_t q = 5; 4 * ((q + 1) / 2) <= limit; q += 4)
        if (pp(q)) {
          williamson.push_back((q + 1) / 2);
          williamson_source.push_back(Rule::turyn_williamson);
        }
    if (rules.has(Rule::seberry_yamada))
      for (std::uint64_t q = 2; 4 * (2 * q + 3) <= limit; ++q)
        if (pp(q) && pp(2 * q + 3)) {
          williamson.push_back(2 * q + 3);
          williamson_source.push_back(Rule::seberry_yamada);
        }
    std::vector<std::uint64_t> bh = {1};
    if (rules.has(Rule::baumert_hall_williamson)) {
      bh.clear();
      for (std::uint64_t b = 1; b <= baumert_hall_ceiling; ++b)
        if (std::find(baumert_hall_exceptions.begin(), baumert_hall_exceptions.end(), b) ==
            baumert_hall_exceptions.end())
          bh.push_back(b);
      for (std::uint64_t b = 2; b <= limit / 4 + 1; b = 2 * b - 1)  // 2^k + 1
        bh.push_back(b);
    }
    for (std::size_t i = 0; i < williamson.size(); ++i)
      for (std::uint64_t b : bh)
        if (4 * b * williamson[i] <= limit)
          add(4 * b * williamson[i], williamson_source[i]);
  }
  if (rules.has(Rule::livinskyi)) {
    // 2^{6k+5} q for 1 <= q <= 2^{26k+1}, k >= 1.
    for (unsigned k = 1; 6 * k + 5 < 64 && (std::uint64_t{1} << (6 * k + 5)) <= limit; ++k) {
      const std::uint64_t base = std::uint64_t{1} << (6 * k + 5);
      std::uint64_t qmax = limit / base;
      if (26 * k + 1 < 64)
        qmax = std::min(qmax, std::uint64_t{1} << (26 * k + 1));
      for (std::uint64_t q = 1; q <= qmax; ++q)
        add(base * q, Rule::livinskyi);
    }
  }

  const bool any_recursive = rules.has(Rule::agaian_sarukhanyan) || rules.has(Rule::craigen_seberry_zhang) ||
                             rules.has(Rule::miyamoto_1) || rules.has(Rule::yamada_kiyasu);
  for (bool changed = any_recursive; changed;) {
    changed = false;
    if (rules.has(Rule::miyamoto_1)) {
      // q - 1 in H, q a prime power => 4q.
      for (std::uint64_t q = 2; 4 * q <= limit; ++q)
        if (set.contains(q - 1) && pp(q))
          changed |= add(4 * q, Rule::miyamoto_1);
    }
    if (rules.has(Rule::yamada_kiyasu)) {
      // q = 5 (mod 8) prime power, (q + 3)/2 in H => 4(q + 2).
      for (std::uint64_t q = 5; 4 * (q + 2) <= limit; q += 8)
        if (pp(q) && set.contains((q + 3) / 2))
          changed |= add(4 * (q + 2), Rule::yamada_kiyasu);
    }
    if (rules.has(Rule::agaian_sarukhanyan) || rules.has(Rule::craigen_seberry_zhang)) {
      std::vector<std::uint64_t> quarter;  // a with 4a in H
      for (auto x = set.next(3); x; x = set.next(*x))
        quarter.push_back(*x / 4);
      if (rules.has(Rule::agaian_sarukhanyan)) {
        // 4a, 4b in H => 8ab.
        for (std::size_t i = 0; i < quarter.size(); ++i) {
          if (8 * quarter[i] * quarter[i] > limit)
            break;
          for (std::size_t j = i; j < quarter.size() && 8 * quarter[i] * quarter[j] <= limit; ++j)
            changed |= add(8 * quarter[i] * quarter[j], Rule::agaian_sarukhanyan);
        }
      }
      if (rules.has(Rule::craigen_seberry_zhang)) {
        // 4a, 4b, 4c, 4d in H => 16abcd, via pair products ab and cd.
        const std::uint64_t bound = limit / 16;
        std::vector<bool> pair(bound + 1, false);
        for (std::size_t i = 0; i < quarter.size() && quarter[i] * quarter[i] <= bound; ++i)
          for (std::size_t j = i; j < quarter.size() && quarter[i] * quarter[j] <= bound; ++j)
            pair[quarter[i] * quarter[j]] = true;
        std::vector<std::uint64_t> products;
        for (std::uint64_t s = 1; s <= bound; ++s)
          if (pair[s])
            products.push_back(s);
        for (std::size_t i = 0; i < products.size() && products[i] * products[i] <= bound; ++i)
          for (std::size_t j = i; j < products.size() && products[i] * products[j] <= bound; ++j)
            changed |= add(16 * products[i] * products[j], Rule::craigen_seberry_zhang);
      }
    }
  }
  return set;
}

/// One line per step of a derivation of n from the rules recorded in a
/// tag-tracking set; product and recursive rules are expanded into their inputs.
inline std::vector<std::string> explain_order(std::uint64_t n, const OrderSet& set) {
  std::vector<std::string> out;
  const auto tag = set.tag(n);
  if (!tag) {
    out.push_back(std::to_string(n) + (set.contains(n) ? ": base order" : ": not a member"));
    return out;
  }
  const std::string head = std::to_string(n) + " [" + rule_name(*tag) + "]";
  auto expand = [&](std::initializer_list<std::uint64_t> inputs) {
    for (std::uint64_t x : inputs)
      if (x >= 4 && x < n)
        for (auto& line : explain_order(x, set))
          out.push_back("  " + line);
  };
  switch (*tag) {
  case Rule::agaian_sarukhanyan:
    // Pick the factorization 8ab with the largest smaller factor.
    for (std::uint64_t a = 1; 8 * a * a <= n; ++a)
      if (n % (8 * a) == 0 && set.contains(4 * a) && set.contains(4 * (n / (8 * a)))) {
        std::uint64_t best = a;
        for (std::uint64_t a2 = a + 1; 8 * a2 * a2 <= n; ++a2)
          if (n % (8 * a2) == 0 && set.contains(4 * a2) && set.contains(4 * (n / (8 * a2))))
            best = a2;
        const std::uint64_t b = n / (8 * best);
        out.push_back(head + " = 8 * " + std::to_string(best) + " * " + std::to_string(b) + " from " +
                      std::to_string(4 * best) + " and " + std::to_string(4 * b));
        expand({4 * best, 4 * b});
        return out;
      }
    break;
  case Rule::yamada_kiyasu: {
    const std::uint64_t q = n / 4 - 2;
    out.push_back(head + " = 4 (q + 2) with q = " + std::to_string(q) + ", (q + 3)/2 = " + std::to_string((q + 3) / 2));
    expand({(q + 3) / 2});
    return out;
  }
  case Rule::miyamoto_1: {
    const std::uint64_t q = n / 4;
    out.push_back(head + " = 4 q with q = " + std::to_string(q) + ", q - 1 = " + std::to_string(q - 1));
    expand({q - 1});
    return out;
  }
  default: break;
  }
  out.push_back(head);
  return out;
}

/// Largest member h <= n with d = n - h.
struct Resolution {
  std::uint64_t n = 0;
  std::uint64_t h = 0;
  std::uint64_t d = 0;
};

inline Resolution resolve(std::uint64_t n, const OrderSet& set) {
  if (n < 1 || n > set.limit())
    throw std::out_of_range("resolve: n = " + std::to_string(n) + " outside [1, " + std::to_string(set.limit()) + "]");
  const auto h = set.prev(n);
  if (!h)
    throw std::out_of_range("resolve: no member of the order set is <= " + std::to_string(n));
  return {n, *h, n - *h};
}

struct GapReport {
  std::uint64_t x = 0;
  std::uint64_t gamma = 0;
  std::uint64_t lower = 0;  // witness pair (lower, upper), consecutive members
  std::uint64_t upper = 0;
};

/// Largest gap between consecutive members n_i < n_{i+1} with n_i <= x; the
/// earliest pair attaining it is the witness.
inline GapReport gap_function(std::uint64_t x, const OrderSet& set) {
  if (x > set.limit())
    throw std::out_of_range("gap_function: x exceeds the set limit");
  GapReport r{x, 0, 0, 0};
  for (auto a = set.next(0); a && *a <= x;) {
    const auto b = set.next(*a);
    if (!b)
      throw std::out_of_range("gap_function: successor of " + std::to_string(*a) +
                              " lies beyond the set limit; rebuild with more headroom");
    if (*b - *a > r.gamma)
      r = {x, *b - *a, *a, *b};
    a = b;
  }
  return r;
}

/// Every n <= limit whose resolution (h, d) has 6 d^3 > h, increasing.
inline std::vector<std::uint64_t> exceptional_orders(const OrderSet& set, std::uint64_t limit) {
  if (limit > set.limit())
    throw std::out_of_range("exceptional_orders: limit exceeds the set limit");
  std::vector<std::uint64_t> out;
  std::uint64_t h = 0;
  for (std::uint64_t n = 1; n <= limit; ++n) {
    if (set.contains(n))
      h = n;
    if (h == 0)
      continue;
    const std::uint64_t d = n - h;
    if (6 * d * d * d > h)
      out.push_back(n);
  }
  return out;
}

/// Gap-growth exponent alpha / (1 + alpha) for orders 2^t q with t >= alpha log2 q + beta.
inline double gap_exponent(double alpha) {
  if (!(alpha > 0))
    throw std::invalid_argument("gap_exponent: alpha must be positive");
  return alpha / (1 + alpha);
}

// Sieve cache: "HADSIEVE1", u64 LE limit, one flag byte (bit 0: order 1,
// bit 1: order 2), then floor(limit/4)+1 bits, bit i <-> order 4i, packed
// little-endian within and across bytes.
inline constexpr char sieve_magic[] = "HADSIEVE1";

inline void write_sieve_cache(std::ostream& out, const OrderSet& set) {
  out.write(sieve_magic, 9);
  std::uint64_t limit = set.limit();
  for (int i = 0; i < 8; ++i)
    out.put(static_cast<char>((limit >> (8 * i)) & 0xff));
  out.put(static_cast<char>((set.contains(1) ? 1 : 0) | (set.contains(2) ? 2 : 0)));
  const std::uint64_t nbits = limit / 4 + 1;
  const std::uint64_t nbytes = (nbits + 7) / 8;
  const auto& w = set.words();
  for (std::uint64_t b = 0; b < nbytes; ++b)
    out.put(static_cast<char>((w[b / 8] >> (8 * (b % 8))) & 0xff));
  if (!out)
    throw std::runtime_error("write_sieve_cache: write failed");
}

inline OrderSet read_sieve_cache(std::istream& in) {
  char magic[9];
  if (!in.read(magic, 9) || std::memcmp(magic, sieve_magic, 9) != 0)
    throw std::runtime_error("read_sieve_cache: bad magic");
  std::uint64_t limit = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = in.get();
    if (c == EOF)
      throw std::runtime_error("read_sieve_cache: truncated header");
    limit |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  const int flags = in.get();
  if (flags == EOF)
    throw std::runtime_error("read_sieve_cache: truncated header");
  if (limit < 4)
    throw std::runtime_error("read_sieve_cache: limit below 4");
  const std::uint64_t nbits = limit / 4 + 1;
  const std::uint64_t nbytes = (nbits + 7) / 8;
  std::vector<std::uint64_t> words((limit / 4) / 64 + 1, 0);
  for (std::uint64_t b = 0; b < nbytes; ++b) {
    const int c = in.get();
    if (c == EOF)
      throw std::runtime_error("read_sieve_cache: truncated bitset");
    words[b / 8] |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * (b % 8));
  }
  return OrderSet::from_raw(limit, flags & 1, flags & 2, std::move(words));
}

inline void save_sieve_cache(const std::string& path, const OrderSet& set) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open " + path + " for writing");
  write_sieve_cache(out, set);
}

inline OrderSet load_sieve_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  return read_sieve_cache(in);
}

}  // namespace maxdet
