#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace maxdet {

inline bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  if (n % 2 == 0)
    return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0)
      return false;
  return true;
}

/// Eratosthenes sieve up to `limit` with a derived prime-power table.
class PrimeTable {
public:
  explicit PrimeTable(std::size_t limit) : limit_(limit), prime_(limit + 1, true), prime_power_(limit + 1, false) {
    prime_[0] = false;
    if (limit >= 1)
      prime_[1] = false;
    for (std::size_t i = 2; i * i <= limit; ++i)
      if (prime_[i])
        for (std::size_t j = i * i; j <= limit; j += i)
          prime_[j] = false;
    for (std::size_t p = 2; p <= limit; ++p) {
      if (!prime_[p])
        continue;
      for (std::size_t q = p;; q *= p) {
        prime_power_[q] = true;
        if (q > limit / p)
          break;
      }
    }
  }

  std::size_t limit() const { return limit_; }
  bool prime(std::size_t n) const { return n <= limit_ && prime_[n]; }
  /// p^k with p prime and k >= 1.
  bool prime_power(std::size_t n) const { return n <= limit_ && prime_power_[n]; }

private:
  std::size_t limit_;
  std::vector<bool> prime_;
  std::vector<bool> prime_power_;
};

/// Quadratic character of GF(p) as a table indexed by residue: 0, +1 or -1.
inline std::vector<std::int8_t> quadratic_character(std::uint32_t p) {
  std::vector<std::int8_t> chi(p, -1);
  chi[0] = 0;
  for (std::uint64_t x = 1; x < p; ++x)
    chi[(x * x) % p] = 1;
  return chi;
}

}  // namespace maxdet
