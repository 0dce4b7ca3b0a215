#pragma once

// Exact integer matrices, fraction-free determinants and log-scale scalars.

#include <gmpxx.h>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace maxdet {

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix with entries in {-1, +1}.
class SignMatrix {
public:
  SignMatrix() = default;

  /// All entries +1.
  SignMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 1) {}

  SignMatrix(std::size_t rows, std::size_t cols, std::vector<std::int8_t> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw dimension_error("SignMatrix: entry count does not match shape");
    for (auto v : data_)
      if (v != 1 && v != -1)
        throw std::invalid_argument("SignMatrix: entries must be -1 or +1");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  void set(std::size_t i, std::size_t j, int v) {
    if (v != 1 && v != -1)
      throw std::invalid_argument("SignMatrix: entries must be -1 or +1");
    data_[i * cols_ + j] = static_cast<std::int8_t>(v);
  }

  void flip(std::size_t i, std::size_t j) { data_[i * cols_ + j] = static_cast<std::int8_t>(-data_[i * cols_ + j]); }

  const std::vector<std::int8_t>& data() const { return data_; }

  SignMatrix transposed() const {
    SignMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        t.data_[j * rows_ + i] = data_[i * cols_ + j];
    return t;
  }

  friend bool operator==(const SignMatrix&, const SignMatrix&) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int8_t> data_;
};

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  IntMatrix(std::size_t rows, std::size_t cols, std::vector<mpz_class> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw dimension_error("IntMatrix: entry count does not match shape");
  }

  IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw dimension_error("IntMatrix: ragged initializer");
      for (long v : r)
        data_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  static IntMatrix from_signs(const SignMatrix& s) {
    IntMatrix m(s.rows(), s.cols());
    for (std::size_t i = 0; i < s.rows(); ++i)
      for (std::size_t j = 0; j < s.cols(); ++j)
        m(i, j) = s(i, j);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  mpz_class& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const mpz_class& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<mpz_class> data_;
};

inline IntMatrix matmul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows())
    throw dimension_error("matmul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " +
                          std::to_string(b.rows()) + ")");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const mpz_class& aik = a(i, k);
      if (aik == 0)
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) += aik * b(k, j);
    }
  return c;
}

namespace detail {

inline void exact_divide(mpz_class& x, const mpz_class& d) { mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t()); }

template <class T>
void exact_divide(T& x, const T& d) {
  x /= d;
}

}  // namespace detail

/// Bareiss fraction-free elimination on a row-major n x n buffer, destroyed in place.
/// Every intermediate is a minor of the input, so T only has to hold values
/// bounded by the largest minor.
template <class T>
T bareiss_determinant(std::vector<T>& a, std::size_t n) {
  if (a.size() != n * n)
    throw dimension_error("bareiss_determinant: buffer is not n x n");
  if (n == 0)
    return T(1);
  int sign = 1;
  T prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0)
        ++r;
      if (r == n)
        return T(0);
      for (std::size_t j = k; j < n; ++j)
        std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    const T pivot = a[k * n + k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const T aik = a[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j) {
        T& x = a[i * n + j];
        x = x * pivot - aik * a[k * n + j];
        detail::exact_divide(x, prev);
      }
    }
    prev = pivot;
  }
  T det = a[n * n - 1];
  if (sign < 0)
    det = -det;
  return det;
}

inline mpz_class det_exact(const IntMatrix& m) {
  if (m.rows() != m.cols())
    throw dimension_error("det_exact: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  std::vector<mpz_class> buf;
  buf.reserve(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      buf.push_back(m(i, j));
  return bareiss_determinant(buf, m.rows());
}

/// Natural log of |x|; x must be nonzero.
inline double log_abs(const mpz_class& x) {
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

/// Signed real stored as sign and natural log of the magnitude.
struct LogScalar {
  int sign = 0;          // -1, 0 or +1
  double log_abs = 0.0;  // meaningless when sign == 0

  static LogScalar zero() { return {}; }
  static LogScalar one() { return {1, 0.0}; }

  static LogScalar from_log(double log_magnitude, int s = 1) { return {s, log_magnitude}; }

  static LogScalar from_double(double x) {
    if (x == 0.0)
      return {};
    return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
  }

  static LogScalar from_integer(const mpz_class& x) {
    const int s = sgn(x);
    if (s == 0)
      return {};
    return {s, maxdet::log_abs(x)};
  }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  LogScalar abs() const { return {sign == 0 ? 0 : 1, log_abs}; }

  friend LogScalar operator*(const LogScalar& a, const LogScalar& b) {
    if (a.sign == 0 || b.sign == 0)
      return {};
    return {a.sign * b.sign, a.log_abs + b.log_abs};
  }

  friend LogScalar operator/(const LogScalar& a, const LogScalar& b) {
    if (b.sign == 0)
      throw std::domain_error("LogScalar: division by zero");
    if (a.sign == 0)
      return {};
    return {a.sign * b.sign, a.log_abs - b.log_abs};
  }

  /// Total order on the represented reals.
  friend bool operator<(const LogScalar& a, const LogScalar& b) {
    if (a.sign != b.sign)
      return a.sign < b.sign;
    if (a.sign == 0)
      return false;
    return a.sign > 0 ? a.log_abs < b.log_abs : a.log_abs > b.log_abs;
  }
  friend bool operator>(const LogScalar& a, const LogScalar& b) { return b < a; }

  friend bool operator==(const LogScalar& a, const LogScalar& b) {
    return a.sign == b.sign && (a.sign == 0 || a.log_abs == b.log_abs);
  }
};

/// Divides by the Hadamard bound n^{n/2}: log_abs - (n/2) ln n, sign kept.
inline LogScalar normalized_ratio(const LogScalar& det, std::size_t n) {
  if (n == 0)
    throw std::invalid_argument("normalized_ratio: n must be >= 1");
  if (det.sign == 0)
    return {};
  const double nd = static_cast<double>(n);
  return {det.sign, det.log_abs - 0.5 * nd * std::log(nd)};
}

}  // namespace maxdet
