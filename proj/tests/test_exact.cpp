#include "maxdet/exact.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace maxdet;

namespace {

// Laplace expansion along the first row.
mpz_class cofactor_det(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0)
    return 1;
  if (n == 1)
    return a(0, 0);
  mpz_class det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c)
          minor(i - 1, jj++) = a(i, j);
    const mpz_class term = a(0, c) * cofactor_det(minor);
    det += (c % 2 == 0) ? term : mpz_class(-term);
  }
  return det;
}

IntMatrix random_int_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi) {
  std::uniform_int_distribution<long> dist(lo, hi);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST(DetExact, SmallFixedValues) {
  EXPECT_EQ(det_exact(IntMatrix{{1, 1}, {1, -1}}), -2);
  EXPECT_EQ(det_exact(IntMatrix{{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(det_exact(IntMatrix{{1, 2}, {2, 4}}), 0);
  EXPECT_EQ(det_exact(IntMatrix{{0, 1}, {1, 0}}), -1);
}

TEST(DetExact, SylvesterH4IsSixteen) {
  IntMatrix h4{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  EXPECT_EQ(abs(det_exact(h4)), 16);
}

TEST(DetExact, NeedsPivotSwap) {
  IntMatrix a{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}};
  EXPECT_EQ(det_exact(a), -1);
}

TEST(DetExact, NonSquareThrows) { EXPECT_THROW(det_exact(IntMatrix(2, 3)), dimension_error); }

TEST(DetExact, EmptyMatrixIsOne) { EXPECT_EQ(det_exact(IntMatrix(0, 0)), 1); }

TEST(DetExact, AgreesWithCofactorExpansion) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 7;
    const IntMatrix a = random_int_matrix(rng, n, n, -3, 3);
    EXPECT_EQ(det_exact(a), cofactor_det(a)) << "trial " << t;
  }
}

TEST(DetExact, SingularRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    IntMatrix a = random_int_matrix(rng, 5, 5, -4, 4);
    for (std::size_t j = 0; j < 5; ++j)
      a(4, j) = a(0, j) + 2 * a(2, j);
    EXPECT_EQ(det_exact(a), 0);
  }
}

TEST(DetExact, LargeEntriesStayExact) {
  IntMatrix a(3, 3);
  const mpz_class big("123456789012345678901234567890");
  a(0, 0) = big;
  a(1, 1) = big;
  a(2, 2) = big;
  a(0, 2) = 1;
  EXPECT_EQ(det_exact(a), big * big * big);
}

TEST(Bareiss, Int64MatchesMpz) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + t % 5;
    const IntMatrix a = random_int_matrix(rng, n, n, -1, 1);
    std::vector<std::int64_t> buf;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        buf.push_back(a(i, j).get_si());
    EXPECT_EQ(mpz_class(static_cast<long>(bareiss_determinant(buf, n))), det_exact(a));
  }
}

TEST(Matmul, AgreesWithSchoolbook) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    const IntMatrix a = random_int_matrix(rng, 3 + t % 3, 4, -5, 5);
    const IntMatrix b = random_int_matrix(rng, 4, 2 + t % 4, -5, 5);
    const IntMatrix c = matmul(a, b);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) {
        mpz_class s = 0;
        for (std::size_t k = 0; k < 4; ++k)
          s += a(i, k) * b(k, j);
        EXPECT_EQ(c(i, j), s);
      }
  }
}

TEST(Matmul, DimensionMismatchThrows) { EXPECT_THROW(matmul(IntMatrix(2, 3), IntMatrix(2, 3)), dimension_error); }

TEST(Matmul, IdentityIsNeutral) {
  const IntMatrix a{{1, -2, 3}, {4, 5, -6}};
  EXPECT_EQ(matmul(a, IntMatrix::identity(3)), a);
  EXPECT_EQ(matmul(IntMatrix::identity(2), a), a);
}

TEST(SignMatrix, RejectsNonSignEntries) {
  EXPECT_THROW(SignMatrix(1, 2, {1, 0}), std::invalid_argument);
  EXPECT_THROW(SignMatrix(1, 2, {1}), dimension_error);
  SignMatrix s(2, 2);
  EXPECT_THROW(s.set(0, 0, 2), std::invalid_argument);
}

TEST(SignMatrix, TransposeAndFlip) {
  SignMatrix s(2, 3);
  s.flip(0, 2);
  const SignMatrix t = s.transposed();
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t(2, 0), -1);
  EXPECT_EQ(t(0, 0), 1);
}

TEST(LogScalar, ProductsAndQuotients) {
  const LogScalar a = LogScalar::from_double(-3.0), b = LogScalar::from_double(4.0);
  EXPECT_NEAR((a * b).value(), -12.0, 1e-12);
  EXPECT_NEAR((b / a).value(), -4.0 / 3.0, 1e-12);
  EXPECT_EQ((a * LogScalar::zero()).sign, 0);
  EXPECT_THROW(a / LogScalar::zero(), std::domain_error);
}

TEST(LogScalar, OrderingAcrossSigns) {
  const auto neg = LogScalar::from_double(-2), zero = LogScalar::zero(), small = LogScalar::from_double(0.5),
             big = LogScalar::from_double(10);
  EXPECT_TRUE(neg < zero);
  EXPECT_TRUE(zero < small);
  EXPECT_TRUE(small < big);
  EXPECT_TRUE(LogScalar::from_double(-10) < neg);
  EXPECT_FALSE(big < big);
}

TEST(LogScalar, HugeIntegersDoNotOverflow) {
  mpz_class x;
  mpz_ui_pow_ui(x.get_mpz_t(), 3, 100000);
  const LogScalar l = LogScalar::from_integer(x);
  EXPECT_EQ(l.sign, 1);
  EXPECT_NEAR(l.log_abs, 100000 * std::log(3.0), 1e-6);
  EXPECT_EQ(LogScalar::from_integer(-x).sign, -1);
}

TEST(NormalizedRatio, HadamardBoundGivesOne) {
  EXPECT_NEAR(normalized_ratio(LogScalar::from_integer(16), 4).value(), 1.0, 1e-12);
  EXPECT_NEAR(normalized_ratio(LogScalar::from_integer(48), 5).value(), 48 / std::pow(5.0, 2.5), 1e-12);
  EXPECT_THROW(normalized_ratio(LogScalar::one(), 0), std::invalid_argument);
}
