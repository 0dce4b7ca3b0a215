#include "maxdet/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

using namespace maxdet;

namespace {

// Unnormalized exhaustive search with cofactor expansion.
long brute_maxdet(unsigned n) {
  long best = 0;
  const unsigned bits = n * n;
  std::vector<long> a(bits);
  auto det = [&](auto&& self, std::vector<unsigned> rows, std::vector<unsigned> cols) -> long {
    if (rows.size() == 1)
      return a[rows[0] * n + cols[0]];
    long s = 0;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<unsigned> r2(rows.begin() + 1, rows.end()), c2;
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (k != c)
          c2.push_back(cols[k]);
      const long t = a[rows[0] * n + cols[c]] * self(self, r2, c2);
      s += (c % 2 == 0) ? t : -t;
    }
    return s;
  };
  std::vector<unsigned> idx(n);
  for (unsigned i = 0; i < n; ++i)
    idx[i] = i;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
    for (unsigned b = 0; b < bits; ++b)
      a[b] = ((mask >> b) & 1U) ? -1 : 1;
    best = std::max(best, std::labs(det(det, idx, idx)));
  }
  return best;
}

bool slow_enabled() {
  const char* v = std::getenv("MAXDET_SLOW");
  return v && *v && std::string(v) != "0";
}

}  // namespace

TEST(GOfH, ExactValues) {
  EXPECT_EQ(g_of_h(4), mpq_class(5, 2));
  EXPECT_EQ(g_of_h(2), mpq_class(2));
  EXPECT_EQ(g_of_h(8), mpq_class(51, 16));  // 1 + 8 * 70 / 256
}

TEST(GOfH, RejectsOddOrSmall) {
  EXPECT_THROW(g_of_h(3), std::invalid_argument);
  EXPECT_THROW(g_of_h(0), std::invalid_argument);
}

TEST(GOfH, SquareRootLowerBound) {
  for (std::uint64_t h = 4; h <= 400; h += 2) {
    const double g = g_of_h(h).get_d();
    EXPECT_GT(g, c_const * std::sqrt(static_cast<double>(h)) + 0.9) << h;
    EXPECT_NEAR(g, g_of_h_double(static_cast<double>(h)), 1e-9 * g);
  }
  EXPECT_GT(2.5, 0.79788 * 2 + 0.9);
}

TEST(GOfH, CentralBinomialBound) {
  for (unsigned h = 2; h <= 200; h += 2) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), h, h / 2);
    const double lb = std::pow(2.0, h) * std::sqrt(2 / (std::numbers::pi * h)) * (1 - 1.0 / (4 * h));
    EXPECT_GT(b.get_d(), lb) << h;
  }
  EXPECT_NEAR(16 * std::sqrt(2 / (4 * std::numbers::pi)) * (1 - 1.0 / 16), 5.9841, 1e-4);
}

TEST(H0, Values) {
  EXPECT_NEAR(h0(1), 19.4204, 1e-3);
  EXPECT_NEAR(h0(3), 187.77, 0.01);
  for (unsigned d = 1; d < 10; ++d)
    EXPECT_LT(h0(d), h0(d + 1));
  EXPECT_THROW(h0(0), std::invalid_argument);
}

TEST(BoundContext, Fields) {
  const auto ctx = BoundContext::make(657, 656, 1);
  EXPECT_NEAR(ctx.epsilon, std::sqrt(4 * std::log(656.0) / 656), 1e-15);
  EXPECT_NEAR(ctx.epsilon, 0.19887, 1e-5);
  EXPECT_NEAR(ctx.delta, 6.0 / 656, 1e-15);
  EXPECT_GT(ctx.c, 0.79788);
  EXPECT_LT(ctx.c, 0.79789);
  EXPECT_THROW(BoundContext::make(10, 8, 1), std::invalid_argument);
}

TEST(EvaluateBounds, SmallDConstant) {
  const double v = std::pow(2 / (std::numbers::pi * std::exp(1.0)), 1.5);
  EXPECT_GT(v, 0.1133);
  EXPECT_LT(v, 0.1134);
  const auto r = evaluate_bounds(15, 12, 3);
  EXPECT_NEAR(r.at("small_d_dbar").value->value(), v, 1e-15);
}

TEST(EvaluateBounds, ModerateDSpotValues) {
  const auto r = evaluate_bounds(657, 656, 1);
  const auto& t2 = r.at("moderate_d");
  ASSERT_TRUE(t2.applicable);
  EXPECT_NEAR(t2.value->value(), 0.50399, 1e-5);
  EXPECT_NEAR(t2.value->value(), 0.79788456 * std::exp(-0.45941), 1e-5);
  EXPECT_FALSE(evaluate_bounds(658, 656, 2).at("moderate_d").applicable);
  EXPECT_GT(16.0 * 8, 656 / std::log(656.0));
  EXPECT_NEAR(656 / std::log(656.0), 101.1, 0.05);
}

TEST(EvaluateBounds, UniformBoundBeatsPowerOfThree) {
  for (unsigned d = 0; d <= 50; ++d) {
    const auto r = evaluate_bounds(1000 + d, 1000, d);
    EXPECT_GT(r.at("uniform").value->log_abs, -(d + 3.0) * std::log(3.0)) << d;
  }
}

TEST(EvaluateBounds, ApplicabilityFlags) {
  auto r = evaluate_bounds(20, 20, 0);
  EXPECT_TRUE(r.at("hadamard").applicable);
  EXPECT_FALSE(r.at("large_h").applicable);
  EXPECT_FALSE(r.at("cubic_d").applicable);
  r = evaluate_bounds(21, 20, 1);
  EXPECT_TRUE(r.at("large_h").applicable);  // h0(1) ~ 19.42
  EXPECT_TRUE(r.at("small_d").applicable);
  r = evaluate_bounds(19, 16, 3);
  EXPECT_FALSE(r.at("large_h").applicable);
  EXPECT_TRUE(r.at("small_d").applicable);
  r = evaluate_bounds(670, 664, 6);
  EXPECT_FALSE(r.at("cubic_d").applicable);  // 6 * 216 > 664
  EXPECT_FALSE(r.at("small_d").applicable);
  EXPECT_TRUE(r.at("uniform").applicable);
  r = evaluate_bounds(60480 + 5, 60480, 5);
  EXPECT_TRUE(r.at("moderate_d").applicable);  // 2000 <= 60480 / ln 60480 ~ 5492
  r = evaluate_bounds(60480 + 8, 60480, 8);
  EXPECT_TRUE(r.at("cubic_d").applicable);
  EXPECT_FALSE(r.at("moderate_d").applicable);  // 8192 > 5492
  r = evaluate_bounds(20001, 20000, 1);
  EXPECT_TRUE(r.at("moderate_d").applicable);
  EXPECT_TRUE(r.at("moderate_d_dbar").applicable);
}

TEST(EvaluateBounds, InapplicableHasNoValue) {
  for (const auto& e : evaluate_bounds(670, 664, 6).entries)
    EXPECT_EQ(e.applicable, e.value.has_value()) << e.name;
}

TEST(EvaluateBounds, DbarValuesInUnitInterval) {
  for (std::uint64_t h : {4, 12, 20, 656, 1000, 20000, 60480})
    for (std::uint64_t d = 0; d <= 6; ++d)
      for (const auto& e : evaluate_bounds(h + d, h, d).entries)
        if (e.applicable && e.target == BoundTarget::Dbar) {
          EXPECT_GT(e.value->value(), 0.0) << e.name;
          EXPECT_LE(e.value->value(), 1.0) << e.name;
        }
}

TEST(EvaluateBounds, StrengthOrdering) {
  for (std::uint64_t h : {656, 1000, 5000, 20000, 60480})
    for (std::uint64_t d = 1; d <= 3; ++d) {
      const auto r = evaluate_bounds(h + d, h, d);
      // The large-h bound read on D(n)/h^{n/2} is (2n/(pi h))^{d/2}.
      if (r.at("moderate_d").applicable && r.at("large_h").applicable) {
        const double t1 = 0.5 * d * std::log(2.0 * (h + d) / (std::numbers::pi * h));
        EXPECT_LT(r.at("moderate_d").value->log_abs, t1);
      }
      EXPECT_LT(r.at("uniform").value->log_abs, r.at("small_d_dbar").value->log_abs);
    }
}

TEST(EvaluateBounds, Mismatch) { EXPECT_THROW(evaluate_bounds(10, 8, 1), std::invalid_argument); }

TEST(KappaBounds, Values) {
  const auto k = kappa_upper_bounds();
  EXPECT_LT(k[0].value, 0.7284);
  EXPECT_NEAR(k[1].value, 2 / std::exp(1.0), 1e-15);
  EXPECT_LT(k[1].value, 0.7358);
  EXPECT_LT(k[2].value, 0.6135);
  for (unsigned d = 1; d <= 3; ++d)
    EXPECT_GT(k[d - 1].value, std::pow(2 / (std::numbers::pi * std::exp(1.0)), d / 2.0));
}

TEST(MaxdetOracle, SmallOrders) {
  EXPECT_EQ(maxdet_oracle(1), 1);
  EXPECT_EQ(maxdet_oracle(2), 2);
  EXPECT_EQ(maxdet_oracle(3), 4);
  EXPECT_EQ(maxdet_oracle(4), 16);
  EXPECT_EQ(maxdet_oracle(5), 48);
}

TEST(MaxdetOracle, AgreesWithUnnormalizedSearch) {
  for (unsigned n = 1; n <= 4; ++n)
    EXPECT_EQ(maxdet_oracle(n), brute_maxdet(n)) << n;
}

TEST(MaxdetOracle, ThreadedAgrees) { EXPECT_EQ(maxdet_oracle(5, 3), 48); }

TEST(MaxdetOracle, RangeErrors) {
  EXPECT_THROW(maxdet_oracle(0), std::invalid_argument);
  EXPECT_THROW(maxdet_oracle(7), std::invalid_argument);
}

TEST(MaxdetOracle, OrderSix) {
  if (!slow_enabled())
    GTEST_SKIP() << "set MAXDET_SLOW=1";
  EXPECT_EQ(maxdet_oracle(6, 4), 160);
}
