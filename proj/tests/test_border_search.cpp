#include "maxdet/border_search.hpp"
#include "maxdet/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace maxdet;

namespace {

mpq_class exact(const mpz_class& num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

QuasiOrthogonal hadamard(std::size_t m) { return plan_hadamard(m)->build(); }

IntMatrix dense(const SignMatrix& s) { return IntMatrix::from_signs(s); }

IntMatrix transpose(const IntMatrix& a) {
  IntMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      t(j, i) = a(i, j);
  return t;
}

SignMatrix random_signs(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  SignMatrix s(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (rng() & 1U)
        s.flip(i, j);
  return s;
}

mpz_class det_plus_k(const IntMatrix& g, std::int64_t k) {
  IntMatrix a = g;
  for (std::size_t i = 0; i < g.rows(); ++i)
    a(i, i) += static_cast<long>(k);
  return det_exact(a);
}

}  // namespace

TEST(SampleBorderColumns, Deterministic) {
  TrialStream a(42, 7), b(42, 7), c(42, 8);
  const auto x = sample_border_columns(a, 10, 3);
  EXPECT_EQ(x, sample_border_columns(b, 10, 3));
  EXPECT_FALSE(x == sample_border_columns(c, 10, 3));
}

TEST(SampleBorderColumns, RejectsEmptyShapes) {
  TrialStream s(0, 0);
  EXPECT_THROW(sample_border_columns(s, 0, 1), std::invalid_argument);
  EXPECT_THROW(sample_border_columns(s, 1, 0), std::invalid_argument);
}

TEST(SampleBorderColumns, MeanNearZero) {
  double sum = 0;
  const int samples = 100000;
  for (int t = 0; t < samples / 10; ++t) {
    TrialStream s(1, t);
    const auto b = sample_border_columns(s, 10, 1);
    for (std::size_t i = 0; i < 10; ++i)
      sum += b(i, 0);
  }
  EXPECT_NEAR(sum / samples, 0.0, 0.02);
}

TEST(SampleBorderColumns, SixteenColumnsEquiprobable) {
  std::map<int, int> freq;
  const int samples = 100000;
  for (int t = 0; t < samples; ++t) {
    TrialStream s(3, t);
    const auto b = sample_border_columns(s, 4, 1);
    int key = 0;
    for (std::size_t i = 0; i < 4; ++i)
      key = 2 * key + (b(i, 0) < 0);
    ++freq[key];
  }
  ASSERT_EQ(freq.size(), 16u);
  for (auto [k, f] : freq)
    EXPECT_NEAR(static_cast<double>(f) / samples, 1.0 / 16, 0.01) << k;
}

TEST(SignCompletion, MatchesDenseProduct) {
  std::mt19937_64 rng(1);
  for (auto q : {hadamard(12), paley_conference(13), hadamard(64)}) {
    const SignMatrix b = random_signs(rng, q.order(), 3);
    const SignMatrix c = sign_completion(b, q);
    const IntMatrix bq = matmul(transpose(dense(b)), q.to_int_matrix());
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t l = 0; l < q.order(); ++l)
        ASSERT_EQ(c(i, l), bq(i, l) >= 0 ? 1 : -1);
  }
}

TEST(SignCompletion, ZeroMapsToPlusOne) {
  const auto q = hadamard(4);
  int zeros = 0;
  for_each_border(4, 1, [&](const SignMatrix& b) {
    const auto bq = border_products(b, q);
    const auto c = sign_completion(b, q);
    for (std::size_t l = 0; l < 4; ++l)
      if (bq[l] == 0) {
        ++zeros;
        EXPECT_EQ(c(0, l), 1);
      }
  });
  EXPECT_GT(zeros, 0);
}

TEST(SignCompletion, RowDependsOnlyOnItsColumn) {
  std::mt19937_64 rng(2);
  const auto q = hadamard(16);
  SignMatrix b = random_signs(rng, 16, 3);
  const auto before = sign_completion(b, q);
  for (std::size_t i = 0; i < 16; ++i)
    b.flip(i, 1);
  const auto after = sign_completion(b, q);
  for (std::size_t l = 0; l < 16; ++l) {
    EXPECT_EQ(before(0, l), after(0, l));
    EXPECT_EQ(before(2, l), after(2, l));
  }
}

TEST(SignCompletion, FirstColumnOfH4) {
  const auto q = hadamard(4);
  SignMatrix b(4, 1);
  for (std::size_t i = 0; i < 4; ++i)
    b.set(i, 0, q(i, 0));
  const auto c = sign_completion(b, q);
  const auto g = gram_block(q, b, c);
  long abs_sum = 0;
  for (auto v : border_products(b, q))
    abs_sum += std::labs(v);
  EXPECT_EQ(g(0, 0), abs_sum);
  EXPECT_GE(g(0, 0), 0);
}

TEST(GramBlock, MatchesSchoolbookTripleProduct) {
  std::mt19937_64 rng(4);
  for (auto q : {hadamard(8), hadamard(20), paley_conference(17), paley_conference(5)}) {
    const SignMatrix b = random_signs(rng, q.order(), 4);
    const SignMatrix c = sign_completion(b, q);
    const IntMatrix g = gram_block(q, b, c);
    const IntMatrix expect = matmul(matmul(dense(c), transpose(q.to_int_matrix())), dense(b));
    EXPECT_EQ(g, expect) << q.recipe();
  }
}

TEST(GramBlock, ShapeErrors) {
  const auto q = hadamard(8);
  EXPECT_THROW(gram_block(q, SignMatrix(7, 2), SignMatrix(2, 8)), dimension_error);
  EXPECT_THROW(gram_block(q, SignMatrix(8, 2), SignMatrix(3, 8)), dimension_error);
}

TEST(GramBlock, ExhaustiveDiagonalRangeAtH4) {
  const auto q = hadamard(4);
  for_each_border(4, 1, [&](const SignMatrix& b) {
    const auto g = gram_block(q, b, sign_completion(b, q));
    EXPECT_GE(g(0, 0), 0);
    EXPECT_LE(g(0, 0), 8);
  });
}

TEST(GramBlock, RowNormsOfCQt) {
  std::mt19937_64 rng(5);
  for (auto q : {hadamard(4), hadamard(8), hadamard(12), paley_conference(5)}) {
    const SignMatrix b = random_signs(rng, q.order(), 2);
    const IntMatrix cq = matmul(dense(sign_completion(b, q)), transpose(q.to_int_matrix()));
    for (std::size_t i = 0; i < 2; ++i) {
      mpz_class s = 0;
      for (std::size_t j = 0; j < q.order(); ++j)
        s += cq(i, j) * cq(i, j);
      EXPECT_EQ(s, q.weight() * static_cast<long>(q.order())) << q.recipe();
    }
  }
}

TEST(GreedyComplete, DEqualsOne) {
  IntMatrix g{{5}};
  const auto r = greedy_complete(g, 8);
  EXPECT_EQ(r.D(0, 0), -1);
  EXPECT_EQ(r.det_N, 13);
}

TEST(GreedyComplete, ZeroGram) {
  const auto r = greedy_complete(IntMatrix(2, 2), 1);
  EXPECT_GE(abs(r.det_N), 1);
  EXPECT_EQ(r.D(0, 0), -1);
  EXPECT_EQ(r.D(1, 1), -1);
}

TEST(GreedyComplete, DetMatchesFinalMatrix) {
  std::mt19937_64 rng(6);
  const auto q = hadamard(8);
  for (int t = 0; t < 200; ++t) {
    const SignMatrix b = random_signs(rng, 8, 3);
    const IntMatrix g = gram_block(q, b, sign_completion(b, q));
    for (auto order : {GreedyOrder::row_major, GreedyOrder::column_major}) {
      const auto r = greedy_complete(g, 8, order);
      IntMatrix n = g;
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          n(i, j) -= 8 * r.D(i, j);
      ASSERT_EQ(det_exact(n), r.det_N);
    }
  }
}

TEST(GreedyComplete, GuaranteeOverRandomTrials) {
  const auto q = hadamard(8);
  for (std::uint64_t t = 0; t < 10000; ++t) {
    TrialStream s(9, t);
    const SignMatrix b = sample_border_columns(s, 8, 3);
    const IntMatrix g = gram_block(q, b, sign_completion(b, q));
    const auto r = greedy_complete(g, 8);
    ASSERT_GE(abs(r.det_N), abs(det_plus_k(g, 8))) << t;
  }
}

TEST(GreedyComplete, SignedObjectiveNeverDecreasesDet) {
  const auto q = hadamard(12);
  for (std::uint64_t t = 0; t < 2000; ++t) {
    TrialStream s(10, t);
    const SignMatrix b = sample_border_columns(s, 12, 4);
    const IntMatrix g = gram_block(q, b, sign_completion(b, q));
    const auto r = greedy_complete(g, 12, GreedyOrder::row_major, true);
    ASSERT_GE(r.det_N, det_plus_k(g, 12)) << t;
  }
}

TEST(GreedyPositions, Orders) {
  using P = std::pair<std::size_t, std::size_t>;
  EXPECT_EQ(greedy_positions(3, GreedyOrder::row_major),
            (std::vector<P>{{0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}));
  EXPECT_EQ(greedy_positions(3, GreedyOrder::column_major),
            (std::vector<P>{{1, 0}, {2, 0}, {0, 1}, {2, 1}, {0, 2}, {1, 2}}));
}

TEST(RunTrial, HadamardWidthZeroIsOne) {
  const auto r = run_trial(hadamard(8), 0, 0);
  EXPECT_NEAR(r.ratio.value(), 1.0, 1e-12);
}

TEST(RunTrial, ConferenceWidthZero) {
  const auto r = run_trial(paley_conference(5), 0, 0);
  EXPECT_NEAR(r.ratio.value(), 125.0 / 216.0, 1e-12);
}

TEST(RunTrial, RatioMatchesFormula) {
  const auto q = hadamard(12);
  const auto r = run_trial(q, 3, 17);
  const double expect =
      6 * std::log(12.0) + log_abs(r.border.det_N) - 3 * std::log(12.0) - 7.5 * std::log(15.0);
  EXPECT_NEAR(r.ratio.log_abs, expect, 1e-12);
}

TEST(ExhaustiveSearch, H4WidthOneMatchesOracle) {
  const auto best = exhaustive_search(hadamard(4), 1);
  const std::int64_t d5 = maxdet_oracle(5);
  EXPECT_EQ(d5, 48);
  // |det| = k^{m/2} |det N| / k^d.
  EXPECT_EQ(best.border.det_N * 16, d5 * 4);
  EXPECT_NEAR(best.ratio.value(), 48 / std::pow(5.0, 2.5), 1e-12);
  EXPECT_NEAR(best.ratio.value(), 0.858650, 1e-6);
}

TEST(ExhaustiveSearch, MeanDiagonalSchurEntryAtH4) {
  // Sum of G11 over all 16 columns equals h * 16 * (g(4) - 1).
  const auto q = hadamard(4);
  mpz_class sum = 0;
  for_each_border(4, 1, [&](const SignMatrix& b) { sum += gram_block(q, b, sign_completion(b, q))(0, 0); });
  const mpq_class mean_f11 = exact(sum, 16 * 4);
  EXPECT_EQ(mean_f11, mpq_class(3, 2));
  EXPECT_EQ(mean_f11, g_of_h(4) - 1);
}

TEST(ExhaustiveSearch, MeanDiagonalSchurEntryAtH8) {
  const auto q = hadamard(8);
  mpz_class sum = 0;
  for_each_border(8, 1, [&](const SignMatrix& b) { sum += gram_block(q, b, sign_completion(b, q))(0, 0); });
  EXPECT_EQ(exact(sum, 256 * 8), g_of_h(8) - 1);
}

TEST(ExhaustiveSearch, OffDiagonalSecondMomentAtH4) {
  const auto q = hadamard(4);
  mpz_class sum = 0;
  for_each_border(4, 2, [&](const SignMatrix& b) {
    const auto g = gram_block(q, b, sign_completion(b, q));
    sum += g(0, 1) * g(0, 1);
  });
  EXPECT_EQ(exact(sum, 256 * 16), 1);
}

TEST(Search, SingleTrialEqualsRunTrial) {
  const auto q = hadamard(12);
  SearchConfig cfg;
  cfg.trials = 1;
  cfg.master_seed = 5;
  const auto a = search(q, 2, cfg);
  const auto b = run_trial(q, 2, 0, cfg);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.border.B, b.border.B);
}

TEST(Search, IndependentOfThreadCount) {
  const auto q = hadamard(20);
  SearchConfig cfg;
  cfg.trials = 200;
  cfg.master_seed = 77;
  cfg.threads = 1;
  const auto a = search(q, 3, cfg);
  cfg.threads = 4;
  const auto b = search(q, 3, cfg);
  EXPECT_EQ(a.trial_index, b.trial_index);
  EXPECT_EQ(a.ratio, b.ratio);
  EXPECT_EQ(a.border.B, b.border.B);
}

TEST(Search, MonotoneInTrials) {
  const auto q = hadamard(16);
  SearchConfig cfg;
  cfg.master_seed = 3;
  LogScalar prev = LogScalar::zero();
  for (std::uint64_t t : {1, 2, 4, 8, 16, 32, 64}) {
    cfg.trials = t;
    const auto r = search(q, 2, cfg);
    EXPECT_FALSE(r.ratio < prev) << t;
    prev = r.ratio;
  }
}

TEST(Search, H4WidthOneFindsOptimum) {
  const auto q = hadamard(4);
  for (std::uint64_t seed : {0, 1, 2, 3}) {
    SearchConfig cfg;
    cfg.master_seed = seed;
    cfg.trials = 64;
    auto r = search(q, 1, cfg);
    if (std::fabs(r.ratio.value() - 0.858650) > 1e-6) {
      cfg.trials = 128;
      r = search(q, 1, cfg);
    }
    EXPECT_NEAR(r.ratio.value(), 48 / std::pow(5.0, 2.5), 1e-12) << seed;
  }
}

TEST(Search, RejectsZeroTrials) {
  SearchConfig cfg;
  cfg.trials = 0;
  EXPECT_THROW(search(hadamard(4), 1, cfg), std::invalid_argument);
}

TEST(DirectCheck, SchurIdentityAtSmallOrders) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto q = hadamard(4);
    const auto r = run_trial(q, 2, t);
    const mpz_class direct = det_exact(assemble(q, r.border));
    // k^{m/2 - d} = 4^0.
    EXPECT_EQ(abs(direct), abs(r.border.det_N)) << t;
  }
}

TEST(DirectCheck, ConferenceCore) {
  const auto q = paley_conference(13);
  for (std::uint64_t t = 0; t < 20; ++t)
    EXPECT_TRUE(direct_check(q, run_trial(q, 3, t).border)) << t;
}

TEST(DirectCheck, DetectsWrongSchurDeterminant) {
  const auto q = hadamard(8);
  auto r = run_trial(q, 2, 0);
  r.border.det_N += 1;
  EXPECT_FALSE(direct_check(q, r.border));
}

TEST(VerifyWitness, FreshTrialsRoundTrip) {
  for (auto q : {hadamard(12), paley_conference(13), hadamard(664)}) {
    const auto r = run_trial(q, 3, 4);
    const auto w = Witness::from_trial(r);
    EXPECT_EQ(verify_witness(w).log_abs, r.ratio.log_abs);
  }
}

TEST(VerifyWitness, TamperedBIsCorrupt) {
  const auto q = hadamard(12);
  auto w = Witness::from_trial(run_trial(q, 2, 1));
  w.B.flip(0, 0);
  EXPECT_THROW(verify_witness(w), witness_corrupt);
}

TEST(VerifyWitness, TamperedBWithoutStoredC) {
  const auto q = hadamard(12);
  int caught = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto w = Witness::from_trial(run_trial(q, 2, t));
    w.C.reset();
    w.B.flip(3, 1);
    try {
      verify_witness(w);
    } catch (const witness_corrupt&) {
      ++caught;
    }
  }
  EXPECT_GE(caught, 15);
}

TEST(VerifyWitness, BadDiagonalOrHeader) {
  const auto q = hadamard(12);
  auto w = Witness::from_trial(run_trial(q, 2, 1));
  auto bad = w;
  bad.D.set(0, 0, 1);
  EXPECT_THROW(verify_witness(bad), witness_corrupt);
  bad = w;
  bad.recipe = "paley2(5);double";
  EXPECT_THROW(verify_witness(bad), witness_corrupt);
  bad = w;
  bad.ratio_log += 1e-6;
  EXPECT_THROW(verify_witness(bad), witness_corrupt);
}
