#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "irvpivot/election.hpp"
#include "irvpivot/skellam.hpp"
#include "oracles.hpp"

using namespace irvpivot;

// Frozen from a 30-digit series evaluation (mpmath) of the Poisson convolution.
constexpr double kSkellam0_1_1 = 0.308508322553671039533;
constexpr double kGreater_2_1 = 0.605703141107668433611;
constexpr double kTie3_3 = 0.166657432639816575563;
constexpr double kNearTie3_3 = 0.152051459308505884002;

TEST(SkellamPmf, DegenerateRates) {
  EXPECT_DOUBLE_EQ(skellam_pmf(0, {0.0, 0.0}), 1.0);
  EXPECT_DOUBLE_EQ(skellam_pmf(1, {0.0, 0.0}), 0.0);
  EXPECT_NEAR(skellam_pmf(1, {1.0, 0.0}), std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(skellam_pmf(-1, {1.0, 0.0}), 0.0);
  for (long w = 0; w < 10; ++w) {
    EXPECT_NEAR(skellam_pmf(w, {3.5, 0.0}), oracle::poisson_pdf(w, 3.5), 1e-14);
    EXPECT_NEAR(skellam_pmf(-w, {0.0, 3.5}), oracle::poisson_pdf(w, 3.5), 1e-14);
  }
}

TEST(SkellamPmf, MatchesOracles) {
  EXPECT_NEAR(oracle::skellam_convolution(0, 1, 1), kSkellam0_1_1, 1e-14);
  EXPECT_NEAR(skellam_pmf(0, {1.0, 1.0}), kSkellam0_1_1, 1e-12);
  for (double a : {0.3, 2.0, 7.5, 40.0}) {
    for (double b : {0.3, 2.0, 7.5, 40.0}) {
      for (long w = -6; w <= 6; ++w) {
        EXPECT_NEAR(skellam_pmf(w, {a, b}), oracle::skellam_bessel(w, a, b), 1e-12) << a << ' ' << b << ' ' << w;
      }
    }
  }
}

TEST(SkellamPmf, NegativeRateRejected) {
  EXPECT_THROW(skellam_pmf(0, {-1.0, 1.0}), DomainError);
  EXPECT_THROW(prob_strictly_greater(1.0, -0.5), DomainError);
  EXPECT_THROW(tie_terms(-1.0, 1.0), DomainError);
  EXPECT_THROW(skellam_pmf(0, {1.0, NAN}), DomainError);
  EXPECT_THROW(skellam_pmf(0, {1.0, 1.0}, Tolerance{0.0}), DomainError);
}

TEST(ProbStrictlyGreater, Examples) {
  EXPECT_NEAR(prob_strictly_greater(1.0, 0.0), 1.0 - std::exp(-1.0), 1e-12);
  for (double lam : {0.5, 3.0, 80.0}) {
    EXPECT_NEAR(prob_strictly_greater(lam, lam), 0.5 * (1.0 - skellam_pmf(0, {lam, lam})), 2e-12);
  }
  EXPECT_NEAR(oracle::greater_double_sum(2, 1), kGreater_2_1, 1e-14);
  EXPECT_NEAR(prob_strictly_greater(2.0, 1.0), kGreater_2_1, 1e-12);
  EXPECT_DOUBLE_EQ(prob_strictly_greater(0.0, 0.0), 0.0);
}

TEST(TieTerms, Examples) {
  const auto zero = tie_terms(0.0, 0.0);
  EXPECT_DOUBLE_EQ(zero.break_tie, 1.0);
  EXPECT_DOUBLE_EQ(zero.make_tie, 0.0);
  const auto one = tie_terms(0.0, 1.0);
  EXPECT_NEAR(one.break_tie, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(one.make_tie, std::exp(-1.0), 1e-15);
  const auto three = tie_terms(3.0, 3.0);
  EXPECT_NEAR(oracle::skellam_convolution(0, 3, 3), kTie3_3, 1e-14);
  EXPECT_NEAR(oracle::skellam_convolution(-1, 3, 3), kNearTie3_3, 1e-14);
  EXPECT_NEAR(three.break_tie, kTie3_3, 1e-12);
  EXPECT_NEAR(three.make_tie, kNearTie3_3, 1e-12);
}

TEST(SkellamPmf, MirrorSymmetryAndBounds) {
  for (double a : {0.0, 0.01, 1.0, 12.0, 300.0, 1e4, 1e6}) {
    for (double b : {0.0, 0.7, 30.0, 2e3, 1e6}) {
      for (long w : {-50L, -3L, 0L, 1L, 17L}) {
        const double s = skellam_pmf(w, {a, b});
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
        EXPECT_EQ(s, skellam_pmf(-w, {b, a}));
      }
      const double g = prob_strictly_greater(a, b);
      EXPECT_GE(g, 0.0);
      EXPECT_LE(g, 1.0);
    }
  }
}

TEST(SkellamPmf, MassConvergesMonotonically) {
  const Tolerance tol;
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{4.0, 9.0}, std::pair{50.0, 20.0}}) {
    double mass = 0.0, prev = -1.0;
    long w = 0;
    mass = skellam_pmf(0, {a, b});
    while (1.0 - mass >= 2 * tol.tail_eps && w < 10000) {
      ++w;
      mass += skellam_pmf(w, {a, b}) + skellam_pmf(-w, {a, b});
      EXPECT_GE(mass, prev);
      prev = mass;
    }
    EXPECT_LT(std::fabs(1.0 - mass), 2 * tol.tail_eps);
  }
}

TEST(Trichotomy, HoldsAcrossRates) {
  const Tolerance tol;
  for (double a : {0.0, 0.5, 3.0, 250.0, 1e5}) {
    for (double b : {0.0, 0.5, 3.0, 250.0, 1e5}) {
      const double total = prob_strictly_greater(a, b) + prob_strictly_greater(b, a) + skellam_pmf(0, {a, b});
      EXPECT_NEAR(total, 1.0, 4 * tol.tail_eps) << a << ' ' << b;
    }
  }
}

TEST(PoissonWindow, LogPmfAgreesWithBoost) {
  for (double rate : {0.2, 5.0, 123.4, 5e4}) {
    for (long k : {0L, 1L, 7L, 120L, 50000L}) {
      const double expect = oracle::poisson_pdf(k, rate);
      if (expect < 1e-280) continue;
      EXPECT_NEAR(std::exp(log_poisson_pmf(k, rate)) / expect, 1.0, 1e-12) << rate << ' ' << k;
    }
  }
}

TEST(Tolerance, Environment) {
  ::setenv("PIVOT_TAIL_EPS", "1e-9", 1);
  EXPECT_DOUBLE_EQ(Tolerance::from_env().tail_eps, 1e-9);
  ::setenv("PIVOT_TAIL_EPS", "2", 1);
  EXPECT_THROW(Tolerance::from_env(), DomainError);
  ::setenv("PIVOT_TAIL_EPS", "abc", 1);
  EXPECT_THROW(Tolerance::from_env(), DomainError);
  ::unsetenv("PIVOT_TAIL_EPS");
  EXPECT_DOUBLE_EQ(Tolerance::from_env().tail_eps, 1e-12);
}
