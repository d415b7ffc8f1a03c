//
// Copyright 2026 The conc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "conclab/expander.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace conclab {
namespace {

double tail_from_law(const std::vector<double>& law, long threshold) {
  double total = 0.0;
  for (long c = std::max(0L, threshold); c < static_cast<long>(law.size()); ++c) total += law[c];
  return total;
}

TEST(TransitionMatrix, Validation) {
  Eigen::MatrixXd asym(2, 2);
  asym << 0.5, 0.5, 0.4, 0.6;
  EXPECT_THROW(TransitionMatrix::from_doubles(asym), ValidationError);
  Eigen::MatrixXd rows(2, 2);
  rows << 0.5, 0.6, 0.6, 0.5;
  EXPECT_THROW(TransitionMatrix::from_doubles(rows), ValidationError);
  Eigen::MatrixXd negative(2, 2);
  negative << 1.5, -0.5, -0.5, 1.5;
  EXPECT_THROW(TransitionMatrix::from_doubles(negative), ValidationError);
  const auto jn = build_jn_construction(0.3, 5);
  EXPECT_TRUE(jn.entries().isApprox(jn.entries().transpose()));
  for (int r = 0; r < 5; ++r) EXPECT_NEAR(jn.entries().row(r).sum(), 1.0, 1e-15);
}

TEST(SpectralLambda, KnownSpectra) {
  EXPECT_NEAR(spectral_lambda(build_jn_construction(0.0, 5)), 0.0, 1e-12);
  EXPECT_NEAR(spectral_lambda(TransitionMatrix::from_doubles(Eigen::MatrixXd::Identity(4, 4))),
              1.0, 1e-12);
  Eigen::MatrixXd k4 = (Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4)) / 3.0;
  // Second largest |eigenvalue| of a symmetric matrix is the norm on 1-perp.
  Eigen::MatrixXd deflated = k4 - Eigen::MatrixXd::Ones(4, 4) / 4.0;
  EXPECT_NEAR(spectral_lambda(TransitionMatrix::from_doubles(k4)), oracle::spectral_norm(deflated),
              1e-9);
  EXPECT_NEAR(spectral_lambda(build_jn_construction(0.5, 6)), 0.5, 1e-12);
}

TEST(StayProb, MatchesPathEnumeration) {
  for (double lambda : {0.0, 0.25, 0.5}) {
    WalkSpec spec(build_jn_construction(lambda, 4), {0, 1}, 5);
    for_each_combination(5, 2, [&](const std::vector<int>& idx) {
      std::vector<int> steps{idx[0] + 1, idx[1] + 1};
      EXPECT_NEAR(stay_prob_exact(spec, steps),
                  oracle::stay_by_paths(spec.matrix.entries(), spec.target, 5, steps), 1e-12);
    });
    EXPECT_NEAR(stay_prob_exact(spec, {1}), 0.5, 1e-15);
  }
  WalkSpec spec(build_jn_construction(0.5, 4), {0, 1}, 2);
  EXPECT_NEAR(stay_prob_exact(spec, {1, 2}),
              oracle::stay_by_paths(spec.matrix.entries(), spec.target, 2, {1, 2}), 1e-15);
}

TEST(AvgStayProb, ExactAndMonteCarlo) {
  WalkSpec independent(build_jn_construction(0.0, 6), {0, 1, 2}, 8);
  for (int m = 1; m <= 4; ++m)
    EXPECT_NEAR(avg_stay_prob(independent, m, EvalMode::kExact).value, std::pow(0.5, m), 1e-12);
  WalkSpec spec(build_jn_construction(0.25, 8), leading_target(8, 0.5), 12);
  const auto exact = avg_stay_prob(spec, 2, EvalMode::kExact);
  EXPECT_LE(exact.value, hitting_bound(0.5, 0.25, 2) + 1e-12);
  EXPECT_TRUE(hitting_precondition(0.25, 12, 0.5, 0.25, 2).holds);
  const auto mc = avg_stay_prob(spec, 2, EvalMode::kMonteCarlo, 20000, 3);
  EXPECT_NEAR(mc.value, exact.value, mc.ci_half_width + 1e-12);
  EXPECT_EQ(mc.value, avg_stay_prob(spec, 2, EvalMode::kMonteCarlo, 20000, 3).value);
}

TEST(NormClaim, HoldsAndMatchesPowerIteration) {
  const auto jn = build_jn_construction(0.0, 4);
  const auto at_jn = norm_claim_check(jn, {0, 1}, 1);
  EXPECT_NEAR(at_jn.lhs, 0.5, 1e-12);
  EXPECT_NEAR(at_jn.rhs, 0.5, 1e-12);
  const auto id = norm_claim_check(TransitionMatrix::from_doubles(Eigen::MatrixXd::Identity(4, 4)),
                                   {1, 3}, 3);
  EXPECT_NEAR(id.lhs, 1.0, 1e-12);
  EXPECT_NEAR(id.rhs, 1.0, 1e-12);
  const auto a = random_symmetric_doubly_stochastic(8, 17);
  const std::vector<int> w{0, 3, 5};
  const auto claim = norm_claim_check(a, w, 2);
  EXPECT_TRUE(claim.holds);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(8, 8);
  for (int v : w) p(v, v) = 1;
  EXPECT_NEAR(claim.lhs, oracle::spectral_norm(p * a.entries() * a.entries() * p), 1e-8);
}

TEST(HittingBound, ValuesAndPrecondition) {
  EXPECT_NEAR(hitting_bound(0.3, 0.0, 4), std::pow(0.3, 4), 1e-15);
  EXPECT_NEAR(hitting_bound(0.5, 0.25, 2), 0.390625, 1e-15);
  const auto pre = hitting_precondition(0.0, 10, 0.5, 0.01, 5);
  EXPECT_DOUBLE_EQ(pre.m_limit, 5.0);
  EXPECT_TRUE(pre.holds);
  EXPECT_FALSE(hitting_precondition(0.0, 10, 0.5, 0.01, 6).holds);
  EXPECT_NEAR(hitting_bound_tight(0.3, 0.0, 3, 12, 2), std::pow(0.3, 3), 1e-15);
  EXPECT_NEAR(hitting_bound_tight(0.5, 0.5, 1, 4, 2), 0.5 + 0.5 * (0.5 + 0.25), 1e-15);
}

TEST(HittingBoundTight, DominatesAverageStayProbability) {
  for (double lambda : {0.25, 0.5}) {
    WalkSpec spec(build_jn_construction(lambda, 4), {0, 1}, 12);
    for (int m = 1; m <= 6; ++m) {
      const double avg = avg_stay_prob(spec, m, EvalMode::kExact).value;
      for (int alpha = 1; alpha * 2 * m <= 12; ++alpha)
        EXPECT_LE(avg, hitting_bound_tight(0.5, lambda, m, 12, alpha) + 1e-12);
    }
  }
}

TEST(WalkTail, DpAgreesWithPathsAndTwoStateChain) {
  WalkSpec jn(build_jn_construction(0.0, 4), {0, 1}, 5);
  // With independent steps the tail is binomial: Pr[Bin(5, 1/2) >= 4].
  EXPECT_NEAR(walk_tail_exact(jn, 0.6), to_double(oracle::binomial_tail(5, Rational(1, 2), 4)),
              1e-15);
  EXPECT_DOUBLE_EQ(walk_tail_exact(jn, -1.0), 1.0);
  for (double lambda : {0.25, 0.5}) {
    for (double mu : {0.25, 0.5}) {
      WalkSpec spec(build_jn_construction(lambda, 4), leading_target(4, mu), 9);
      const auto law = oracle::walk_visit_law(spec.matrix.entries(), spec.target, 9);
      for (double eps : {0.1, 0.3, 0.5, 0.8}) {
        const double oracle_tail = tail_from_law(law, walk_tail_threshold(mu, 9, eps));
        EXPECT_NEAR(walk_tail_exact(spec, eps), oracle_tail, 1e-12);
        EXPECT_NEAR(walk_tail_two_state(lambda, mu, 9, eps), oracle_tail, 1e-12);
      }
    }
  }
}

TEST(WalkTail, GeneralMatrixMatchesPaths) {
  const auto a = random_symmetric_doubly_stochastic(5, 23);
  WalkSpec spec(a, {1, 4}, 7);
  const auto law = oracle::walk_visit_law(a.entries(), spec.target, 7);
  for (double eps : {0.0, 0.25, 0.5, 1.0})
    EXPECT_NEAR(walk_tail_exact(spec, eps), tail_from_law(law, walk_tail_threshold(0.4, 7, eps)),
                1e-12);
}

TEST(MainTailBound, ValuesAndDominance) {
  const auto zero = main_tail_bound(0.5, 0.3, 0.0, 100);
  EXPECT_DOUBLE_EQ(zero.value, 2.0);
  EXPECT_TRUE(zero.vacuous);
  EXPECT_NEAR(main_tail_bound(0.5, 0.0, 0.5, 240).value, 2 * std::exp(-5.0 / 3.0), 1e-14);
  WalkSpec spec(build_jn_construction(0.25, 8), leading_target(8, 0.5), 14);
  EXPECT_LE(walk_tail_exact(spec, 0.5), main_tail_bound(0.5, 0.25, 0.5, 14).value);
  EXPECT_THROW(main_tail_bound(0.5, 0.25, 0.9, 14), PreconditionError);
}

TEST(TightTailBound, ExponentAndVacuity) {
  const auto b = tight_tail_bound(0.5, 0.5, 0.001, 1000000000);
  const double leading = (0.5 / 1.5) * 1.0 * 1e-6 * 1e9 / 2.0;
  const double correction = 16.0 * 1e-9 * std::log(1000.0) * 1e9;
  EXPECT_NEAR(std::log(b.value / 2.0), -leading + correction, 1e-6);
  EXPECT_TRUE(b.remark_valid);
  EXPECT_TRUE(tight_tail_bound(0.5, 0.999999, 0.1, 100).vacuous);
  EXPECT_FALSE(tight_tail_bound(0.2, 0.5, 0.3, 100).remark_valid);
}

TEST(OptimalityLowerBound, BelowTailAndExactAgrees) {
  WalkSpec spec(build_jn_construction(0.5, 4), leading_target(4, 0.5), 20);
  const auto lower = optimality_lower_bound(0.5, 0.5, 0.2, 20);
  EXPECT_GT(lower.value, 0.0);
  EXPECT_LE(lower.value, walk_tail_exact(spec, 0.2));
  const double exact = to_double(optimality_lower_bound_exact(Rational(1, 2), Rational(1, 2), 0.2, 20));
  EXPECT_NEAR(lower.value, exact, 1e-9 * exact);
}

TEST(WalkSample, DeterministicAndUnbiased) {
  WalkSpec spec(build_jn_construction(0.5, 4), {0}, 6);
  EXPECT_EQ(walk_sample(spec, 99), walk_sample(spec, 99));
  const int trials = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int t = 0; t < trials; ++t) {
    double s = 0;
    for (int x : walk_sample(spec, derive_seed(1, 2, t))) s += x;
    sum += s;
    sum_sq += s * s;
  }
  const double mean = sum / trials;
  const double sd = std::sqrt(sum_sq / trials - mean * mean);
  EXPECT_NEAR(mean, 0.25 * 6, 3 * sd / std::sqrt(trials));
}

TEST(WalkIndicatorDistribution, MatchesPathLaw) {
  WalkSpec spec(build_jn_construction(Rational(1, 3), 3), {0}, 6);
  const auto dist = walk_indicator_distribution(spec);
  const auto law = oracle::walk_visit_law(spec.matrix.entries(), spec.target, 6);
  for (int t = 0; t <= 6; ++t)
    EXPECT_NEAR(to_double(exact_tail(dist, Rational(t))), tail_from_law(law, t), 1e-12);
  WalkSpec floating(build_jn_construction(0.3, 3), {0}, 4);
  EXPECT_THROW(walk_indicator_distribution(floating), PreconditionError);
}

}  // namespace
}  // namespace conclab
