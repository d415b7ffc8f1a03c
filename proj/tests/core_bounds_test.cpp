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

#include "conclab/core_bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace conclab {
namespace {

oracle::Atoms atoms_of(const ExactDistribution& dist) {
  oracle::Atoms atoms;
  for (const auto& o : dist.support()) atoms.push_back({o.probability, o.values});
  return atoms;
}

ExactDistribution all_ones(int n) { return point_mass(std::vector<Rational>(n, Rational(1))); }

TEST(CoordinateMean, MatchesEnumeration) {
  EXPECT_EQ(coordinate_mean(all_ones(3)), 1);
  const auto coins = product_bernoulli(4, Rational(1, 2));
  EXPECT_EQ(coordinate_mean(coins), oracle::mean_sum(atoms_of(coins)) / 4);
  EXPECT_EQ(coordinate_mean(point_mass<Rational>({0, 2})), 1);
}

TEST(MomentPowerSum, MatchesTupleEnumeration) {
  const auto coins = product_bernoulli(4, Rational(1, 2));
  const auto dup = duplicated_coin(2, Rational(1, 2));
  for (int m = 1; m <= 3; ++m) {
    EXPECT_EQ(moment_power_sum(coins, m),
              oracle::tuple_product_mean(atoms_of(coins), 4, m) * power(Rational(4), m));
    EXPECT_EQ(moment_power_sum(dup, m),
              oracle::tuple_product_mean(atoms_of(dup), 2, m) * power(Rational(2), m));
  }
  EXPECT_EQ(moment_power_sum(all_ones(3), 2), 9);
}

TEST(CheckGrowthBounded, ThresholdIsSqrtOfMomentRatio) {
  const auto coins = product_bernoulli(4, Rational(1, 2));
  // E[(sum x)^2] / (mu n)^2 from the oracle; the check flips at sqrt(ratio) - 1.
  const Rational ratio = oracle::tuple_product_mean(atoms_of(coins), 4, 2) * 16 / 4;
  const double threshold = std::sqrt(to_double(ratio)) - 1.0;
  EXPECT_TRUE(check_growth_bounded(coins, Rational(12, 100), 2).holds);
  EXPECT_FALSE(check_growth_bounded(coins, Rational(10, 100), 2).holds);
  EXPECT_GT(0.12, threshold);
  EXPECT_LT(0.10, threshold);
  EXPECT_EQ(check_growth_bounded(coins, Rational(0), 2).ratio, ratio);
  for (int m = 1; m <= 5; ++m) EXPECT_TRUE(check_growth_bounded(all_ones(3), Rational(0), m).holds);
}

TEST(CheckGrowthBounded, FloatPathAgrees) {
  const auto exact = product_bernoulli(5, Rational(3, 10));
  const auto approx = product_bernoulli(5, 0.3);
  for (int m = 1; m <= 4; ++m)
    EXPECT_NEAR(check_growth_bounded(approx, 0.0, m).ratio,
                to_double(check_growth_bounded(exact, Rational(0), m).ratio), 1e-12);
}

TEST(CheckGbWithoutRepetition, ProductAndCorrelatedCoins) {
  const auto coins = product_bernoulli(5, Rational(1, 2));
  for (int m = 1; m <= 5; ++m) {
    const auto check = check_gb_without_repetition(coins, Rational(0), m);
    EXPECT_TRUE(check.holds);
    EXPECT_EQ(check.ratio, 1);
  }
  const auto dup = duplicated_coin(4, Rational(1, 2));
  // Pr[both of two distinct coordinates are 1] / mu^2 = (1/2) / (1/4).
  EXPECT_TRUE(check_gb_without_repetition(dup, Rational(42, 100), 2).holds);
  EXPECT_FALSE(check_gb_without_repetition(dup, Rational(41, 100), 2).holds);
  EXPECT_TRUE(check_gb_without_repetition(dup, Rational(0), 1).holds);
}

TEST(MarkovTailBound, Values) {
  EXPECT_DOUBLE_EQ(markov_tail_bound(0.7, 0.7, 3.5), 1.0);
  EXPECT_DOUBLE_EQ(markov_tail_bound(1.0, 3.0, 4.0), 0.0625);
  EXPECT_NEAR(markov_tail_bound(0.2, 0.5, 10.0), std::pow(0.8, 10), 1e-15);
  EXPECT_EQ(markov_tail_bound_exact(Rational(1, 5), Rational(1, 2), 10), power(Rational(4, 5), 10));
  EXPECT_THROW(markov_tail_bound(0.0, -0.1, 1.0), PreconditionError);
}

TEST(CorollaryBound, Cases) {
  EXPECT_NEAR(corollary_bound(0.5, 10, CorollaryCase::kSmallEps), std::exp(-2.5), 1e-15);
  EXPECT_NEAR(corollary_bound(3.0, 4, CorollaryCase::kLargeEps), 1.0 / 16, 1e-15);
  EXPECT_NEAR(corollary_bound(0.6, 10, CorollaryCase::kWithoutRepetition), std::exp(-2.0), 1e-15);
  EXPECT_THROW(corollary_bound(2.0, 4, CorollaryCase::kLargeEps), PreconditionError);
}

TEST(WorTailBound, Values) {
  EXPECT_DOUBLE_EQ(wor_tail_bound(0.0, 0.7, 1.0, 0.5, 40).value, 1.0);
  const auto zero = wor_tail_bound(0.3, 0.0, 0.5, 0.5, 40);
  EXPECT_TRUE(zero.vacuous);
  EXPECT_EQ(zero.m, 0);
  const auto b = wor_tail_bound(0.1, 0.5, 0.3, 0.5, 40);
  EXPECT_EQ(b.m, 3);
  EXPECT_NEAR(b.value, std::pow(1.1 / 1.35, 3), 1e-15);
}

TEST(ExactTail, MatchesOracles) {
  const auto coins = product_bernoulli(4, Rational(1, 2));
  EXPECT_EQ(exact_tail(coins, Rational(3)), oracle::binomial_tail(4, Rational(1, 2), 3));
  EXPECT_EQ(exact_tail(coins, Rational(0)), 1);
  EXPECT_EQ(exact_tail(all_ones(3), Rational(4)), 0);
  const auto biased = product_bernoulli(7, Rational(3, 10));
  for (int t = 0; t <= 8; ++t)
    EXPECT_EQ(exact_tail(biased, Rational(t)), oracle::binomial_tail(7, Rational(3, 10), t));
}

TEST(ToyChernoff, DominatesExactTail) {
  EXPECT_NEAR(toy_chernoff_bound(60, 0.5), std::exp(-2.5), 1e-15);
  EXPECT_DOUBLE_EQ(toy_chernoff_bound(17, 0.0), 1.0);
  const Rational tail = oracle::binomial_tail(20, Rational(1, 2), 15);
  EXPECT_EQ(tail * (Integer(1) << 20), 21700);
  EXPECT_LE(tail, oracle::certified_lower(toy_chernoff_bound(20, 0.5)));
  EXPECT_EQ(binomial_upper_tail(20, Rational(1, 2), 15), tail);
}

TEST(BernoulliChernoff, Values) {
  EXPECT_NEAR(bernoulli_chernoff_bound(0.5, 60, 0.5), std::exp(-1.25), 1e-15);
  EXPECT_DOUBLE_EQ(bernoulli_chernoff_bound(0.3, 60, 0.0), 1.0);
  const long threshold = ceil_to_long(Rational(20) * Rational(3, 10) * Rational(3, 2));
  EXPECT_LE(oracle::binomial_tail(20, Rational(3, 10), threshold),
            oracle::certified_lower(bernoulli_chernoff_bound(0.3, 20, 0.5)));
}

TEST(MonteCarloTail, AgreesWithExactAndIsDeterministic) {
  const auto coins = bernoulli_sampler(20, 0.5);
  const auto zero = monte_carlo_tail(coins, 0.0, 1000, 7);
  EXPECT_DOUBLE_EQ(zero.value, 1.0);
  EXPECT_DOUBLE_EQ(zero.ci_half_width, 0.0);
  const auto est = monte_carlo_tail(coins, 15.0, 200000, 11);
  const double exact = to_double(oracle::binomial_tail(20, Rational(1, 2), 15));
  EXPECT_NEAR(est.value, exact, 4 * std::sqrt(exact * (1 - exact) / 200000));
  const auto again = monte_carlo_tail(coins, 15.0, 200000, 11, 3);
  EXPECT_EQ(est.value, again.value);
}

TEST(Distribution, RejectsMalformedInput) {
  using O = Outcome<Rational>;
  EXPECT_THROW(ExactDistribution(2, std::vector<O>{}), MalformedInputError);
  EXPECT_THROW(ExactDistribution(2, {O{Rational(1, 2), {1, 0}}}), MalformedInputError);
  EXPECT_THROW(ExactDistribution(2, {O{Rational(1), {1}}}), MalformedInputError);
  EXPECT_THROW(ExactDistribution(1, {O{Rational(1), {-1}}}), MalformedInputError);
}

TEST(Budget, EnumerationLimit) {
  Budget small;
  small.enumeration = 100;
  EXPECT_THROW(product_bernoulli(8, Rational(1, 2), small), ResourceError);
  EXPECT_NO_THROW(product_bernoulli(6, Rational(1, 2), small));
}

}  // namespace
}  // namespace conclab
