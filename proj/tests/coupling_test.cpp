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

#include "conclab/coupling.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include "oracles.hpp"

namespace conclab {
namespace {

TEST(GapDistribution, MatchesSubsetEnumeration) {
  for (int ell = 1; ell <= 9; ++ell)
    for (int m = 1; m <= ell; ++m) EXPECT_EQ(gap_distribution_exact(m, ell), oracle::gap_law(m, ell));
  const auto point = gap_distribution_exact(5, 5);
  ASSERT_EQ(point.size(), 1u);
  EXPECT_EQ(point.begin()->first, std::vector<int>(5, 1));
}

TEST(SampleSubsetGaps, SupportAndFrequencies) {
  const auto law = oracle::gap_law(2, 3);
  std::map<std::vector<int>, int> counts;
  const int trials = 30000;
  for (int t = 0; t < trials; ++t) {
    const auto g = sample_subset_gaps(2, 3, derive_seed(5, 0, t));
    EXPECT_LE(std::accumulate(g.gaps.begin(), g.gaps.end(), 0), 3);
    ++counts[g.gaps];
  }
  ASSERT_EQ(counts.size(), law.size());
  for (const auto& [tuple, mass] : law) {
    const double p = to_double(mass);
    EXPECT_NEAR(counts[tuple] / static_cast<double>(trials), p,
                4 * std::sqrt(p * (1 - p) / trials));
  }
  EXPECT_EQ(sample_subset_gaps(4, 4, 3).gaps, std::vector<int>(4, 1));
}

TEST(CoupledGaps, ExactJointLawMarginals) {
  for (int ell = 2; ell <= 10; ++ell) {
    for (int m = 1; m <= 4 && m <= ell; ++m) {
      for (int ms = 1; ms <= m; ++ms) {
        for (int alpha = 1; alpha * (m + ms) <= ell; ++alpha) {
          const Rational a(alpha);
          if (Rational(m) / (Rational(ell) - a * ms) * a > 1) continue;
          const auto joint = coupled_gaps_exact(m, ms, ell, a);
          GapPmf d_marginal;
          Rational total(0);
          for (const auto& [de, mass] : joint) {
            d_marginal[de.first] += mass;
            total += mass;
            for (int i = 0; i < ms; ++i) EXPECT_LE(de.second[i], de.first[i]);
          }
          EXPECT_EQ(total, 1);
          EXPECT_EQ(d_marginal, oracle::gap_law(m, ell)) << m << " " << ms << " " << ell;
        }
      }
    }
  }
}

TEST(CoupledGaps, SmallCasePmf) {
  const auto pmf = coupling_e_pmf(1, 1, 4, Rational(2));
  ASSERT_EQ(pmf.size(), 2u);
  EXPECT_EQ(pmf.at(1), Rational(1, 2));
  EXPECT_EQ(pmf.at(2), Rational(1, 2));
  EXPECT_EQ(coupling_beta(1, 1, 4, Rational(2)), Rational(1, 2));
}

TEST(CoupledGaps, SamplerRespectsOrderAndIsDeterministic) {
  for (int t = 0; t < 2000; ++t) {
    const auto c = sample_coupled_gaps(3, 2, 10, Rational(2), derive_seed(9, 1, t));
    for (int i = 0; i < 2; ++i) EXPECT_LE(c.e[i], c.d.gaps[i]);
  }
  const auto a = sample_coupled_gaps(3, 3, 10, 1.0, 42);
  const auto b = sample_coupled_gaps(3, 3, 10, 1.0, 42);
  EXPECT_EQ(a.d.gaps, b.d.gaps);
  EXPECT_EQ(a.e, b.e);
}

TEST(CoupledGaps, RejectsInadmissibleAlpha) {
  EXPECT_THROW(coupled_gaps_exact(2, 2, 6, Rational(2)), PreconditionError);
  EXPECT_THROW(coupled_gaps_exact(2, 2, 8, Rational(1, 2)), PreconditionError);
  EXPECT_THROW(coupled_gaps_exact(2, 3, 8, Rational(1)), PreconditionError);
}

TEST(ConditionalClaims, ZeroDiscrepancy) {
  const auto report = verify_conditional_claims(3, 8, 2);
  EXPECT_TRUE(report.given_equal.applicable);
  EXPECT_TRUE(report.given_greater.applicable);
  EXPECT_EQ(report.given_equal.max_discrepancy, 0);
  EXPECT_EQ(report.given_greater.max_discrepancy, 0);
  const auto edge = verify_conditional_claims(3, 6, 4);
  EXPECT_TRUE(edge.given_equal.applicable);
  EXPECT_FALSE(edge.given_greater.applicable);
  EXPECT_EQ(edge.given_equal.max_discrepancy, 0);
}

TEST(ConditionalClaims, EqualityClaimAgainstOracle) {
  // d_1 = 1 for m = 2, l = 3 leaves d_2 uniform on {1, 2}.
  const auto full = oracle::gap_law(2, 3);
  Rational event(0);
  std::map<std::vector<int>, Rational> conditional;
  for (const auto& [d, mass] : full)
    if (d[0] == 1) {
      event += mass;
      conditional[{d[1]}] += mass;
    }
  for (auto& [d, mass] : conditional) mass /= event;
  EXPECT_EQ(conditional, oracle::gap_law(1, 2));
  EXPECT_EQ(verify_conditional_claims(2, 3, 1).given_equal.max_discrepancy, 0);
}

}  // namespace
}  // namespace conclab
