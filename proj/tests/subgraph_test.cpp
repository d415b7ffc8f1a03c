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

#include "conclab/subgraph.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

namespace conclab {
namespace {

TEST(Pattern, AutomorphismsAndValidation) {
  EXPECT_EQ(Pattern::k2().automorphisms(), 2);
  EXPECT_EQ(Pattern::k3().automorphisms(), 6);
  EXPECT_EQ(Pattern::p3().automorphisms(), 2);
  EXPECT_EQ(Pattern::c4().automorphisms(), 8);
  EXPECT_THROW(Pattern(3, {{0, 0}}), MalformedInputError);
  EXPECT_THROW(Pattern(3, {{0, 1}, {1, 0}}), MalformedInputError);
  EXPECT_THROW(Pattern(2, {{0, 2}}), MalformedInputError);
}

TEST(CountCopies, MatchesInjectiveMapOracle) {
  const std::vector<Pattern> patterns{Pattern::k2(), Pattern::k3(), Pattern::p3(), Pattern::c4(),
                                      Pattern::k4()};
  for (const auto& h : patterns) {
    for (std::uint64_t host = 0; host < 1024; host += 7) {
      const auto e = EdgeAssignment::from_mask(5, host);
      EXPECT_EQ(count_copies(h, e), oracle::copies(h.vertices(), h.edges(), 5, host))
          << h.name() << " host " << host;
    }
  }
  EXPECT_EQ(count_copies(Pattern::k3(), EdgeAssignment::complete(3)), 1);
  EXPECT_EQ(count_copies(Pattern::k3(), EdgeAssignment::complete(4)), oracle::triangles(4, 63));
  const auto some = EdgeAssignment::from_edges(5, {{0, 1}, {2, 3}, {1, 4}});
  EXPECT_EQ(count_copies(Pattern::k2(), some), some.edge_count());
}

TEST(PairIndex, RoundTrip) {
  for (int n = 2; n <= 7; ++n)
    for (int i = 0; i < pair_count(n); ++i) {
      const auto [u, v] = pair_endpoints(n, i);
      EXPECT_EQ(pair_index(n, u, v), i);
      EXPECT_TRUE(oracle::adjacent(std::uint64_t{1} << i, n, u, v));
    }
}

TEST(PackingNumber, MatchesExhaustiveOracle) {
  EXPECT_EQ(packing_number(6, 1, Pattern::k2()).value, 1);
  for (int n = 3; n <= 5; ++n) {
    for (const auto& h : {Pattern::k3(), Pattern::p3()}) {
      for (long m = 0; m <= pair_count(n); ++m)
        EXPECT_EQ(packing_number(n, m, h).value, oracle::packing(n, m, h.vertices(), h.edges()))
            << h.name() << " n=" << n << " m=" << m;
    }
  }
  EXPECT_EQ(packing_number(4, 6, Pattern::k3()).value, 4);
  EXPECT_EQ(packing_number(5, 4, Pattern::k3()).value, 1);
  EXPECT_EQ(packing_number(5, 5, Pattern::k3()).value, 2);
}

TEST(PackingNumber, OverBudgetReportsPartial) {
  Budget tiny;
  tiny.enumeration = 1000;
  try {
    packing_number(6, 7, Pattern::k3(), tiny);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    ASSERT_TRUE(e.partial().has_value());
    EXPECT_GE(*e.partial(), 4.0);
  }
}

TEST(MStar, SmallCasesAgainstOracle) {
  EXPECT_EQ(m_star(4, Rational(1), Pattern::k3()).value, 6);
  EXPECT_EQ(m_star(5, Rational(0), Pattern::k3()).value, 0);
  // Largest m where every sub-pattern cap holds, by the exhaustive oracle.
  const std::vector<std::pair<int, std::vector<oracle::Edge>>> subs{
      {2, {{0, 1}}}, {3, {{0, 1}, {1, 2}}}, {3, {{0, 1}, {1, 2}, {0, 2}}}};
  for (const Rational& p : {Rational(3, 10), Rational(1, 2), Rational(7, 10)}) {
    long expected = 0;
    for (long m = 0; m <= 10; ++m) {
      bool ok = true;
      for (const auto& [v, edges] : subs)
        if (Rational(oracle::packing(5, m, v, edges)) >
            power(Rational(5), v) * power(p, static_cast<long>(edges.size())))
          ok = false;
      if (ok) expected = m;
    }
    EXPECT_EQ(m_star(5, p, Pattern::k3()).value, expected) << p;
  }
  EXPECT_EQ(m_star(5, Rational(3, 10), Pattern::k3()).value, 5);
}

TEST(PackingInequality, Witness) {
  const auto same = check_packing_inequality(Pattern::k3(), 5, 6, 6);
  ASSERT_TRUE(same.ratio.has_value());
  EXPECT_DOUBLE_EQ(*same.ratio, 1.0);
  const auto w = check_packing_inequality(Pattern::k3(), 5, 5, 10);
  EXPECT_EQ(w.n1, oracle::packing(5, 5, 3, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(w.n2, 10);
  EXPECT_DOUBLE_EQ(*w.ratio, 2.0 * 10 / (5.0 * 10));
}

TEST(EdgeSubpatterns, TriangleClasses) {
  const auto subs = edge_subpatterns(Pattern::k3());
  ASSERT_EQ(subs.size(), 3u);
  std::vector<int> sizes;
  for (const auto& h : subs) sizes.push_back(h.edge_count());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(edge_subpatterns(Pattern::c4()).size(), 5u);
}

TEST(SubgraphTail, ExactMatchesOracle) {
  const auto model = RandomGraphModel::gnp(4, Rational(1, 2));
  EXPECT_EQ(subgraph_tail_exact(model, Pattern::k3(), Rational(4)), Rational(1, 64));
  EXPECT_EQ(subgraph_tail_exact(model, Pattern::k3(), Rational(0)), 1);
  for (int t = 1; t <= 4; ++t)
    EXPECT_EQ(subgraph_tail_exact(model, Pattern::k3(), Rational(t)),
              oracle::gnp_copy_tail(4, Rational(1, 2), 3, {{0, 1}, {1, 2}, {0, 2}}, Rational(t)));
  const auto p3 = RandomGraphModel::gnp(5, Rational(3, 10));
  for (int t : {2, 5, 9})
    EXPECT_EQ(subgraph_tail_exact(p3, Pattern::p3(), Rational(t)),
              oracle::gnp_copy_tail(5, Rational(3, 10), 3, {{0, 1}, {1, 2}}, Rational(t)));
  const auto full = RandomGraphModel::gnm(5, 10);
  EXPECT_EQ(subgraph_tail_exact(full, Pattern::k3(), Rational(10)), 1);
  EXPECT_EQ(subgraph_tail_exact(full, Pattern::k3(), Rational(11)), 0);
}

TEST(SubgraphTail, MonteCarloAgrees) {
  const auto model = RandomGraphModel::gnp(5, Rational(1, 2));
  const Rational exact = subgraph_tail_exact(model, Pattern::k3(), Rational(3));
  const auto est = subgraph_tail_mc(model, Pattern::k3(), 3.0, 50000, 77);
  const double p = to_double(exact);
  EXPECT_NEAR(est.value, p, 4 * std::sqrt(p * (1 - p) / 50000));
  EXPECT_EQ(est.value, subgraph_tail_mc(model, Pattern::k3(), 3.0, 50000, 77, 4).value);
  const auto gnm = RandomGraphModel::gnm(5, 4);
  const auto host = sample_host(gnm, 3);
  EXPECT_EQ(host.edge_count(), 4);
}

TEST(GraphGbCheck, EndToEnd) {
  const auto g5 = RandomGraphModel::gnp(5, Rational(1, 2));
  const auto mean = graph_gb_check(Pattern::k3(), g5, Rational(100000), Rational(0), 1);
  EXPECT_TRUE(mean.certified());
  EXPECT_TRUE(mean.growth_bounded);
  EXPECT_EQ(mean.mu, Rational(10, 8));

  const auto g4 = RandomGraphModel::gnp(4, Rational(1, 2));
  const Rational delta = minimal_premise_delta(Pattern::k2(), 4, 2, Rational(1, 2));
  const auto report = graph_gb_check(Pattern::k2(), g4, delta, Rational(0), 2);
  EXPECT_TRUE(report.premise);
  EXPECT_TRUE(report.almost_independent);
  EXPECT_TRUE(report.growth_bounded);
  const Rational moment = oracle::gnp_copy_moment(4, Rational(1, 2), 2, {{0, 1}}, 2);
  EXPECT_EQ(report.moment_ratio, moment / (report.mu * report.mu));

  const auto weak = graph_gb_check(Pattern::k2(), g4, delta / 2, Rational(0), 2);
  EXPECT_FALSE(weak.premise);
  EXPECT_FALSE(weak.certified());
}

TEST(JorBound, Values) {
  const auto b = jor_tail_bound(Pattern::k3(), 5, Rational(3, 10), 0.5, 0.01);
  EXPECT_EQ(b.m_star, 5);
  EXPECT_NEAR(b.value, std::exp(-0.0125), 1e-15);
  EXPECT_DOUBLE_EQ(jor_tail_bound(Pattern::k3(), 5, Rational(3, 10), 0.0, 0.01).value, 1.0);
  double previous = 2.0;
  for (double eps = 0.0; eps <= 0.5; eps += 0.05) {
    const double v = jor_tail_bound(Pattern::k3(), 5, Rational(3, 10), eps, 0.01).value;
    EXPECT_LE(v, previous);
    previous = v;
  }
}

TEST(GnmBound, CorrectionFactor) {
  EXPECT_NEAR(gnm_correction_factor(3, 81), std::pow(1 + 3.0 / 78, 3), 1e-15);
  EXPECT_LE(gnm_correction_factor(3, 81), 1.25);
  EXPECT_THROW(gnm_tail_bound(Pattern::k3(), 20, 150, 1.5, 0.01), PreconditionError);
  // K2 under G(n, m) has exactly m copies: any positive deviation has probability 0.
  const auto model = RandomGraphModel::gnm(5, 6);
  EXPECT_EQ(subgraph_tail_exact(model, Pattern::k2(), Rational(6) * Rational(11, 10)), 0);
}

TEST(CopyPolyStats, MatchesExactPolynomialStats) {
  const auto poly = copy_polynomial<Rational>(Pattern::k3(), 5);
  const auto exact = poly_stats(poly, MarginalProfile<Rational>::bernoulli(10, Rational(1, 4)));
  const auto fast = copy_poly_stats(Pattern::k3(), 5, 0.25);
  EXPECT_NEAR(fast.mu0_star, to_double(exact.mu0_star), 1e-12);
  ASSERT_EQ(fast.mu_star.size(), exact.mu_star.size());
  for (std::size_t i = 0; i < fast.mu_star.size(); ++i)
    EXPECT_NEAR(fast.mu_star[i], to_double(exact.mu_star[i]), 1e-12);
  EXPECT_EQ(copy_mean_independent(Pattern::k3(), 5, Rational(1, 4)), exact.mu0_star);
}

}  // namespace
}  // namespace conclab
