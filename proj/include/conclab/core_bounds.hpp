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

#ifndef CONCLAB_CORE_BOUNDS_HPP_
#define CONCLAB_CORE_BOUNDS_HPP_

// Growth-boundedness of distributions over nonnegative vectors, the
// moment-method upper-tail bounds it implies, and exact oracles for the
// tails themselves.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "conclab/common.hpp"

namespace conclab {

template <typename S>
struct Outcome {
  S probability;
  std::vector<S> values;
};

// A finitely supported distribution over R_{>=0}^n. Probabilities are exact
// rationals (ExactDistribution) or doubles (FloatDistribution).
template <typename S>
class BasicDistribution {
 public:
  BasicDistribution(std::size_t n, std::vector<Outcome<S>> support)
      : n_(n), support_(std::move(support)) {
    if (n_ == 0) throw MalformedInputError("distribution needs n >= 1");
    if (support_.empty()) throw MalformedInputError("distribution has empty support");
    S total(0);
    for (const auto& outcome : support_) {
      if (outcome.values.size() != n_) {
        throw MalformedInputError("outcome has " +
                                  std::to_string(outcome.values.size()) +
                                  " coordinates, expected " + std::to_string(n_));
      }
      if (outcome.probability < 0)
        throw MalformedInputError("negative probability");
      for (const auto& x : outcome.values)
        if (x < 0) throw MalformedInputError("negative outcome coordinate");
      total += outcome.probability;
    }
    if constexpr (kIsExact<S>) {
      if (total != 1)
        throw MalformedInputError("probabilities sum to " + to_string(total));
    } else {
      if (std::abs(total - 1.0) > 1e-12)
        throw MalformedInputError("probabilities sum to " + std::to_string(total));
    }
  }

  std::size_t size() const { return n_; }
  const std::vector<Outcome<S>>& support() const { return support_; }

  bool is_binary() const {
    for (const auto& outcome : support_)
      for (const auto& x : outcome.values)
        if (x != 0 && x != 1) return false;
    return true;
  }

 private:
  std::size_t n_;
  std::vector<Outcome<S>> support_;
};

using ExactDistribution = BasicDistribution<Rational>;
using FloatDistribution = BasicDistribution<double>;

// Samples are produced by a deterministic function of a 64-bit seed.
struct SampledDistribution {
  std::size_t n = 0;
  std::function<std::vector<double>(std::uint64_t)> sampler;
};

// ---------------------------------------------------------------------------
// Builders

// n independent Bernoulli(p) coordinates, all 2^n outcomes listed.
template <typename S>
BasicDistribution<S> product_bernoulli(int n, const S& p,
                                       const Budget& budget = {}) {
  require(n >= 1 && n < 31, "product_bernoulli needs 1 <= n <= 30");
  require(p >= 0 && p <= 1, "product_bernoulli needs p in [0, 1]");
  budget.check_enumeration(std::ldexp(1.0, n), "product_bernoulli");
  std::vector<Outcome<S>> support;
  support.reserve(std::size_t{1} << n);
  S q = S(1) - p;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<S> values(n);
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) {
        values[i] = S(1);
        ++ones;
      } else {
        values[i] = S(0);
      }
    }
    support.push_back({power(p, ones) * power(q, n - ones), std::move(values)});
  }
  return BasicDistribution<S>(n, std::move(support));
}

// One Bernoulli(p) coin copied to all n coordinates.
template <typename S>
BasicDistribution<S> duplicated_coin(int n, const S& p) {
  require(n >= 1, "duplicated_coin needs n >= 1");
  std::vector<Outcome<S>> support;
  if (p > 0) support.push_back({p, std::vector<S>(n, S(1))});
  if (p < 1) support.push_back({S(1) - p, std::vector<S>(n, S(0))});
  return BasicDistribution<S>(n, std::move(support));
}

template <typename S>
BasicDistribution<S> point_mass(std::vector<S> values) {
  std::size_t n = values.size();
  return BasicDistribution<S>(n, {{S(1), std::move(values)}});
}

// ---------------------------------------------------------------------------
// Moments and growth boundedness

// mu = E_{x, i}[x_i], the mean averaged over coordinates.
template <typename S>
S coordinate_mean(const BasicDistribution<S>& dist) {
  S total(0);
  for (const auto& outcome : dist.support()) {
    S sum(0);
    for (const auto& x : outcome.values) sum += x;
    total += outcome.probability * sum;
  }
  return total / S(static_cast<long>(dist.size()));
}

template <typename S>
S moment_power_sum(const BasicDistribution<S>& dist, int m) {
  require(m >= 1, "moment order m must be >= 1");
  S total(0);
  double max_sum = 0.0;
  for (const auto& outcome : dist.support()) {
    S sum(0);
    for (const auto& x : outcome.values) sum += x;
    max_sum = std::max(max_sum, to_double(sum));
    if constexpr (kIsExact<S>) {
      // Guard against absurd exact powers before GMP allocates them.
      if (max_sum > 1 && m * std::log2(max_sum) > 1e6) {
        throw OverflowError("E[(sum x)^m] needs about 10^" +
                            std::to_string(m * std::log10(max_sum)) +
                            " which exceeds the exact-arithmetic guard");
      }
    }
    total += outcome.probability * power(sum, m);
  }
  if constexpr (!kIsExact<S>) {
    if (!std::isfinite(total)) {
      throw OverflowError("E[(sum x)^m] overflows double: magnitude about 10^" +
                          std::to_string(m * std::log10(max_sum)));
    }
  }
  return total;
}

template <typename S>
struct GrowthCheck {
  bool holds = false;
  // E[(sum x)^m] / (mu n)^m for the with-repetition check, or
  // Pr[x is 1 on M] / mu^m for the without-repetition check. The check holds
  // iff ratio <= (1 + delta)^m.
  S ratio{};
};

// (delta, m)-growth boundedness: E[(sum x)^m] <= (mu n)^m (1 + delta)^m.
template <typename S>
GrowthCheck<S> check_growth_bounded(const BasicDistribution<S>& dist,
                                    const S& delta, int m) {
  require(m >= 1, "growth boundedness needs an integer m >= 1");
  require(delta >= -1, "growth boundedness needs delta >= -1");
  S mu = coordinate_mean(dist);
  require(mu > 0, "growth boundedness needs mu > 0");
  S scale = power(mu * S(static_cast<long>(dist.size())), m);
  S moment = moment_power_sum(dist, m);
  S ratio = moment / scale;
  return {leq(ratio, power(S(1) + delta, m)), ratio};
}

// Growth boundedness without repetition over binary outcomes:
// Pr_{x, M <- C([n], m)}[x_i = 1 for all i in M] <= mu^m (1 + delta)^m.
// For an outcome with s ones exactly C(s, m) of the C(n, m) subsets lie inside
// its support.
template <typename S>
GrowthCheck<S> check_gb_without_repetition(const BasicDistribution<S>& dist,
                                           const S& delta, int m) {
  const int n = static_cast<int>(dist.size());
  require(m >= 1 && m <= n, "without-repetition check needs 1 <= m <= n");
  require(dist.is_binary(), "without-repetition check needs binary outcomes");
  require(delta >= -1, "without-repetition check needs delta >= -1");
  S mu = coordinate_mean(dist);
  require(mu > 0, "without-repetition check needs mu > 0");
  S all_ones(0);
  for (const auto& outcome : dist.support()) {
    long ones = 0;
    for (const auto& x : outcome.values)
      if (x == 1) ++ones;
    if constexpr (kIsExact<S>) {
      all_ones += outcome.probability * Rational(binomial(ones, m), binomial(n, m));
    } else {
      all_ones += outcome.probability * std::exp(log_binomial(ones, m) -
                                                 log_binomial(n, m));
    }
  }
  S ratio = all_ones / power(mu, m);
  return {leq(ratio, power(S(1) + delta, m)), ratio};
}

// ---------------------------------------------------------------------------
// Tail bounds

// ((1 + delta) / (1 + eps))^m for real m. Returned raw, not clamped.
inline double markov_tail_bound(double delta, double eps, double m) {
  require(eps >= 0, "markov_tail_bound needs eps >= 0");
  require(delta >= -1, "markov_tail_bound needs delta >= -1");
  require(m > 0, "markov_tail_bound needs m > 0");
  return std::pow((1.0 + delta) / (1.0 + eps), m);
}

template <typename S>
S markov_tail_bound_exact(const S& delta, const S& eps, int m) {
  require(eps >= 0, "markov_tail_bound needs eps >= 0");
  require(delta >= -1, "markov_tail_bound needs delta >= -1");
  require(m >= 1, "markov_tail_bound_exact needs an integer m >= 1");
  return power((S(1) + delta) / (S(1) + eps), m);
}

enum class CorollaryCase { kSmallEps, kMidEps, kLargeEps, kWithoutRepetition };

// Closed-form relaxations of the (eps/3, m) growth-bounded tail.
inline double corollary_bound(double eps, double m, CorollaryCase which) {
  require(m > 0, "corollary_bound needs m > 0");
  switch (which) {
    case CorollaryCase::kSmallEps:
      require(eps >= 0 && eps <= 0.5, "small-eps case needs eps in [0, 1/2]");
      return std::exp(-eps * m / 2.0);
    case CorollaryCase::kMidEps:
      require(eps >= 0.5, "mid-eps case needs eps >= 1/2");
      return std::pow(0.8, m);
    case CorollaryCase::kLargeEps:
      require(eps >= 3.0, "large-eps case needs eps >= 3");
      return std::pow(2.0, -m);
    case CorollaryCase::kWithoutRepetition:
      require(eps >= 0 && eps <= 0.8, "wor case needs eps in [0, 4/5]");
      return std::exp(-eps * m / 3.0);
  }
  throw PreconditionError("unknown corollary case");
}

struct WorBound {
  double value = 1.0;
  int m = 0;
  bool vacuous = true;
};

// ((1 + delta) / (1 + (1 - c) eps))^m with m = floor(c eps mu n).
inline WorBound wor_tail_bound(double delta, double eps, double c, double mu,
                               long n) {
  require(c >= 0 && c <= 1, "wor_tail_bound needs c in [0, 1]");
  require(eps >= 0, "wor_tail_bound needs eps >= 0");
  require(mu > 0, "wor_tail_bound needs mu > 0");
  require(delta >= -1, "wor_tail_bound needs delta >= -1");
  // The 1e-9 nudge keeps products like 0.3 * 0.5 * 0.5 * 40 from landing on
  // 2.9999999999999996.
  const int m = static_cast<int>(std::floor(c * eps * mu * n + 1e-9));
  if (m <= 0) return {1.0, 0, true};
  return {std::pow((1.0 + delta) / (1.0 + (1.0 - c) * eps), m), m, false};
}

// Pr[sum x_i >= threshold].
template <typename S>
S exact_tail(const BasicDistribution<S>& dist, const S& threshold) {
  S total(0);
  for (const auto& outcome : dist.support()) {
    S sum(0);
    for (const auto& x : outcome.values) sum += x;
    if (sum >= threshold) total += outcome.probability;
  }
  return total;
}

inline double toy_chernoff_bound(long n, double eps) {
  require(eps >= 0 && eps <= 0.5, "toy_chernoff_bound needs eps in [0, 1/2]");
  require(n >= 0, "toy_chernoff_bound needs n >= 0");
  return std::exp(-eps * eps * static_cast<double>(n) / 6.0);
}

inline double bernoulli_chernoff_bound(double mu, long n, double eps) {
  require(eps >= 0 && eps <= 0.5,
          "bernoulli_chernoff_bound needs eps in [0, 1/2]");
  require(mu > 0 && mu <= 1, "bernoulli_chernoff_bound needs mu in (0, 1]");
  return std::exp(-eps * eps * mu * static_cast<double>(n) / 6.0);
}

// Empirical Pr[sum x_i >= threshold]. Trial i draws from
// derive_seed(seed, fnv1a64("monte_carlo_tail"), i), so the estimate does not
// depend on `threads`.
inline Estimate monte_carlo_tail(const SampledDistribution& dist,
                                 double threshold, std::uint64_t trials,
                                 std::uint64_t seed, unsigned threads = 1) {
  require(trials >= 1, "monte_carlo_tail needs trials >= 1");
  require(static_cast<bool>(dist.sampler), "sampled distribution has no sampler");
  constexpr std::uint64_t kTag = fnv1a64("monte_carlo_tail");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  std::vector<std::uint64_t> hits(threads, 0);
  auto work = [&](unsigned worker) {
    for (std::uint64_t i = worker; i < trials; i += threads) {
      auto x = dist.sampler(derive_seed(seed, kTag, i));
      double sum = 0.0;
      for (double v : x) sum += v;
      if (sum >= threshold) ++hits[worker];
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return proportion_estimate(total, trials);
}

// n i.i.d. Bernoulli(p) coordinates as a sampled distribution.
inline SampledDistribution bernoulli_sampler(std::size_t n, double p) {
  return {n, [n, p](std::uint64_t seed) {
            Rng rng(seed);
            std::vector<double> x(n);
            for (auto& v : x) v = uniform01(rng) < p ? 1.0 : 0.0;
            return x;
          }};
}

}  // namespace conclab

#endif  // CONCLAB_CORE_BOUNDS_HPP_
