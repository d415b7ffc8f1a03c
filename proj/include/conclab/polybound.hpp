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

#ifndef CONCLAB_POLYBOUND_HPP_
#define CONCLAB_POLYBOUND_HPP_

// Polynomials with nonnegative coefficients over [0,1]-valued variables,
// their Delta_K "derivatives", the mu*_i statistics, almost independence,
// and the polynomial tail bounds plus the elementary symmetric test suite.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "conclab/common.hpp"
#include "conclab/core_bounds.hpp"

namespace conclab {

// w * prod_{j in support} v_j, support a sorted multiset of variable indices.
template <typename S>
struct Monomial {
  S weight;
  std::vector<int> support;
};

template <typename S>
class BasicPolynomial {
 public:
  // User-facing polynomials need degree >= 1 and nonempty supports.
  // Derived polynomials (results of delta_k) may hold constants or be zero.
  enum class Kind { kPositive, kDerived };

  BasicPolynomial(int variables, std::vector<Monomial<S>> monomials,
                  Kind kind = Kind::kPositive)
      : variables_(variables), monomials_(std::move(monomials)) {
    if (variables_ < 1) throw MalformedInputError("polynomial needs l >= 1 variables");
    for (auto& mono : monomials_) {
      if (mono.weight < 0) throw MalformedInputError("monomial weight is negative");
      std::sort(mono.support.begin(), mono.support.end());
      for (int j : mono.support)
        if (j < 0 || j >= variables_)
          throw MalformedInputError("variable index " + std::to_string(j) +
                                    " out of range");
      degree_ = std::max(degree_, static_cast<int>(mono.support.size()));
      if (kind == Kind::kPositive && mono.support.empty())
        throw MalformedInputError("monomial support is empty");
    }
    if (kind == Kind::kPositive && degree_ < 1)
      throw MalformedInputError("polynomial needs degree >= 1");
  }

  int variables() const { return variables_; }
  int degree() const { return degree_; }
  const std::vector<Monomial<S>>& monomials() const { return monomials_; }

  bool is_multilinear() const {
    for (const auto& mono : monomials_)
      if (std::adjacent_find(mono.support.begin(), mono.support.end()) !=
          mono.support.end())
        return false;
    return true;
  }

  // Variables appearing in at least one monomial, sorted.
  std::vector<int> occurring_variables() const {
    std::vector<int> vars;
    for (const auto& mono : monomials_)
      vars.insert(vars.end(), mono.support.begin(), mono.support.end());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

 private:
  int variables_;
  int degree_ = 0;
  std::vector<Monomial<S>> monomials_;
};

using PositivePolynomial = BasicPolynomial<double>;
using ExactPolynomial = BasicPolynomial<Rational>;

// Per-variable marginal laws, each a finite pmf on [0, 1]. The moment
// function E[v_j^c] is derived from them.
template <typename S>
class MarginalProfile {
 public:
  using Pmf = std::vector<std::pair<S, S>>;  // (value, probability)

  explicit MarginalProfile(std::vector<Pmf> marginals)
      : marginals_(std::move(marginals)) {
    if (marginals_.empty()) throw MalformedInputError("marginal profile is empty");
    for (const auto& pmf : marginals_) {
      S total(0);
      for (const auto& [value, prob] : pmf) {
        if (value < 0 || value > 1)
          throw MalformedInputError("marginal value outside [0, 1]");
        if (prob < 0) throw MalformedInputError("negative marginal probability");
        total += prob;
      }
      bool ok;
      if constexpr (kIsExact<S>) {
        ok = total == 1;
      } else {
        ok = std::abs(total - 1.0) <= 1e-12;
      }
      if (!ok) throw MalformedInputError("marginal probabilities do not sum to 1");
    }
  }

  static MarginalProfile bernoulli(int variables, const S& p) {
    require(p >= 0 && p <= 1, "Bernoulli marginal needs p in [0, 1]");
    return MarginalProfile(
        std::vector<Pmf>(variables, Pmf{{S(0), S(1) - p}, {S(1), p}}));
  }

  // Coordinate marginals of a joint distribution.
  static MarginalProfile from_distribution(const BasicDistribution<S>& dist) {
    const std::size_t n = dist.size();
    std::vector<std::map<S, S>> collected(n);
    for (const auto& outcome : dist.support())
      for (std::size_t j = 0; j < n; ++j)
        collected[j][outcome.values[j]] += outcome.probability;
    std::vector<Pmf> marginals(n);
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [value, prob] : collected[j])
        if (prob != 0) marginals[j].push_back({value, prob});
    return MarginalProfile(std::move(marginals));
  }

  int variables() const { return static_cast<int>(marginals_.size()); }
  const Pmf& marginal(int j) const { return marginals_.at(j); }

  // E[v_j^c].
  S moment(int j, int c) const {
    if (c == 0) return S(1);
    S total(0);
    for (const auto& [value, prob] : marginals_.at(j)) total += prob * power(value, c);
    return total;
  }

  // The independent companion P*: product of the marginals, enumerated.
  BasicDistribution<S> product_distribution(const Budget& budget = {}) const {
    double count = 1.0;
    for (const auto& pmf : marginals_) count *= static_cast<double>(pmf.size());
    budget.check_enumeration(count, "product_distribution");
    std::vector<Outcome<S>> support{{S(1), {}}};
    for (const auto& pmf : marginals_) {
      std::vector<Outcome<S>> next;
      next.reserve(support.size() * pmf.size());
      for (const auto& partial : support)
        for (const auto& [value, prob] : pmf) {
          if (prob == 0) continue;
          Outcome<S> o{partial.probability * prob, partial.values};
          o.values.push_back(value);
          next.push_back(std::move(o));
        }
      support = std::move(next);
    }
    return BasicDistribution<S>(marginals_.size(), std::move(support));
  }

 private:
  std::vector<Pmf> marginals_;
};

namespace detail {

// Multiplicities (j, c_j) of a sorted multiset.
inline std::vector<std::pair<int, int>> multiplicities(const std::vector<int>& sorted) {
  std::vector<std::pair<int, int>> out;
  for (int j : sorted) {
    if (!out.empty() && out.back().first == j) {
      ++out.back().second;
    } else {
      out.push_back({j, 1});
    }
  }
  return out;
}

}  // namespace detail

template <typename S>
S evaluate(const BasicPolynomial<S>& p, const std::vector<S>& v) {
  require(static_cast<int>(v.size()) == p.variables(),
          "evaluation point has the wrong dimension");
  for (const auto& x : v) require(x >= 0 && x <= 1, "evaluation point outside [0,1]^l");
  S total(0);
  for (const auto& mono : p.monomials()) {
    S term = mono.weight;
    for (int j : mono.support) term *= v[j];
    total += term;
  }
  return total;
}

// Delta_K p: monomials containing every variable of K, with all copies of
// those variables set to 1.
template <typename S>
BasicPolynomial<S> delta_k(const BasicPolynomial<S>& p, std::vector<int> k) {
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  for (int j : k) require(j >= 0 && j < p.variables(), "K is not a subset of [l]");
  std::vector<Monomial<S>> kept;
  for (const auto& mono : p.monomials()) {
    if (!std::includes(mono.support.begin(), mono.support.end(), k.begin(), k.end()))
      continue;
    Monomial<S> reduced{mono.weight, {}};
    for (int j : mono.support)
      if (!std::binary_search(k.begin(), k.end(), j)) reduced.support.push_back(j);
    kept.push_back(std::move(reduced));
  }
  return BasicPolynomial<S>(p.variables(), std::move(kept),
                            BasicPolynomial<S>::Kind::kDerived);
}

// E_{P*}[p]: each monomial factors into per-variable moments.
template <typename S>
S expectation_independent(const BasicPolynomial<S>& p, const MarginalProfile<S>& marginals) {
  require(marginals.variables() == p.variables(),
          "marginal profile has the wrong number of variables");
  S total(0);
  for (const auto& mono : p.monomials()) {
    S term = mono.weight;
    for (const auto& [j, c] : detail::multiplicities(mono.support))
      term *= marginals.moment(j, c);
    total += term;
  }
  return total;
}

// E[p(v)] under an explicit joint distribution.
template <typename S>
S expectation(const BasicPolynomial<S>& p, const BasicDistribution<S>& dist) {
  require(static_cast<int>(dist.size()) == p.variables(),
          "distribution has the wrong number of variables");
  S total(0);
  for (const auto& outcome : dist.support())
    total += outcome.probability * evaluate(p, outcome.values);
  return total;
}

template <typename S>
struct MuStar {
  S value{};
  std::vector<int> witness;  // a maximizing K
};

// mu*_i = max_{|K| = i} E_{P*}[Delta_K p], K ranging over occurring variables.
template <typename S>
MuStar<S> mu_star(const BasicPolynomial<S>& p, const MarginalProfile<S>& marginals, int i,
                  const Budget& budget = {}) {
  require(i >= 0 && i <= p.degree(), "mu_star needs 0 <= i <= degree");
  if (i == 0) return {expectation_independent(p, marginals), {}};
  const std::vector<int> vars = p.occurring_variables();
  const int count = static_cast<int>(vars.size());
  if (i > count) return {S(0), {}};
  budget.check_enumeration(to_double(binomial(count, i)), "mu_star");
  MuStar<S> best{S(-1), {}};
  for_each_combination(count, i, [&](const std::vector<int>& idx) {
    std::vector<int> k(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) k[t] = vars[idx[t]];
    S value = expectation_independent(delta_k(p, k), marginals);
    if (value > best.value) best = {value, std::move(k)};
  });
  return best;
}

template <typename S>
struct PolyStats {
  S mu0_star{};
  std::vector<S> mu_star;  // mu*_1 .. mu*_k
  S mu_prime{};            // max of mu_star
  S mu{};                  // mean under the actual distribution
};

// Statistics under independent marginals; mu = mu*_0.
template <typename S>
PolyStats<S> poly_stats(const BasicPolynomial<S>& p, const MarginalProfile<S>& marginals,
                        const Budget& budget = {}) {
  PolyStats<S> stats;
  stats.mu0_star = mu_star(p, marginals, 0, budget).value;
  stats.mu_prime = S(0);
  for (int i = 1; i <= p.degree(); ++i) {
    stats.mu_star.push_back(mu_star(p, marginals, i, budget).value);
    stats.mu_prime = std::max(stats.mu_prime, stats.mu_star.back());
  }
  stats.mu = stats.mu0_star;
  return stats;
}

// Statistics for an explicit joint distribution: mu*_i from its marginals,
// mu from the joint law.
template <typename S>
PolyStats<S> poly_stats(const BasicPolynomial<S>& p, const BasicDistribution<S>& dist,
                        const Budget& budget = {}) {
  auto stats = poly_stats(p, MarginalProfile<S>::from_distribution(dist), budget);
  stats.mu = expectation(p, dist);
  return stats;
}

template <typename S>
struct AiCheck {
  bool holds = true;
  std::vector<int> worst;  // multiset with the largest lhs / product ratio
  S lhs{};                 // E[prod v_{i_j}] at the worst tuple
  S product{};             // prod_j E[v_j^{c_j}] at the worst tuple
  S max_ratio{};           // lhs / product at the worst tuple
  bool unbounded = false;  // some tuple has lhs > 0 = product

  // Smallest delta for which the checked m would pass.
  double min_delta(int m) const {
    if (unbounded) return std::numeric_limits<double>::infinity();
    return std::max(0.0, std::pow(to_double(max_ratio), 1.0 / m) - 1.0);
  }
};

// (delta, m)-almost independence. Tuples are enumerated as multisets; for
// binary distributions repeated indices change neither side, so sets suffice.
template <typename S>
AiCheck<S> check_almost_independent(const BasicDistribution<S>& dist, const S& delta, int m,
                                    const Budget& budget = {}) {
  require(m >= 1, "almost independence needs m >= 1");
  require(delta >= 0, "almost independence needs delta >= 0");
  const int ell = static_cast<int>(dist.size());
  const bool binary = dist.is_binary() && ell <= 64;
  const int max_size = binary ? std::min(m, ell) : m;
  double tuples = 0.0;
  for (int s = 1; s <= max_size; ++s)
    tuples += to_double(binary ? binomial(ell, s) : binomial(ell + s - 1, s));
  budget.check_enumeration(tuples * static_cast<double>(dist.support().size()),
                           "check_almost_independent");

  const S slack = power(S(1) + delta, m);
  AiCheck<S> result;
  result.max_ratio = S(0);
  auto consider = [&](const std::vector<int>& tuple, const S& lhs, const S& product) {
    if (product == 0) {
      if (lhs > 0) {
        if (!result.unbounded) {
          result.unbounded = true;
          result.worst = tuple;
          result.lhs = lhs;
          result.product = product;
        }
        result.holds = false;
      }
      return;
    }
    if (!leq(lhs, slack * product)) result.holds = false;
    S ratio = lhs / product;
    if (!result.unbounded && (result.worst.empty() || ratio > result.max_ratio)) {
      result.max_ratio = ratio;
      result.worst = tuple;
      result.lhs = lhs;
      result.product = product;
    }
  };

  const auto marginals = MarginalProfile<S>::from_distribution(dist);
  if (binary) {
    std::vector<std::uint64_t> masks;
    for (const auto& outcome : dist.support()) {
      std::uint64_t mask = 0;
      for (int j = 0; j < ell; ++j)
        if (outcome.values[j] == 1) mask |= std::uint64_t{1} << j;
      masks.push_back(mask);
    }
    std::vector<S> means(ell);
    for (int j = 0; j < ell; ++j) means[j] = marginals.moment(j, 1);
    for (int s = 1; s <= max_size; ++s) {
      for_each_combination(ell, s, [&](const std::vector<int>& set) {
        std::uint64_t want = 0;
        S product(1);
        for (int j : set) {
          want |= std::uint64_t{1} << j;
          product *= means[j];
        }
        S lhs(0);
        for (std::size_t o = 0; o < masks.size(); ++o)
          if ((masks[o] & want) == want) lhs += dist.support()[o].probability;
        consider(set, lhs, product);
      });
    }
    return result;
  }

  std::vector<int> tuple;
  std::function<void(int)> extend = [&](int start) {
    if (!tuple.empty()) {
      const auto mult = detail::multiplicities(tuple);
      S product(1);
      for (const auto& [j, c] : mult) product *= marginals.moment(j, c);
      S lhs(0);
      for (const auto& outcome : dist.support()) {
        S term = outcome.probability;
        for (const auto& [j, c] : mult) term *= power(outcome.values[j], c);
        lhs += term;
      }
      consider(tuple, lhs, product);
    }
    if (static_cast<int>(tuple.size()) == max_size) return;
    for (int j = start; j < ell; ++j) {
      tuple.push_back(j);
      extend(j);
      tuple.pop_back();
    }
  };
  extend(0);
  return result;
}

// 1 + sum_{i=1}^k C(km, i) mu*_i / mu*_0; mu*_i taken as 0 beyond the
// recorded statistics.
template <typename S>
S kv_growth_factor(const PolyStats<S>& stats, int m, int k) {
  require(stats.mu0_star > 0, "kv bounds need mu*_0 > 0");
  require(m >= 1 && k >= 1, "kv bounds need m >= 1 and k >= 1");
  S sum(0);
  for (int i = 1; i <= k && i <= static_cast<int>(stats.mu_star.size()); ++i) {
    if constexpr (kIsExact<S>) {
      sum += Rational(binomial(static_cast<long>(k) * m, i)) * stats.mu_star[i - 1];
    } else {
      sum += binomial_d(static_cast<double>(k) * m, i) * stats.mu_star[i - 1];
    }
  }
  return S(1) + sum / stats.mu0_star;
}

// ((1+delta)^k (1 + sum_{i=1}^k C(km,i) mu*_i / mu*_0) / (1+eps))^m.
template <typename S>
S kv_bound(const PolyStats<S>& stats, const S& delta, const S& eps, int m, int k) {
  require(eps > 0, "kv_bound needs eps > 0");
  require(delta >= 0, "kv_bound needs delta >= 0");
  S base = power(S(1) + delta, k) * kv_growth_factor(stats, m, k) / (S(1) + eps);
  return power(base, m);
}

// ((1+delta)^k (1 + (km)^k mu' / mu*_0) / (1+eps))^m.
inline double kv_simple_bound(double mu0_star, double mu_prime, double delta, double eps,
                              int m, int k) {
  require(mu0_star > 0, "kv_simple_bound needs mu*_0 > 0");
  require(eps > 0, "kv_simple_bound needs eps > 0");
  require(delta >= 0 && mu_prime >= 0, "kv_simple_bound needs delta, mu' >= 0");
  require(m >= 1 && k >= 1, "kv_simple_bound needs m >= 1 and k >= 1");
  const double km = static_cast<double>(k) * m;
  const double base = std::pow(1.0 + delta, k) *
                      (1.0 + std::pow(km, k) * mu_prime / mu0_star) / (1.0 + eps);
  return std::pow(base, m);
}

struct IndependentPolyBound {
  double value = 2.0;
  long m = 0;  // floor((1/k) (eps mu / 3 mu')^{1/k})
  bool vacuous = true;
};

// 2 exp(-eps/(6k) (eps mu / mu')^{1/k}) for independent inputs.
inline IndependentPolyBound independent_poly_bound(double mu, double mu_prime, double eps,
                                                   int k) {
  require(eps > 0 && eps <= 0.5, "independent_poly_bound needs eps in (0, 1/2]");
  require(mu > 0 && mu_prime > 0, "independent_poly_bound needs mu, mu' > 0");
  require(k >= 1, "independent_poly_bound needs k >= 1");
  const double root = std::pow(eps * mu / (3.0 * mu_prime), 1.0 / k);
  IndependentPolyBound result;
  result.m = static_cast<long>(std::floor(root / k + 1e-12));
  if (result.m == 0) return result;
  result.value = 2.0 * std::exp(-eps / (6.0 * k) * std::pow(eps * mu / mu_prime, 1.0 / k));
  result.vacuous = result.value >= 1.0;
  return result;
}

// e_k(v) = sum_{|S| = k} prod_{i in S} v_i.
template <typename S = Rational>
BasicPolynomial<S> elementary_symmetric(int ell, int k, const Budget& budget = {}) {
  require(k >= 1 && k <= ell, "elementary_symmetric needs 1 <= k <= l");
  budget.check_enumeration(to_double(binomial(ell, k)), "elementary_symmetric");
  std::vector<Monomial<S>> monomials;
  for_each_combination(ell, k, [&](const std::vector<int>& idx) {
    monomials.push_back({S(1), idx});
  });
  return BasicPolynomial<S>(ell, std::move(monomials));
}

// Least integer s with C(s, k) >= t (0 when t <= 0), or l + 1 if none <= l.
template <typename S>
long es_threshold_count(int ell, int k, const S& t) {
  Rational target;
  if constexpr (kIsExact<S>) {
    target = t;
  } else {
    target = from_double<Rational>(t);
  }
  for (long s = 0; s <= ell; ++s)
    if (Rational(binomial(s, k)) >= target) return s;
  return ell + 1;
}

// Pr[e_k(v) >= t] for i.i.d. Bernoulli(p) inputs, using e_k(v) = C(sum v, k).
template <typename S>
S es_tail_exact(int ell, const S& p, int k, const S& t) {
  require(p > 0 && p < 1, "es_tail_exact needs p in (0, 1)");
  require(k >= 1 && k <= ell, "es_tail_exact needs 1 <= k <= l");
  return binomial_upper_tail(ell, p, es_threshold_count(ell, k, t));
}

// exp(-9 eps^2 p l), a lower bound on Pr[Bin(l, p) >= p l (1 + eps)].
inline double reverse_chernoff_floor(double p, int ell, double eps) {
  require(eps > 0 && eps <= 0.5, "reverse_chernoff_floor needs eps in (0, 1/2]");
  require(p > 0 && p <= 0.5, "reverse_chernoff_floor needs p in (0, 1/2]");
  require(eps * eps * p * ell >= 3.0, "reverse_chernoff_floor needs eps^2 p l >= 3");
  return std::exp(-9.0 * eps * eps * p * ell);
}

// exp(-36 eps^2 p l), a lower bound on Pr[e_k(v) >= p^k C(l, k)(1 + eps)].
inline double es_lower_floor(double p, int ell, double eps, int k) {
  require(eps > 0 && eps <= 0.25, "es_lower_floor needs eps in (0, 1/4]");
  require(p > 0 && p <= 0.5, "es_lower_floor needs p in (0, 1/2]");
  require(k >= 1, "es_lower_floor needs k >= 1");
  require(eps * p * ell >= k, "es_lower_floor needs eps p l >= k");
  require(eps * eps * p * ell >= 0.75, "es_lower_floor needs eps^2 p l >= 3/4");
  return std::exp(-36.0 * eps * eps * p * ell);
}

// Uniform permutation f of [N] as N^2 indicators g_{x,y} = [f(x) = y],
// variable index x * N + y.
inline ExactDistribution permutation_indicator_distribution(int n,
                                                            const Budget& budget = {}) {
  require(n >= 1 && n <= 6, "permutation_indicator_distribution needs 1 <= N <= 6");
  double factorial = 1.0;
  for (int i = 2; i <= n; ++i) factorial *= i;
  budget.check_enumeration(factorial, "permutation_indicator_distribution");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  const Rational prob(1, static_cast<long>(factorial));
  std::vector<Outcome<Rational>> support;
  do {
    std::vector<Rational> values(static_cast<std::size_t>(n) * n, Rational(0));
    for (int x = 0; x < n; ++x) values[x * n + perm[x]] = 1;
    support.push_back({prob, std::move(values)});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return ExactDistribution(static_cast<std::size_t>(n) * n, std::move(support));
}

// Law of the monomial values (x_1, ..., x_n), x_i = w_i prod_{j in e_i} v_j.
template <typename S>
BasicDistribution<S> monomial_distribution(const BasicPolynomial<S>& p,
                                           const BasicDistribution<S>& dist) {
  require(static_cast<int>(dist.size()) == p.variables(),
          "distribution has the wrong number of variables");
  require(!p.monomials().empty(), "polynomial has no monomials");
  std::map<std::vector<S>, S> merged;
  for (const auto& outcome : dist.support()) {
    std::vector<S> x;
    x.reserve(p.monomials().size());
    for (const auto& mono : p.monomials()) {
      S term = mono.weight;
      for (int j : mono.support) term *= outcome.values[j];
      x.push_back(term);
    }
    merged[std::move(x)] += outcome.probability;
  }
  std::vector<Outcome<S>> support;
  for (auto& [values, prob] : merged) support.push_back({prob, values});
  return BasicDistribution<S>(p.monomials().size(), std::move(support));
}

// Pr[p(v) >= threshold].
template <typename S>
S poly_tail_exact(const BasicPolynomial<S>& p, const BasicDistribution<S>& dist,
                  const S& threshold) {
  require(static_cast<int>(dist.size()) == p.variables(),
          "distribution has the wrong number of variables");
  S total(0);
  for (const auto& outcome : dist.support())
    if (evaluate(p, outcome.values) >= threshold) total += outcome.probability;
  return total;
}

}  // namespace conclab

#endif  // CONCLAB_POLYBOUND_HPP_
