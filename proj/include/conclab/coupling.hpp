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

#ifndef CONCLAB_COUPLING_HPP_
#define CONCLAB_COUPLING_HPP_

// The gap law D_{m,l}: pick a uniform m-subset x_1 < ... < x_m of [l] and
// report d_1 = x_1, d_i = x_i - x_{i-1}. Each admissible tuple (d_i >= 1,
// sum d_i <= l) has mass 1 / C(l, m).
//
// The coupling pairs D_{m,l} with i.i.d. e_1, ..., e_{m*} such that
// e_i <= d_i surely and Pr[e_i = k] = beta for k <= alpha, with the
// remaining 1 - floor(alpha) beta on floor(alpha) + 1. It is built one
// coordinate at a time: the first gap (capped at floor(alpha) + 1) and e_1
// are drawn comonotonically from one uniform, and the rest is recursively
// coupled on a shorter horizon.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "conclab/common.hpp"

namespace conclab {

struct GapTuple {
  std::vector<int> gaps;
  int horizon = 0;
};

struct CoupledGaps {
  GapTuple d;
  std::vector<int> e;
  Rational alpha;
  Rational beta;
};

using GapPmf = std::map<std::vector<int>, Rational>;
using CoupledPmf = std::map<std::pair<std::vector<int>, std::vector<int>>, Rational>;

inline std::vector<int> gaps_of_subset(const std::vector<int>& sorted_one_based) {
  std::vector<int> gaps(sorted_one_based.size());
  int previous = 0;
  for (std::size_t i = 0; i < sorted_one_based.size(); ++i) {
    gaps[i] = sorted_one_based[i] - previous;
    previous = sorted_one_based[i];
  }
  return gaps;
}

inline GapTuple sample_subset_gaps(int m, int ell, std::uint64_t seed) {
  require(m >= 1, "sample_subset_gaps needs m >= 1");
  require(m <= ell, "sample_subset_gaps needs m <= l");
  Rng rng(seed);
  std::vector<int> pool(ell);
  for (int i = 0; i < ell; ++i) pool[i] = i + 1;
  for (int i = 0; i < m; ++i) {
    auto j = i + static_cast<int>(uniform_below(rng, ell - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> chosen(pool.begin(), pool.begin() + m);
  std::sort(chosen.begin(), chosen.end());
  return {gaps_of_subset(chosen), ell};
}

// Exhaustive pmf of D_{m,l}. m = 0 gives the point mass on the empty tuple.
inline GapPmf gap_distribution_exact(int m, int ell, const Budget& budget = {}) {
  require(m >= 0 && m <= ell, "gap_distribution_exact needs 0 <= m <= l");
  Integer count = binomial(ell, m);
  budget.check_enumeration(to_double(count), "gap_distribution_exact");
  Rational mass(Integer(1), count);
  GapPmf pmf;
  for_each_combination(ell, m, [&](const std::vector<int>& idx) {
    std::vector<int> one_based(idx);
    for (auto& v : one_based) ++v;
    pmf.emplace(gaps_of_subset(one_based), mass);
  });
  return pmf;
}

namespace detail {

// One joint atom of a single inductive step: the capped first gap, the drawn
// e value (0 when no e is drawn) and its probability.
struct StepCell {
  int d_first;
  int e_first;
  Rational mass;
};

// Pr[d_1 = k] = C(l - k, m - 1) / C(l, m) under D_{m,l}.
inline Rational first_gap_mass(int m, int ell, int k) {
  return Rational(binomial(ell - k, m - 1), binomial(ell, m));
}

// Cells of the first step. With draws_e, d_1 is capped at cap + 1 and coupled
// comonotonically with e (pmf beta on 1..cap, rest on cap + 1); without, d_1
// is drawn on its own over 1..l-m+1.
inline std::vector<StepCell> step_cells(int m, int ell, bool draws_e, int cap,
                                        const Rational& beta) {
  std::vector<StepCell> cells;
  if (!draws_e) {
    for (int k = 1; k <= ell - m + 1; ++k) {
      Rational mass = first_gap_mass(m, ell, k);
      if (mass > 0) cells.push_back({k, 0, mass});
    }
    return cells;
  }
  std::vector<Rational> d_pmf(cap + 2, Rational(0)), e_pmf(cap + 2, Rational(0));
  Rational d_rest(1);
  for (int k = 1; k <= cap; ++k) {
    d_pmf[k] = first_gap_mass(m, ell, k);
    d_rest -= d_pmf[k];
    e_pmf[k] = beta;
  }
  d_pmf[cap + 1] = d_rest;
  e_pmf[cap + 1] = Rational(1) - Rational(cap) * beta;
  // Quantile coupling: walk both CDFs and emit the overlap of each pair of
  // level sets.
  Rational d_cdf(0), e_cdf(0), position(0);
  int dk = 1, ek = 1;
  while (dk <= cap + 1 && ek <= cap + 1) {
    Rational d_next = d_cdf + d_pmf[dk];
    Rational e_next = e_cdf + e_pmf[ek];
    Rational upper = std::min(d_next, e_next);
    if (upper > position) {
      if (ek > dk) {
        throw Error("coupling step violates e <= d at k = " + std::to_string(dk) +
                    "; Pr[d_1 <= k] exceeds k * beta");
      }
      cells.push_back({dk, ek, upper - position});
      position = upper;
    }
    if (d_next == upper) {
      d_cdf = d_next;
      ++dk;
    }
    if (e_next == upper) {
      e_cdf = e_next;
      ++ek;
    }
  }
  return cells;
}

struct CouplingParams {
  int cap;        // floor(alpha)
  Rational beta;  // fixed at the top level for every step
};

// Recursive construction. `choose` picks one cell index (sampling) and is only
// used by sample_recursive; exhaust_recursive branches over every cell.
template <typename Choose>
std::pair<std::vector<int>, std::vector<int>> sample_recursive(
    int m, int ms, int ell, const CouplingParams& params, Choose& choose) {
  if (m == 0) return {};
  auto cells = step_cells(m, ell, ms > 0, params.cap, params.beta);
  const StepCell& cell = cells[choose(cells)];
  if (ms == 0) {
    auto rest = sample_recursive(m - 1, 0, ell - cell.d_first, params, choose);
    rest.first.insert(rest.first.begin(), cell.d_first);
    return rest;
  }
  if (cell.d_first <= params.cap) {
    auto rest = sample_recursive(m - 1, ms - 1, ell - cell.d_first, params, choose);
    rest.first.insert(rest.first.begin(), cell.d_first);
    rest.second.insert(rest.second.begin(), cell.e_first);
    return rest;
  }
  // d_1 > floor(alpha): the recursive tuple is (d_2, ..., d_m, d_1 - cap).
  auto rest = sample_recursive(m, ms - 1, ell - params.cap, params, choose);
  std::vector<int> d;
  d.reserve(m);
  d.push_back(rest.first.back() + params.cap);
  d.insert(d.end(), rest.first.begin(), rest.first.end() - 1);
  rest.second.insert(rest.second.begin(), cell.e_first);
  return {std::move(d), std::move(rest.second)};
}

inline CoupledPmf exhaust_recursive(int m, int ms, int ell,
                                    const CouplingParams& params,
                                    std::map<std::tuple<int, int, int>, CoupledPmf>& memo) {
  if (m == 0) return CoupledPmf{{{{}, {}}, Rational(1)}};
  auto key = std::make_tuple(m, ms, ell);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  CoupledPmf result;
  for (const auto& cell : step_cells(m, ell, ms > 0, params.cap, params.beta)) {
    if (ms == 0 || cell.d_first <= params.cap) {
      auto sub = exhaust_recursive(m - 1, ms == 0 ? 0 : ms - 1, ell - cell.d_first,
                                   params, memo);
      for (const auto& [de, mass] : sub) {
        std::vector<int> d{cell.d_first};
        d.insert(d.end(), de.first.begin(), de.first.end());
        std::vector<int> e;
        if (ms > 0) e.push_back(cell.e_first);
        e.insert(e.end(), de.second.begin(), de.second.end());
        result[{std::move(d), std::move(e)}] += cell.mass * mass;
      }
    } else {
      auto sub = exhaust_recursive(m, ms - 1, ell - params.cap, params, memo);
      for (const auto& [de, mass] : sub) {
        std::vector<int> d{de.first.back() + params.cap};
        d.insert(d.end(), de.first.begin(), de.first.end() - 1);
        std::vector<int> e{cell.e_first};
        e.insert(e.end(), de.second.begin(), de.second.end());
        result[{std::move(d), std::move(e)}] += cell.mass * mass;
      }
    }
  }
  memo.emplace(key, result);
  return result;
}

inline CouplingParams validate_coupling(int m, int ms, int ell,
                                        const Rational& alpha) {
  require(ms >= 1, "coupling needs 1 <= m*");
  require(ms <= m, "coupling needs m* <= m");
  require(m <= ell, "coupling needs m <= l");
  require(alpha >= 1, "coupling needs alpha >= 1");
  require(alpha * (m + ms) <= ell, "coupling needs alpha <= l / (m + m*)");
  Rational beta = Rational(m) / (Rational(ell) - alpha * ms);
  require(beta * alpha <= 1, "coupling needs beta = m / (l - alpha m*) <= 1 / alpha");
  Integer cap = numerator(alpha) / denominator(alpha);
  return {static_cast<int>(cap.convert_to<long>()), beta};
}

}  // namespace detail

inline Rational coupling_beta(int m, int ms, int ell, const Rational& alpha) {
  return detail::validate_coupling(m, ms, ell, alpha).beta;
}

inline CoupledGaps sample_coupled_gaps(int m, int ms, int ell,
                                       const Rational& alpha, std::uint64_t seed) {
  auto params = detail::validate_coupling(m, ms, ell, alpha);
  Rng rng(seed);
  auto choose = [&rng](const std::vector<detail::StepCell>& cells) {
    double u = uniform01(rng);
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
      cumulative += to_double(cells[i].mass);
      if (u < cumulative) return i;
    }
    return cells.size() - 1;
  };
  auto [d, e] = detail::sample_recursive(m, ms, ell, params, choose);
  return {{std::move(d), ell}, std::move(e), alpha, params.beta};
}

inline CoupledGaps sample_coupled_gaps(int m, int ms, int ell, double alpha,
                                       std::uint64_t seed) {
  return sample_coupled_gaps(m, ms, ell, Rational(alpha), seed);
}

// Joint law of (d, e) obtained by exhausting every cell of every step.
inline CoupledPmf coupled_gaps_exact(int m, int ms, int ell, const Rational& alpha) {
  auto params = detail::validate_coupling(m, ms, ell, alpha);
  std::map<std::tuple<int, int, int>, CoupledPmf> memo;
  return detail::exhaust_recursive(m, ms, ell, params, memo);
}

// Per-coordinate law of each e_i: beta on 1..floor(alpha), the rest on
// floor(alpha) + 1.
inline std::map<int, Rational> coupling_e_pmf(int m, int ms, int ell,
                                              const Rational& alpha) {
  auto params = detail::validate_coupling(m, ms, ell, alpha);
  std::map<int, Rational> pmf;
  for (int k = 1; k <= params.cap; ++k) pmf[k] = params.beta;
  Rational rest = Rational(1) - Rational(params.cap) * params.beta;
  if (rest > 0) pmf[params.cap + 1] = rest;
  return pmf;
}

struct ClaimCheck {
  std::string claim;
  bool applicable = false;
  Rational max_discrepancy;
};

struct ConditionalClaimsReport {
  int m = 0;
  int ell = 0;
  int k = 0;
  ClaimCheck given_equal;    // d_1 = k  ->  (d_2..d_m) ~ D_{m-1, l-k}
  ClaimCheck given_greater;  // d_1 > k  ->  (d_2..d_m, d_1-k) ~ D_{m, l-k}
};

namespace detail {

inline Rational max_abs_difference(const GapPmf& a, const GapPmf& b) {
  Rational worst(0);
  for (const auto& [tuple, mass] : a) {
    auto it = b.find(tuple);
    Rational other = it == b.end() ? Rational(0) : it->second;
    worst = std::max(worst, Rational(abs(mass - other)));
  }
  for (const auto& [tuple, mass] : b)
    if (!a.count(tuple)) worst = std::max(worst, mass);
  return worst;
}

}  // namespace detail

// Exhaustive check of both conditional-law identities of D_{m,l}.
inline ConditionalClaimsReport verify_conditional_claims(int m, int ell, int k,
                                                         const Budget& budget = {}) {
  require(m >= 1 && k >= 1, "verify_conditional_claims needs m >= 1 and k >= 1");
  const bool eq_ok = k + m - 1 <= ell;
  const bool gt_ok = k + m <= ell;
  require(eq_ok || gt_ok, "verify_conditional_claims needs k + m - 1 <= l");
  ConditionalClaimsReport report{m, ell, k, {"pick-d-eq", eq_ok, 0},
                                 {"pick-d-gt", gt_ok, 0}};
  GapPmf full = gap_distribution_exact(m, ell, budget);
  if (eq_ok) {
    GapPmf conditional;
    Rational event(0);
    for (const auto& [d, mass] : full) {
      if (d[0] != k) continue;
      event += mass;
      conditional[std::vector<int>(d.begin() + 1, d.end())] += mass;
    }
    for (auto& [d, mass] : conditional) mass /= event;
    report.given_equal.max_discrepancy = detail::max_abs_difference(
        conditional, gap_distribution_exact(m - 1, ell - k, budget));
  }
  if (gt_ok) {
    GapPmf conditional;
    Rational event(0);
    for (const auto& [d, mass] : full) {
      if (d[0] <= k) continue;
      event += mass;
      std::vector<int> rotated(d.begin() + 1, d.end());
      rotated.push_back(d[0] - k);
      conditional[rotated] += mass;
    }
    for (auto& [d, mass] : conditional) mass /= event;
    report.given_greater.max_discrepancy = detail::max_abs_difference(
        conditional, gap_distribution_exact(m, ell - k, budget));
  }
  return report;
}

}  // namespace conclab

#endif  // CONCLAB_COUPLING_HPP_
