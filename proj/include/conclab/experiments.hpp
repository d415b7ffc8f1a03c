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

#ifndef CONCLAB_EXPERIMENTS_HPP_
#define CONCLAB_EXPERIMENTS_HPP_

// The experiment registry. Every experiment pairs one bound with one oracle
// and yields ReportRows; run_experiment expands parameter sweeps, runs the
// points (optionally in parallel) and orders rows deterministically.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "conclab/common.hpp"
#include "conclab/core_bounds.hpp"
#include "conclab/coupling.hpp"
#include "conclab/expander.hpp"
#include "conclab/formats.hpp"
#include "conclab/harness.hpp"
#include "conclab/polybound.hpp"
#include "conclab/subgraph.hpp"

namespace conclab {

namespace experiments {

inline constexpr double kFloatTolerance = 1e-9;
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline ReportRow make_row(const std::string& id, const ParamPoint& point) {
  ReportRow row;
  row.experiment = id;
  row.params = point_to_json(point);
  return row;
}

inline std::string upper_verdict(double bound, double oracle, double tolerance = kFloatTolerance) {
  return oracle <= bound + tolerance ? "dominates" : "violated";
}

inline std::string upper_verdict_exact(const Rational& bound, const Rational& oracle) {
  return oracle <= bound ? "dominates" : "violated";
}

// A lower bound must not exceed the oracle beyond a relative 1e-9.
inline std::string lower_verdict(double bound, double oracle) {
  return bound <= oracle * (1.0 + kFloatTolerance) ? "lower-bounds oracle" : "violated";
}

// Monte Carlo: oracle minus three binomial standard deviations.
inline std::string mc_verdict(double bound, const Estimate& estimate, std::uint64_t trials) {
  const double sigma =
      std::sqrt(estimate.value * (1.0 - estimate.value) / static_cast<double>(trials));
  return estimate.value - 3.0 * sigma <= bound ? "dominates" : "violated";
}

// exact(dist) comparison of the growth-bounded tail for either scalar.
template <typename S>
ReportRow gb_row(const std::string& id, const ParamPoint& point, const BasicDistribution<S>& dist,
                 const S& delta, const S& eps, int m) {
  ReportRow row = make_row(id, point);
  const auto check = check_growth_bounded(dist, delta, m);
  const S total_mean = coordinate_mean(dist) * S(static_cast<long>(dist.size()));
  const S oracle = exact_tail(dist, total_mean * (S(1) + eps));
  const S bound = markov_tail_bound_exact(delta, eps, m);
  row.params["gb_ratio"] = to_double(check.ratio);
  row.bound = to_double(bound);
  row.oracle = to_double(oracle);
  row.bound_kind = row.oracle_kind = kIsExact<S> ? "exact-rational" : "float";
  if (!check.holds) {
    row.verdict = "not-applicable";
  } else if constexpr (kIsExact<S>) {
    row.verdict = upper_verdict_exact(bound, oracle);
  } else {
    row.verdict = upper_verdict(bound, oracle);
  }
  return row;
}

inline std::vector<ReportRow> run_gb_check(const ParamPoint& point, const RunContext& ctx) {
  const std::string& family = get_string(point, "family");
  const Rational delta = get_rational(point, "delta");
  const Rational eps = get_rational(point, "eps");
  const int m = static_cast<int>(get_int(point, "m"));
  const int n = static_cast<int>(get_int(point, "n"));
  if (family == "file") {
    const auto dist = load_distribution(get_string(point, "file"));
    if (auto* exact = std::get_if<ExactDistribution>(&dist))
      return {gb_row("gb-check", point, *exact, delta, eps, m)};
    return {gb_row("gb-check", point, std::get<FloatDistribution>(dist), to_double(delta),
                   to_double(eps), m)};
  }
  const Rational p = get_rational(point, "p");
  if (family == "product")
    return {gb_row("gb-check", point, product_bernoulli(n, p, ctx.budget), delta, eps, m)};
  if (family == "coin")
    return {gb_row("gb-check", point, duplicated_coin(n, p), delta, eps, m)};
  return {gb_row("gb-check", point, permutation_indicator_distribution(n, ctx.budget), delta,
                 eps, m)};
}

inline std::vector<ReportRow> run_toy_chernoff(const ParamPoint& point, const RunContext&) {
  ReportRow row = make_row("toy-chernoff", point);
  const long n = get_int(point, "n");
  const Rational eps = get_rational(point, "eps");
  const long threshold = ceil_to_long(Rational(n) * (Rational(1) + eps) / 2);
  const Rational oracle = binomial_upper_tail<Rational>(static_cast<int>(n), Rational(1, 2),
                                                        threshold);
  row.bound = toy_chernoff_bound(n, to_double(eps));
  row.bound_kind = "float";
  row.oracle = to_double(oracle);
  row.oracle_kind = "exact-rational";
  row.params["threshold"] = threshold;
  row.verdict = oracle <= from_double<Rational>(row.bound) ? "dominates" : "violated";
  return {row};
}

inline std::vector<ReportRow> run_wor_bound(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("wor-bound", point);
  const int n = static_cast<int>(get_int(point, "n"));
  const Rational p = get_rational(point, "p");
  const Rational delta = get_rational(point, "delta");
  const double eps = get_real(point, "eps");
  const double c = get_real(point, "c");
  const auto bound = wor_tail_bound(to_double(delta), eps, c, to_double(p), n);
  const long threshold = ceil_to_long(Rational(n) * p * (Rational(1) + from_double<Rational>(eps)));
  const Rational oracle = binomial_upper_tail<Rational>(n, p, threshold);
  row.params["m_used"] = bound.m;
  row.bound = bound.value;
  row.bound_kind = "float";
  row.oracle = to_double(oracle);
  row.oracle_kind = "exact-rational";
  bool certified = true;
  if (!bound.vacuous) {
    const auto dist = product_bernoulli(n, p, ctx.budget);
    certified = check_gb_without_repetition(dist, delta, bound.m).holds;
  }
  row.verdict = certified ? upper_verdict(row.bound, row.oracle) : "not-applicable";
  return {row};
}

inline std::vector<ReportRow> run_coupling_verify(const ParamPoint& point, const RunContext& ctx) {
  const int m = static_cast<int>(get_int(point, "m"));
  const int ell = static_cast<int>(get_int(point, "ell"));
  const long k_only = get_int(point, "k");
  require(m >= 1 && m <= ell, "coupling-verify needs 1 <= m <= l");
  Rational worst_eq(0), worst_gt(0);
  bool any_eq = false, any_gt = false;
  for (int k = 1; k + m - 1 <= ell; ++k) {
    if (k_only > 0 && k != k_only) continue;
    const auto report = verify_conditional_claims(m, ell, k, ctx.budget);
    if (report.given_equal.applicable) {
      any_eq = true;
      worst_eq = std::max(worst_eq, report.given_equal.max_discrepancy);
    }
    if (report.given_greater.applicable) {
      any_gt = true;
      worst_gt = std::max(worst_gt, report.given_greater.max_discrepancy);
    }
  }
  std::vector<ReportRow> rows;
  auto claim_row = [&](const char* claim, bool applicable, const Rational& worst) {
    ReportRow row = make_row("coupling-verify", point);
    row.params["claim"] = claim;
    row.bound = 0.0;
    row.bound_kind = "exact-rational";
    row.oracle_kind = "exact-rational";
    if (!applicable) {
      row.verdict = "not-applicable";
    } else {
      row.oracle = to_double(worst);
      row.params["max_discrepancy"] = to_string(worst);
      row.verdict = worst == 0 ? "exact" : "violated";
    }
    rows.push_back(std::move(row));
  };
  claim_row("pick-d-eq", any_eq, worst_eq);
  claim_row("pick-d-gt", any_gt, worst_gt);

  const long ms = get_int(point, "ms");
  if (ms > 0) {
    const Rational alpha = get_rational(point, "alpha");
    const auto joint = coupled_gaps_exact(m, static_cast<int>(ms), ell, alpha);
    const auto e_pmf = coupling_e_pmf(m, static_cast<int>(ms), ell, alpha);
    const auto d_law = gap_distribution_exact(m, ell, ctx.budget);
    GapPmf d_marginal, e_joint;
    bool ordered = true;
    for (const auto& [de, mass] : joint) {
      d_marginal[de.first] += mass;
      e_joint[de.second] += mass;
      for (int i = 0; i < ms; ++i)
        if (de.second[i] > de.first[i]) ordered = false;
    }
    GapPmf e_product;
    for (const auto& [e, mass] : e_joint) {
      Rational product(1);
      for (int v : e) product *= e_pmf.count(v) ? e_pmf.at(v) : Rational(0);
      e_product[e] = product;
    }
    const Rational d_gap = detail::max_abs_difference(d_marginal, d_law);
    Rational e_gap = detail::max_abs_difference(e_joint, e_product);
    Rational e_total(0);
    for (const auto& [e, mass] : e_product) e_total += mass;
    if (e_total != 1) e_gap = std::max(e_gap, Rational(abs(Rational(1) - e_total)));
    ReportRow d_row = make_row("coupling-verify", point);
    d_row.params["claim"] = "d-marginal";
    d_row.params["max_discrepancy"] = to_string(d_gap);
    d_row.bound = 0.0;
    d_row.oracle = to_double(d_gap);
    d_row.bound_kind = d_row.oracle_kind = "exact-rational";
    d_row.verdict = d_gap == 0 ? "exact" : "violated";
    rows.push_back(d_row);
    ReportRow e_row = d_row;
    e_row.params["claim"] = "e-iid-marginal";
    e_row.params["max_discrepancy"] = to_string(e_gap);
    e_row.oracle = to_double(e_gap);
    e_row.verdict = e_gap == 0 ? "exact" : "violated";
    rows.push_back(e_row);
    ReportRow order_row = d_row;
    order_row.params["claim"] = "e-le-d";
    order_row.params.erase("max_discrepancy");
    order_row.oracle = ordered ? 0.0 : 1.0;
    order_row.verdict = ordered ? "exact" : "violated";
    rows.push_back(order_row);
  }
  return rows;
}

inline std::vector<ReportRow> run_expander_hitting(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("expander-hitting", point);
  const double lambda = get_real(point, "lambda");
  const int n = static_cast<int>(get_int(point, "n"));
  const double mu = get_real(point, "mu");
  const int ell = static_cast<int>(get_int(point, "steps"));
  const double eps = get_real(point, "eps");
  const int m = static_cast<int>(get_int(point, "m"));
  WalkSpec spec(build_jn_construction(lambda, n), leading_target(n, mu), ell);
  const auto pre = hitting_precondition(lambda, ell, mu, eps, m);
  row.params["m_limit"] = pre.m_limit;
  row.bound = hitting_bound(mu, eps, m);
  row.bound_kind = "float";
  const bool exact = to_double(binomial(ell, m)) <= static_cast<double>(ctx.budget.enumeration);
  const Estimate oracle = avg_stay_prob(spec, m, exact ? EvalMode::kExact : EvalMode::kMonteCarlo,
                                        ctx.trials, ctx.seed, ctx.budget);
  row.oracle = oracle.value;
  row.oracle_ci = oracle.ci_half_width;
  row.oracle_kind = exact ? "float" : "mc-estimate";
  if (!pre.holds) {
    row.verdict = "not-applicable";
  } else {
    row.verdict = upper_verdict(row.bound, oracle.value - oracle.ci_half_width);
  }
  return {row};
}

inline double walk_oracle(double lambda, int n, double mu, int ell, double eps,
                          const Budget& budget) {
  if (n == 0) return walk_tail_two_state(lambda, mu, ell, eps);
  WalkSpec spec(build_jn_construction(lambda, n), leading_target(n, mu), ell);
  return walk_tail_exact(spec, eps, budget);
}

inline std::vector<ReportRow> run_expander_tail(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("expander-tail", point);
  const double lambda = get_real(point, "lambda");
  const double mu = get_real(point, "mu");
  const int ell = static_cast<int>(get_int(point, "steps"));
  const double eps = get_real(point, "eps");
  const int n = static_cast<int>(get_int(point, "n"));
  const auto bound = main_tail_bound(mu, lambda, eps, ell);
  row.params["vacuous"] = bound.vacuous;
  row.bound = bound.value;
  row.bound_kind = "float";
  row.oracle = walk_oracle(lambda, n, mu, ell, eps, ctx.budget);
  row.oracle_kind = "float";
  row.verdict = upper_verdict(row.bound, row.oracle);
  return {row};
}

inline std::vector<ReportRow> run_expander_tight(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("expander-tight", point);
  const double lambda = get_real(point, "lambda");
  const double mu = get_real(point, "mu");
  const int ell = static_cast<int>(get_int(point, "steps"));
  const double eps = get_real(point, "eps");
  const int n = static_cast<int>(get_int(point, "n"));
  const auto bound = tight_tail_bound(mu, lambda, eps, ell);
  row.params["remark_valid"] = bound.remark_valid;
  row.params["vacuous"] = bound.vacuous;
  row.bound = bound.value;
  row.bound_kind = "float";
  row.oracle = walk_oracle(lambda, n, mu, ell, eps, ctx.budget);
  row.oracle_kind = "float";
  const std::string verdict = upper_verdict(row.bound, row.oracle);
  row.verdict = bound.remark_valid || verdict == "dominates" ? verdict : "not-applicable";
  return {row};
}

inline std::vector<ReportRow> run_expander_lower(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("expander-lower", point);
  const double lambda = get_real(point, "lambda");
  const double mu = get_real(point, "mu");
  const int ell = static_cast<int>(get_int(point, "steps"));
  const double eps = get_real(point, "eps");
  const int n = static_cast<int>(get_int(point, "n"));
  const auto bound = optimality_lower_bound(lambda, mu, eps, ell);
  row.params["visits"] = bound.visits;
  row.params["runs"] = bound.runs;
  row.params["rounded"] = bound.rounded;
  row.bound = bound.value;
  row.bound_kind = "float";
  row.oracle = walk_oracle(lambda, n, mu, ell, eps, ctx.budget);
  row.oracle_kind = "float";
  row.verdict = lower_verdict(row.bound, row.oracle);
  return {row};
}

// sum_{x < x'} g_{x,x} g_{x',x'}: pairs of fixed points of the permutation.
inline ExactPolynomial fixed_point_pairs(int n) {
  std::vector<Monomial<Rational>> monomials;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y) monomials.push_back({Rational(1), {x * n + x, y * n + y}});
  return ExactPolynomial(n * n, std::move(monomials));
}

inline std::vector<ReportRow> run_poly_bound(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("poly-bound", point);
  const std::string& family = get_string(point, "family");
  const int n = static_cast<int>(get_int(point, "n"));
  const std::string& p_text = get_string(point, "p");

  if (family == "mc-triangle") {
    const Pattern g = load_pattern(get_string(point, "pattern"));
    const double p = p_text == "auto" ? std::pow(static_cast<double>(n), -0.75)
                                      : to_double(parse_rational(p_text));
    const double eps = get_real(point, "eps");
    const auto stats = copy_poly_stats(g, n, p, ctx.budget);
    const double eps_bound = std::min(eps, 0.5);
    const auto bound = independent_poly_bound(stats.mu, stats.mu_prime, eps_bound,
                                              g.edge_count());
    row.params["mu"] = stats.mu;
    row.params["mu_prime"] = stats.mu_prime;
    row.params["eps_bound"] = eps_bound;
    row.params["m_used"] = bound.m;
    row.bound = bound.value;
    row.bound_kind = "float";
    const auto model = RandomGraphModel::gnp(n, from_double<Rational>(p));
    const Estimate oracle = subgraph_tail_mc(model, g, stats.mu * (1.0 + eps), ctx.trials,
                                             ctx.seed, ctx.threads, ctx.budget);
    row.oracle = oracle.value;
    row.oracle_ci = oracle.ci_half_width;
    row.oracle_kind = "mc-estimate";
    row.verdict = mc_verdict(row.bound, oracle, ctx.trials);
    return {row};
  }

  const Rational delta = get_rational(point, "delta");
  const Rational eps = get_rational(point, "eps");
  const int m = static_cast<int>(get_int(point, "m"));
  ExactPolynomial poly = family == "perm"
                             ? fixed_point_pairs(n)
                             : copy_polynomial<Rational>(load_pattern(get_string(point, "pattern")),
                                                         n, ctx.budget);
  ExactDistribution dist =
      family == "perm"
          ? permutation_indicator_distribution(n, ctx.budget)
          : edge_distribution(
                RandomGraphModel::gnp(n, p_text == "auto" ? Rational(1, 2) : parse_rational(p_text)),
                ctx.budget);
  const int k = poly.degree();
  const auto ai = check_almost_independent(dist, delta, k * m, ctx.budget);
  const auto stats = poly_stats(poly, dist, ctx.budget);
  const Rational bound = kv_bound(stats, delta, eps, m, k);
  const Rational oracle = poly_tail_exact(poly, dist, stats.mu0_star * (Rational(1) + eps));
  row.params["almost_independent"] = ai.holds;
  row.params["mu0_star"] = to_double(stats.mu0_star);
  row.bound = to_double(bound);
  row.oracle = to_double(oracle);
  row.bound_kind = row.oracle_kind = "exact-rational";
  row.verdict = ai.holds ? upper_verdict_exact(bound, oracle) : "not-applicable";
  return {row};
}

inline std::vector<ReportRow> run_es_tightness(const ParamPoint& point, const RunContext&) {
  const int ell = static_cast<int>(get_int(point, "ell"));
  const Rational p = get_rational(point, "p");
  const int k = static_cast<int>(get_int(point, "k"));
  const Rational eps = get_rational(point, "eps");
  require(k >= 1 && k <= ell, "es-tightness needs 1 <= k <= l");
  const double pd = to_double(p), ed = to_double(eps);
  std::vector<ReportRow> rows;

  ReportRow chain = make_row("es-tightness", point);
  chain.params["claim"] = "chain";
  const long s = ceil_to_long(p * ell * (Rational(1) + 2 * eps));
  chain.params["s"] = s;
  chain.bound_kind = chain.oracle_kind = "exact-rational";
  if (s >= k && s <= ell) {
    const Rational lhs = es_tail_exact(ell, p, k, Rational(binomial(s, k)));
    const Rational rhs = binomial_upper_tail(ell, p, s);
    chain.bound = to_double(rhs);
    chain.oracle = to_double(lhs);
    chain.verdict = lhs == rhs ? "exact" : "violated";
  } else {
    chain.verdict = "not-applicable";
  }
  rows.push_back(chain);

  ReportRow reverse = make_row("es-tightness", point);
  reverse.params["claim"] = "reverse-chernoff";
  reverse.bound_kind = "float";
  reverse.oracle_kind = "exact-rational";
  {
    const long t = ceil_to_long(p * ell * (Rational(1) + eps));
    reverse.oracle = to_double(binomial_upper_tail(ell, p, t));
    if (ed > 0 && ed <= 0.5 && pd <= 0.5 && ed * ed * pd * ell >= 3.0) {
      reverse.bound = reverse_chernoff_floor(pd, ell, ed);
      reverse.verdict = lower_verdict(reverse.bound, reverse.oracle);
    } else {
      reverse.verdict = "not-applicable";
    }
  }
  rows.push_back(reverse);

  ReportRow lower = make_row("es-tightness", point);
  lower.params["claim"] = "es-lower";
  lower.bound_kind = "float";
  lower.oracle_kind = "exact-rational";
  {
    const Rational t = power(p, k) * Rational(binomial(ell, k)) * (Rational(1) + eps);
    lower.oracle = to_double(es_tail_exact(ell, p, k, t));
    if (ed > 0 && ed <= 0.25 && pd <= 0.5 && ed * pd * ell >= k && ed * ed * pd * ell >= 0.75) {
      lower.bound = es_lower_floor(pd, ell, ed, k);
      lower.verdict = lower_verdict(lower.bound, lower.oracle);
    } else {
      lower.verdict = "not-applicable";
    }
  }
  rows.push_back(lower);
  return rows;
}

inline std::vector<ReportRow> run_perm_ai(const ParamPoint& point, const RunContext& ctx) {
  ReportRow row = make_row("perm-ai", point);
  const int n = static_cast<int>(get_int(point, "n"));
  const Rational delta = get_rational(point, "delta");
  int m = static_cast<int>(get_int(point, "m"));
  if (m == 0) m = std::max(1, n / 2);
  row.params["m_used"] = m;
  const auto dist = permutation_indicator_distribution(n, ctx.budget);
  const auto ai = check_almost_independent(dist, delta, m, ctx.budget);
  row.bound = to_double(power(Rational(1) + delta, m));
  row.bound_kind = "exact-rational";
  row.oracle = ai.unbounded ? std::numeric_limits<double>::infinity() : to_double(ai.max_ratio);
  row.oracle_kind = "exact-rational";
  std::string worst;
  for (int v : ai.worst) worst += (worst.empty() ? "" : " ") + std::to_string(v);
  row.params["worst"] = worst;
  const bool claimed = delta >= 1 && m <= std::max(1, n / 2);
  row.verdict = ai.holds ? "dominates" : (claimed ? "violated" : "not-applicable");
  return {row};
}

inline std::string edges_text(const std::vector<Edge>& edges) {
  std::string text;
  for (auto [u, v] : edges)
    text += (text.empty() ? "" : " ") + std::to_string(u) + "-" + std::to_string(v);
  return text;
}

inline std::vector<ReportRow> run_graph_mstar(const ParamPoint& point, const RunContext& ctx) {
  const Pattern g = load_pattern(get_string(point, "pattern"));
  const int n = static_cast<int>(get_int(point, "n"));
  const Rational p = get_rational(point, "p");
  const auto result = m_star(n, p, g, ctx.budget);
  std::vector<ReportRow> rows;
  for (const auto& h : edge_subpatterns(g)) {
    ReportRow row = make_row("graph-mstar", point);
    row.params["H"] = edges_text(h.edges());
    row.params["m_star"] = result.value;
    const Rational cap = power(Rational(n), h.vertices()) * power(p, h.edge_count());
    const long packed = packing_number(n, result.value, h, ctx.budget).value;
    row.bound = to_double(cap);
    row.oracle = static_cast<double>(packed);
    row.bound_kind = row.oracle_kind = "exact-rational";
    if (result.value < pair_count(n)) {
      const long next = packing_number(n, result.value + 1, h, ctx.budget).value;
      row.params["packed_at_next"] = next;
      row.params["binds_at_next"] = Rational(next) > cap;
    }
    row.verdict = Rational(packed) <= cap ? "dominates" : "violated";
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<ReportRow> run_graph_tail(const ParamPoint& point, const RunContext& ctx) {
  const Pattern g = load_pattern(get_string(point, "pattern"));
  const int n = static_cast<int>(get_int(point, "n"));
  const std::string& kind = get_string(point, "model");
  const Rational eps = get_rational(point, "eps");
  const int m = static_cast<int>(get_int(point, "m"));
  const Rational delta_prime = get_rational(point, "delta_prime");
  const RandomGraphModel model =
      kind == "gnm" ? RandomGraphModel::gnm(n, get_int(point, "edges"))
                    : RandomGraphModel::gnp(n, get_rational(point, "p"));
  const Rational p = model.edge_probability();
  const std::string& delta_text = get_string(point, "delta");
  const Rational delta = delta_text == "auto"
                             ? minimal_premise_delta(g, n, m, p, ctx.budget)
                             : parse_rational(delta_text);
  std::vector<ReportRow> rows;

  ReportRow row = make_row("graph-tail", point);
  row.params["claim"] = "gb-tail";
  row.params["delta_used"] = to_double(delta);
  const auto report = graph_gb_check(g, model, delta, delta_prime, m, ctx.budget);
  row.params["premise"] = report.premise;
  row.params["almost_independent"] = report.almost_independent;
  row.params["growth_bounded"] = report.growth_bounded;
  const Rational bound = markov_tail_bound_exact(report.growth_factor - 1, eps, m);
  const Rational oracle =
      subgraph_tail_exact(model, g, report.mu * (Rational(1) + eps), ctx.budget);
  row.bound = to_double(bound);
  row.oracle = to_double(oracle);
  row.bound_kind = row.oracle_kind = "exact-rational";
  if (!report.certified()) {
    row.verdict = "not-applicable";
  } else if (!report.growth_bounded) {
    row.verdict = "violated";
  } else {
    row.verdict = upper_verdict_exact(bound, oracle);
  }
  rows.push_back(std::move(row));

  if (kind == "gnm") {
    ReportRow corr = make_row("graph-tail", point);
    corr.params["claim"] = "gnm-correction";
    const double ed = to_double(eps);
    const long edges = get_int(point, "edges");
    corr.bound = 1.0 + ed / 4.0;
    corr.bound_kind = "float";
    corr.oracle_kind = "float";
    const double e_g = g.edge_count();
    if (ed > 0 && ed <= 1 && static_cast<double>(edges) >= 9.0 * e_g * e_g / ed) {
      corr.oracle = gnm_correction_factor(g.edge_count(), edges);
      corr.verdict = upper_verdict(corr.bound, corr.oracle, 0.0);
    } else {
      corr.verdict = "not-applicable";
    }
    rows.push_back(std::move(corr));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Parameter schemas

inline ParamSpec int_param(std::string name, std::string def, std::string help, long lo, long hi) {
  return {name, ParamType::kInt, def, help,
          in_range(static_cast<double>(lo), static_cast<double>(hi), false, false, name,
                   "[" + std::to_string(lo) + ", " + std::to_string(hi) + "]")};
}

inline ParamSpec eps_param(std::string def, double lo, double hi, bool lo_open,
                           std::string interval) {
  return {"eps", ParamType::kRational, def, "relative deviation ε",
          in_range(lo, hi, lo_open, false, "ε", interval)};
}

inline ParamSpec lambda_param(std::string def) {
  return {"lambda", ParamType::kReal, def, "spectral parameter λ of λI + (1-λ)J/n",
          in_range(0, 1, false, true, "λ", "[0, 1)")};
}

inline ParamSpec mu_param(std::string def, bool open_top) {
  return {"mu", ParamType::kReal, def, "target density μ = |W|/n",
          in_range(0, 1, true, open_top, "μ", open_top ? "(0, 1)" : "(0, 1]")};
}

}  // namespace experiments

inline const std::vector<ExperimentSpec>& experiment_registry() {
  using namespace experiments;
  static const std::vector<ExperimentSpec> registry = {
      {"gb-check",
       "growth-bounded Markov bound ((1+δ)/(1+ε))^m vs exact tail of a small distribution",
       {{"family", ParamType::kString, "product", "product | coin | perm | file",
         one_of({"product", "coin", "perm", "file"})},
        int_param("n", "8", "coordinates (perm: N, giving N^2 coordinates)", 1, 12),
        {"p", ParamType::kRational, "1/2", "coin bias", in_range(0, 1, false, false, "p", "[0, 1]")},
        {"delta", ParamType::kRational, "1/4", "growth parameter δ",
         in_range(-1, 1e9, false, false, "δ", "[-1, ∞)")},
        int_param("m", "2", "moment order", 1, 64),
        eps_param("1/2", 0, 1e9, false, "[0, ∞)"),
        {"file", ParamType::kString, "-", "distribution JSON for family=file", nullptr}},
       run_gb_check},
      {"toy-chernoff", "exp(-ε²n/6) vs exact Pr[Bin(n,1/2) >= n(1+ε)/2]",
       {int_param("n", "20", "coin flips", 1, 100000), eps_param("1/2", 0, 0.5, false, "[0, 1/2]")},
       run_toy_chernoff},
      {"wor-bound",
       "without-repetition bound with m = ⌊cεμn⌋ vs exact binomial tail",
       {int_param("n", "16", "coordinates", 1, 30),
        {"p", ParamType::kRational, "1/2", "coin bias", in_range(0, 1, true, false, "p", "(0, 1]")},
        eps_param("1/2", 0, 1e9, false, "[0, ∞)"),
        {"c", ParamType::kReal, "1/2", "split constant c", in_range(0, 1, false, false, "c", "[0, 1]")},
        {"delta", ParamType::kRational, "0", "growth parameter δ",
         in_range(0, 1e9, false, false, "δ", "[0, ∞)")}},
       run_wor_bound},
      {"coupling-verify",
       "conditional-law claims of uniform gaps (pick-d-eq, pick-d-gt) and the coupling marginals "
       "vs exhaustive enumeration",
       {int_param("m", "3", "subset size", 1, 12), int_param("ell", "8", "ground set size ℓ", 1, 40),
        int_param("k", "0", "first-gap value to check, 0 for all", 0, 40),
        int_param("ms", "0", "coupled prefix length m*, 0 to skip the coupling rows", 0, 12),
        {"alpha", ParamType::kRational, "1", "cap α for the coupling rows",
         in_range(1, 1e9, false, false, "α", "[1, ∞)")}},
       run_coupling_verify},
      {"expander-hitting", "(μ(1+ε))^m vs average stay probability over random step sets",
       {lambda_param("1/4"), int_param("n", "4", "vertices", 1, 64), mu_param("1/2", false),
        int_param("steps", "8", "walk length ℓ", 1, 64),
        eps_param("1/2", 0, 1e9, false, "[0, ∞)"), int_param("m", "1", "step set size", 1, 64)},
       run_expander_hitting},
      {"expander-tail", "2exp(-(1-λ)ε²μℓ/18) vs exact walk tail (DP)",
       {lambda_param("1/4"), mu_param("1/2", false), int_param("steps", "14", "walk length ℓ", 1, 4096),
        eps_param("1/2", 0, 0.8, false, "[0, 4/5]"),
        int_param("n", "0", "vertices of λI+(1-λ)J/n, 0 for the lumped two-state chain", 0, 512)},
       run_expander_tail},
      {"expander-tight", "refined small-ε walk bound vs exact walk tail (DP)",
       {lambda_param("1/4"), mu_param("1/2", true), int_param("steps", "64", "walk length ℓ", 1, 4096),
        eps_param("1/4", 0, 0.5, true, "(0, 1/2]"),
        int_param("n", "0", "vertices of λI+(1-λ)J/n, 0 for the lumped two-state chain", 0, 512)},
       run_expander_tight},
      {"expander-lower", "run-structure lower bound vs exact walk tail (DP)",
       {lambda_param("1/2"), mu_param("1/2", true), int_param("steps", "20", "walk length ℓ", 1, 4096),
        eps_param("1/5", 0, 1e9, true, "(0, ∞)"),
        int_param("n", "4", "vertices of λI+(1-λ)J/n, 0 for the lumped two-state chain", 0, 512)},
       run_expander_lower},
      {"poly-bound",
       "polynomial bound with certified almost independence vs exact tail; mc-triangle: "
       "independent-input bound vs Monte Carlo triangle counts",
       {{"family", ParamType::kString, "graph", "graph | perm | mc-triangle",
         one_of({"graph", "perm", "mc-triangle"})},
        {"pattern", ParamType::kString, "k3", "pattern name or file", nullptr},
        int_param("n", "5", "host vertices (perm: N)", 1, 64),
        {"p", ParamType::kString, "auto", "edge probability; auto = 1/2 or n^(-3/4) for mc-triangle",
         nullptr},
        eps_param("1", 0, 1e9, true, "(0, ∞)"), int_param("m", "1", "moment order", 1, 16),
        {"delta", ParamType::kRational, "0", "almost-independence parameter δ",
         in_range(0, 1e9, false, false, "δ", "[0, ∞)")}},
       run_poly_bound},
      {"es-tightness",
       "elementary symmetric chain identity and the two lower floors vs exact binomial tails",
       {int_param("ell", "100", "variables ℓ", 1, 400),
        {"p", ParamType::kRational, "1/2", "coin bias", in_range(0, 1, true, true, "p", "(0, 1)")},
        int_param("k", "2", "degree", 1, 400), eps_param("1/4", 0, 1e9, true, "(0, ∞)")},
       run_es_tightness},
      {"perm-ai", "(1+δ)^m vs worst joint/product ratio of permutation indicators",
       {int_param("n", "4", "domain size N", 1, 6),
        {"delta", ParamType::kRational, "1", "almost-independence parameter δ",
         in_range(0, 1e9, false, false, "δ", "[0, ∞)")},
        int_param("m", "0", "tuple size bound, 0 for ⌊N/2⌋", 0, 36)},
       run_perm_ai},
      {"graph-mstar", "packing caps n^{v_H}p^{e_H} vs N(n, M*, H) for every sub-pattern H",
       {{"pattern", ParamType::kString, "k3", "pattern name or file", nullptr},
        int_param("n", "5", "host vertices", 2, 7),
        {"p", ParamType::kRational, "3/10", "edge probability", in_range(0, 1e9, false, false, "p", "[0, ∞)")}},
       run_graph_mstar},
      {"graph-tail",
       "copy-indicator growth-bounded tail ((1+δ'')/(1+ε))^m vs exact subgraph tail; "
       "G(n,m) correction factor",
       {{"pattern", ParamType::kString, "k3", "pattern name or file", nullptr},
        int_param("n", "4", "host vertices", 2, 6),
        {"model", ParamType::kString, "gnp", "gnp | gnm", one_of({"gnp", "gnm"})},
        {"p", ParamType::kRational, "1/2", "G(n,p) edge probability",
         in_range(0, 1, true, false, "p", "(0, 1]")},
        int_param("edges", "3", "G(n,m) edge count", 0, 15),
        eps_param("1/2", 0, 1e9, false, "[0, ∞)"), int_param("m", "1", "moment order", 1, 8),
        {"delta", ParamType::kString, "auto", "premise δ, auto for the smallest admissible", nullptr},
        {"delta_prime", ParamType::kRational, "0", "almost-independence δ'",
         in_range(0, 1e9, false, false, "δ'", "[0, ∞)")}},
       run_graph_tail},
  };
  return registry;
}

inline const ExperimentSpec& find_experiment(const std::string& id) {
  for (const auto& spec : experiment_registry())
    if (spec.id == id) return spec;
  throw ConfigError("unknown experiment \"" + id + "\"" + usage_hint(""));
}

// Arguments exclude the program name.
inline RunConfig parse_config(std::vector<std::string> args) {
  CommandLine cli(experiment_registry());
  return cli.parse(std::move(args));
}

// Cartesian product of the sweeps, in schema order.
inline std::vector<ParamPoint> expand_sweeps(const ExperimentSpec& spec, const RunConfig& config) {
  std::vector<ParamPoint> points{ParamPoint{}};
  for (const auto& param : spec.params) {
    const auto& values = config.params.at(param.name);
    std::vector<ParamPoint> next;
    for (const auto& partial : points)
      for (const auto& value : values) {
        ParamPoint p = partial;
        p[param.name] = value;
        next.push_back(std::move(p));
      }
    points = std::move(next);
  }
  return points;
}

// Runs every sweep point; rows come back ordered by experiment id, then
// parameter snapshot. Each point's seed is derived from the master seed, the
// experiment id and the snapshot, so neither scheduling nor sweep order
// changes any value.
inline std::vector<ReportRow> run_experiment(const RunConfig& config) {
  const ExperimentSpec& spec = find_experiment(config.command);
  const auto points = expand_sweeps(spec, config);
  std::vector<std::vector<ReportRow>> results(points.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      const ParamPoint& point = points[i];
      RunContext ctx;
      ctx.seed = derive_seed(config.seed, fnv1a64(spec.id), fnv1a64(point_to_json(point).dump()));
      ctx.trials = config.trials;
      ctx.threads = points.size() == 1 ? config.threads : 1;
      ctx.budget = config.budget;
      const auto start = std::chrono::steady_clock::now();
      std::vector<ReportRow> rows;
      try {
        rows = spec.run(point, ctx);
      } catch (const std::exception& e) {
        ReportRow row = experiments::make_row(spec.id, point);
        row.params["error"] = e.what();
        row.verdict = "error";
        rows = {row};
      }
      const double ms =
          config.timing ? std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count()
                        : 0.0;
      for (auto& row : rows) row.ms = ms;
      results[i] = std::move(rows);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::vector<ReportRow> rows;
  for (auto& r : results)
    for (auto& row : r) rows.push_back(std::move(row));
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    if (a.experiment != b.experiment) return a.experiment < b.experiment;
    return a.param_json() < b.param_json();
  });
  return rows;
}

}  // namespace conclab

#endif  // CONCLAB_EXPERIMENTS_HPP_
