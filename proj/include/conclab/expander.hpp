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

#ifndef CONCLAB_EXPANDER_HPP_
#define CONCLAB_EXPANDER_HPP_

// Random walks on regular graphs given by their symmetric doubly stochastic
// transition matrix: spectral quantities, exact stay / tail oracles, the
// hitting and Chernoff-type bounds, and the lambda I + (1 - lambda) J / n
// construction with its explicit lower bound.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conclab/common.hpp"
#include "conclab/core_bounds.hpp"

namespace conclab {

using RationalMatrix = std::vector<std::vector<Rational>>;

class TransitionMatrix {
 public:
  static TransitionMatrix from_doubles(Eigen::MatrixXd entries) {
    TransitionMatrix a;
    a.entries_ = std::move(entries);
    a.validate();
    return a;
  }

  // Keeps the exact entries; the double view is their rounding.
  static TransitionMatrix from_rationals(RationalMatrix exact) {
    const auto n = static_cast<Eigen::Index>(exact.size());
    if (n == 0) throw ValidationError("transition matrix must be nonempty");
    TransitionMatrix a;
    a.entries_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (static_cast<Eigen::Index>(exact[i].size()) != n)
        throw ValidationError("transition matrix must be square");
      Rational row(0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (exact[i][j] != exact[j][i])
          throw ValidationError("transition matrix is not symmetric");
        if (exact[i][j] < 0)
          throw ValidationError("transition matrix has a negative entry");
        row += exact[i][j];
        a.entries_(i, j) = to_double(exact[i][j]);
      }
      if (row != 1)
        throw ValidationError("row " + std::to_string(i) + " sums to " +
                              to_string(row));
    }
    a.exact_ = std::move(exact);
    return a;
  }

  int size() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  bool has_exact() const { return exact_.has_value(); }
  const RationalMatrix& exact_entries() const {
    if (!exact_) throw PreconditionError("matrix has no exact rational entries");
    return *exact_;
  }

 private:
  void validate() const {
    const auto n = entries_.rows();
    if (n == 0 || entries_.cols() != n)
      throw ValidationError("transition matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double a = entries_(i, j);
        if (!std::isfinite(a) || a < 0)
          throw ValidationError("transition matrix has a negative or non-finite entry");
        if (std::abs(a - entries_(j, i)) > 1e-12)
          throw ValidationError("transition matrix is not symmetric");
        row += a;
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw ValidationError("row " + std::to_string(i) + " sums to " +
                              std::to_string(row));
    }
  }

  Eigen::MatrixXd entries_;
  std::optional<RationalMatrix> exact_;
};

// A walk v_1, ..., v_l started uniformly, with target set W.
struct WalkSpec {
  TransitionMatrix matrix;
  std::vector<int> target;  // sorted vertex indices
  int steps = 1;

  WalkSpec(TransitionMatrix a, std::vector<int> w, int l)
      : matrix(std::move(a)), target(std::move(w)), steps(l) {
    std::sort(target.begin(), target.end());
    if (std::adjacent_find(target.begin(), target.end()) != target.end())
      throw ValidationError("target set has repeated vertices");
    for (int v : target)
      if (v < 0 || v >= matrix.size())
        throw ValidationError("target vertex " + std::to_string(v) + " out of range");
    if (steps < 1) throw ValidationError("walk needs at least one step");
  }

  int vertices() const { return matrix.size(); }
  double mu() const {
    return static_cast<double>(target.size()) / static_cast<double>(vertices());
  }
  Rational mu_exact() const {
    return Rational(static_cast<long>(target.size()), static_cast<long>(vertices()));
  }
  Eigen::VectorXd indicator() const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(vertices());
    for (int v : target) w(v) = 1.0;
    return w;
  }
};

// W = {0, ..., round(mu n) - 1}; mu n must be an integer.
inline std::vector<int> leading_target(int n, double mu) {
  const double count = mu * n;
  const long rounded = std::lround(count);
  require(std::abs(count - static_cast<double>(rounded)) < 1e-9,
          "mu * n must be an integer");
  std::vector<int> w(rounded);
  for (long i = 0; i < rounded; ++i) w[i] = static_cast<int>(i);
  return w;
}

// Second largest absolute eigenvalue.
inline double spectral_lambda(const TransitionMatrix& a) {
  if (a.size() == 1) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.entries(),
                                                        Eigen::EigenvaluesOnly);
  std::vector<double> magnitudes;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
    magnitudes.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(magnitudes.rbegin(), magnitudes.rend());
  double lambda = magnitudes[1];
  if (lambda < 1e-13) lambda = 0.0;
  return std::min(lambda, 1.0);
}

// lambda I_n + (1 - lambda) J_n / n.
inline TransitionMatrix build_jn_construction(double lambda, int n) {
  require(lambda >= 0 && lambda < 1, "build_jn_construction needs lambda in [0, 1)");
  require(n >= 1, "build_jn_construction needs n >= 1");
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(n, n, (1.0 - lambda) / n);
  a.diagonal().array() += lambda;
  return TransitionMatrix::from_doubles(std::move(a));
}

inline TransitionMatrix build_jn_construction(const Rational& lambda, int n) {
  require(lambda >= 0 && lambda < 1, "build_jn_construction needs lambda in [0, 1)");
  require(n >= 1, "build_jn_construction needs n >= 1");
  RationalMatrix a(n, std::vector<Rational>(n, (Rational(1) - lambda) / n));
  for (int i = 0; i < n; ++i) a[i][i] += lambda;
  return TransitionMatrix::from_rationals(std::move(a));
}

// Symmetrized convex combination of random permutation matrices with small
// integer weights; rational entries, so usable by the exact oracles.
inline TransitionMatrix random_symmetric_doubly_stochastic(int n, std::uint64_t seed,
                                                           int terms = 4) {
  require(n >= 1 && terms >= 1, "random matrix needs n >= 1 and terms >= 1");
  Rng rng(seed);
  std::vector<std::vector<long>> counts(n, std::vector<long>(n, 0));
  long total = 0;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[uniform_below(rng, i + 1)]);
    const long weight = 1 + static_cast<long>(uniform_below(rng, 9));
    for (int i = 0; i < n; ++i) {
      counts[i][perm[i]] += weight;
      counts[perm[i]][i] += weight;
    }
    total += 2 * weight;
  }
  RationalMatrix a(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = Rational(counts[i][j], total);
  return TransitionMatrix::from_rationals(std::move(a));
}

// Pr[v_i in W for all i in M], M given as sorted 1-based step indices.
inline double stay_prob_exact(const WalkSpec& spec, const std::vector<int>& steps) {
  require(!steps.empty(), "stay_prob_exact needs a nonempty step set");
  require(std::is_sorted(steps.begin(), steps.end()) &&
              std::adjacent_find(steps.begin(), steps.end()) == steps.end(),
          "step set must be sorted without repeats");
  require(steps.front() >= 1 && steps.back() <= spec.steps,
          "step set must lie inside [1, l]");
  const int n = spec.vertices();
  const Eigen::MatrixXd& a = spec.matrix.entries();
  const Eigen::VectorXd w = spec.indicator();
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  int position = 1;
  for (int step : steps) {
    for (; position < step; ++position) v = v * a;
    v = v.cwiseProduct(w.transpose());
  }
  return v.sum();
}

enum class EvalMode { kExact, kMonteCarlo };

// Average of stay_prob_exact over a uniform size-m step subset.
inline Estimate avg_stay_prob(const WalkSpec& spec, int m, EvalMode mode,
                              std::uint64_t trials = 0, std::uint64_t seed = 0,
                              const Budget& budget = {}) {
  require(m >= 1 && m <= spec.steps, "avg_stay_prob needs 1 <= m <= l");
  if (mode == EvalMode::kExact) {
    const Integer count = binomial(spec.steps, m);
    budget.check_enumeration(to_double(count), "avg_stay_prob");
    double total = 0.0;
    for_each_combination(spec.steps, m, [&](const std::vector<int>& idx) {
      std::vector<int> steps(idx);
      for (auto& s : steps) ++s;
      total += stay_prob_exact(spec, steps);
    });
    return {total / to_double(count), 0.0, true};
  }
  require(trials >= 1, "Monte Carlo mode needs trials >= 1");
  constexpr std::uint64_t kTag = fnv1a64("avg_stay_prob");
  double sum = 0.0, sum_sq = 0.0;
  std::vector<int> pool(spec.steps);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, kTag, t));
    for (int i = 0; i < spec.steps; ++i) pool[i] = i + 1;
    for (int i = 0; i < m; ++i)
      std::swap(pool[i], pool[i + uniform_below(rng, spec.steps - i)]);
    std::vector<int> steps(pool.begin(), pool.begin() + m);
    std::sort(steps.begin(), steps.end());
    const double p = stay_prob_exact(spec, steps);
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / trials;
  const double var = std::max(0.0, sum_sq / trials - mean * mean);
  return {mean, kZ99 * std::sqrt(var / trials), false};
}

struct NormClaim {
  double lhs = 0.0;  // ||P_W A^k P_W||
  double rhs = 0.0;  // mu + (1 - mu) lambda^k
  bool holds = false;
};

inline NormClaim norm_claim_check(const TransitionMatrix& a, const std::vector<int>& w,
                                  int k) {
  require(k >= 1, "norm_claim_check needs k >= 1");
  const int n = a.size();
  Eigen::MatrixXd projector = Eigen::MatrixXd::Zero(n, n);
  for (int v : w) {
    require(v >= 0 && v < n, "target vertex out of range");
    projector(v, v) = 1.0;
  }
  Eigen::MatrixXd power_k = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < k; ++i) power_k = power_k * a.entries();
  Eigen::MatrixXd restricted = projector * power_k * projector;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
  const double lhs = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  const double mu = static_cast<double>(w.size()) / n;
  const double rhs = mu + (1.0 - mu) * std::pow(spectral_lambda(a), k);
  return {lhs, rhs, lhs <= rhs + 1e-9};
}

inline double hitting_bound(double mu, double eps, double m) {
  require(eps >= 0, "hitting_bound needs eps >= 0");
  require(mu >= 0 && mu <= 1, "hitting_bound needs mu in [0, 1]");
  return std::pow(mu * (1.0 + eps), m);
}

struct HittingPrecondition {
  double m_limit = 0.0;  // min(1/2, (1 - lambda)/lambda * eps mu / 2) * l
  bool holds = false;
};

// (1 - lambda) / lambda is +infinity at lambda = 0.
inline HittingPrecondition hitting_precondition(double lambda, int ell, double mu,
                                                double eps, double m) {
  double ratio = lambda == 0.0 ? std::numeric_limits<double>::infinity()
                               : (1.0 - lambda) / lambda * eps * mu / 2.0;
  double limit = std::min(0.5, ratio) * ell;
  return {limit, m <= limit + 1e-12};
}

// (mu + (1 - mu)(m / (l - alpha m) * lambda / (1 - lambda) + lambda^alpha))^m.
inline double hitting_bound_tight(double mu, double lambda, int m, int ell,
                                  double alpha) {
  require(m >= 1 && m <= ell, "hitting_bound_tight needs m in [l]");
  require(alpha >= 1 && alpha <= static_cast<double>(ell) / (2.0 * m),
          "hitting_bound_tight needs 1 <= alpha <= l / 2m");
  require(lambda >= 0 && lambda < 1, "hitting_bound_tight needs lambda in [0, 1)");
  const double correction =
      static_cast<double>(m) / (ell - alpha * m) * lambda / (1.0 - lambda) +
      std::pow(lambda, alpha);
  return std::pow(mu + (1.0 - mu) * correction, m);
}

// Indicators are integral, so the event sum x_i >= mu l (1 + eps) is
// sum x_i >= ceil(mu l (1 + eps)). The 1e-9 keeps exact products such as
// 0.5 * 14 * 1.5 from rounding up past an integer.
inline long walk_tail_threshold(double mu, int ell, double eps) {
  return std::max(0L, static_cast<long>(std::ceil(mu * ell * (1.0 + eps) - 1e-9)));
}

// Exact Pr[sum x_i >= threshold] by DP over (vertex, visits so far).
inline double walk_tail_exact(const WalkSpec& spec, double eps,
                              const Budget& budget = {}) {
  const int n = spec.vertices();
  const int ell = spec.steps;
  budget.check_dp(static_cast<double>(n) * ell * ell, "walk_tail_exact");
  const long threshold = walk_tail_threshold(spec.mu(), ell, eps);
  if (threshold <= 0) return 1.0;
  if (threshold > ell) return 0.0;
  const Eigen::MatrixXd& a = spec.matrix.entries();
  std::vector<char> in_w(n, 0);
  for (int v : spec.target) in_w[v] = 1;
  // prob(v, c): walk currently at v having visited W c times.
  Eigen::MatrixXd prob = Eigen::MatrixXd::Zero(n, ell + 1);
  for (int v = 0; v < n; ++v) prob(v, in_w[v]) = 1.0 / n;
  for (int step = 2; step <= ell; ++step) {
    Eigen::MatrixXd moved = a.transpose() * prob;
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, ell + 1);
    for (int v = 0; v < n; ++v) {
      if (in_w[v]) {
        next.row(v).tail(ell) = moved.row(v).head(ell);
      } else {
        next.row(v) = moved.row(v);
      }
    }
    prob = std::move(next);
  }
  return prob.rightCols(ell + 1 - threshold).sum();
}

// The same tail for lambda I + (1 - lambda) J / n, lumped to the two states
// in-W / out-of-W: stay in W with a = lambda + (1 - lambda) mu, enter W with
// (1 - lambda) mu.
inline double walk_tail_two_state(double lambda, double mu, int ell, double eps) {
  require(ell >= 1, "walk_tail_two_state needs l >= 1");
  const long threshold = walk_tail_threshold(mu, ell, eps);
  if (threshold <= 0) return 1.0;
  if (threshold > ell) return 0.0;
  const double stay_in = lambda + (1.0 - lambda) * mu;
  const double enter = (1.0 - lambda) * mu;
  std::vector<double> in(ell + 1, 0.0), out(ell + 1, 0.0);
  in[1] = mu;
  out[0] = 1.0 - mu;
  for (int step = 2; step <= ell; ++step) {
    std::vector<double> next_in(ell + 1, 0.0), next_out(ell + 1, 0.0);
    for (int c = 0; c < step; ++c) {
      next_in[c + 1] += in[c] * stay_in + out[c] * enter;
      next_out[c] += in[c] * (1.0 - stay_in) + out[c] * (1.0 - enter);
    }
    in = std::move(next_in);
    out = std::move(next_out);
  }
  double total = 0.0;
  for (long c = threshold; c <= ell; ++c) total += in[c] + out[c];
  return total;
}

struct TailBound {
  double value = 0.0;
  bool vacuous = false;  // value >= 1
};

// 2 exp(-(1 - lambda) eps^2 mu l / 18).
inline TailBound main_tail_bound(double mu, double lambda, double eps, int ell) {
  require(eps >= 0 && eps <= 0.8, "main_tail_bound needs eps in [0, 4/5]");
  require(mu > 0 && mu <= 1, "main_tail_bound needs mu in (0, 1]");
  require(lambda >= 0 && lambda <= 1, "main_tail_bound needs lambda in [0, 1]");
  const double value = 2.0 * std::exp(-(1.0 - lambda) * eps * eps * mu * ell / 18.0);
  return {value, value >= 1.0};
}

struct TightTailBound {
  double value = 0.0;
  bool remark_valid = false;  // eps <= min(1/3, mu, -(1 - mu) / (3 ln eps))
  bool vacuous = false;
};

// 2 exp(-(1-lambda)/(1+lambda) * mu/(1-mu) * eps^2 l / 2
//       + c_mu eps^3 ln(1/eps) l), with c_mu = 4 / (1 - mu)^2.
inline TightTailBound tight_tail_bound(double mu, double lambda, double eps, int ell) {
  require(eps > 0 && eps <= 0.5, "tight_tail_bound needs eps in (0, 1/2]");
  require(mu > 0 && mu < 1, "tight_tail_bound needs mu in (0, 1)");
  require(lambda >= 0 && lambda <= 1, "tight_tail_bound needs lambda in [0, 1]");
  const double c_mu = 4.0 / ((1.0 - mu) * (1.0 - mu));
  const double leading =
      (1.0 - lambda) / (1.0 + lambda) * mu / (1.0 - mu) * eps * eps * ell / 2.0;
  const double correction = c_mu * eps * eps * eps * std::log(1.0 / eps) * ell;
  const double value = 2.0 * std::exp(-leading + correction);
  const bool valid = eps <= std::min({1.0 / 3.0, mu, -(1.0 - mu) / (3.0 * std::log(eps))});
  return {value, valid, value >= 1.0};
}

struct OptimalityLowerBound {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  long visits = 0;  // K = ceil(mu l (1 + eps)), steps spent in W
  long runs = 0;    // X = floor(x l), number of in-W runs
  bool rounded = false;
};

namespace detail {

struct OptimalityCounts {
  long visits;
  long runs;
  bool rounded;
};

inline OptimalityCounts optimality_counts(double lambda, double mu, double eps,
                                          int ell) {
  require(lambda > 0 && lambda < 1, "optimality_lower_bound needs lambda in (0, 1)");
  require(mu > 0 && mu < 1, "optimality_lower_bound needs mu in (0, 1)");
  require(eps > 0, "optimality_lower_bound needs eps > 0");
  require(ell >= 1, "optimality_lower_bound needs l >= 1");
  const double x = (1.0 - lambda) * mu * (1.0 - mu) +
                   (1.0 - lambda) * mu * (1.0 - 2.0 * mu) * eps / (1.0 + lambda);
  const double visits_real = mu * ell * (1.0 + eps);
  const double runs_real = x * ell;
  const long visits = walk_tail_threshold(mu, ell, eps);
  const long runs = static_cast<long>(std::floor(runs_real + 1e-9));
  require(visits >= 1, "optimality_lower_bound needs mu l (1 + eps) >= 1");
  require(runs >= 1, "optimality_lower_bound needs x l >= 1");
  const bool rounded = std::abs(visits - visits_real) > 1e-9 ||
                       std::abs(runs - runs_real) > 1e-9;
  return {visits, runs, rounded};
}

}  // namespace detail

// Lower bound from walks that alternate X runs inside W (K steps total) with
// X runs outside:
//   C(K-1, X-1) C(l-K-1, X-1) a^{K-X} b^{l-K-X} (1-a)^X (1-b)^X,
// a = lambda + mu - lambda mu, b = 1 - mu + lambda mu. Evaluated in log space.
inline OptimalityLowerBound optimality_lower_bound(double lambda, double mu, double eps,
                                                   int ell) {
  auto counts = detail::optimality_counts(lambda, mu, eps, ell);
  const long k = counts.visits, x = counts.runs;
  OptimalityLowerBound result{0.0, -std::numeric_limits<double>::infinity(), k, x,
                              counts.rounded};
  if (ell - k < x) return result;  // no composition of l - K into X parts
  const double a = lambda + mu - lambda * mu;
  const double b = 1.0 - mu + lambda * mu;
  const double log_value = log_binomial(k - 1, x - 1) + log_binomial(ell - k - 1, x - 1) +
                           (k - x) * std::log(a) + (ell - k - x) * std::log(b) +
                           x * std::log1p(-a) + x * std::log1p(-b);
  result.log_value = log_value;
  result.value = std::exp(log_value);
  return result;
}

// The same product in exact rational arithmetic.
inline Rational optimality_lower_bound_exact(const Rational& lambda, const Rational& mu,
                                             double eps, int ell) {
  auto counts = detail::optimality_counts(to_double(lambda), to_double(mu), eps, ell);
  const long k = counts.visits, x = counts.runs;
  if (ell - k < x) return Rational(0);
  const Rational a = lambda + mu - lambda * mu;
  const Rational b = Rational(1) - mu + lambda * mu;
  return Rational(binomial(k - 1, x - 1) * binomial(ell - k - 1, x - 1)) *
         power(a, k - x) * power(b, ell - k - x) * power(Rational(1) - a, x) *
         power(Rational(1) - b, x);
}

// One trajectory's visit indicators x_1..x_l.
inline std::vector<int> walk_sample(const WalkSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const int n = spec.vertices();
  const Eigen::MatrixXd& a = spec.matrix.entries();
  std::vector<char> in_w(n, 0);
  for (int v : spec.target) in_w[v] = 1;
  int v = static_cast<int>(uniform_below(rng, n));
  std::vector<int> x(spec.steps);
  for (int step = 0; step < spec.steps; ++step) {
    if (step > 0) {
      double u = uniform01(rng), cumulative = 0.0;
      int next = n - 1;
      for (int j = 0; j < n; ++j) {
        cumulative += a(v, j);
        if (u < cumulative) {
          next = j;
          break;
        }
      }
      v = next;
    }
    x[step] = in_w[v];
  }
  return x;
}

// Exact law of (x_1, ..., x_l) for a rational transition matrix.
inline ExactDistribution walk_indicator_distribution(const WalkSpec& spec,
                                                     const Budget& budget = {}) {
  if (!spec.matrix.has_exact())
    throw PreconditionError("exact walk enumeration needs rational transition entries");
  const int n = spec.vertices();
  const int ell = spec.steps;
  require(ell <= 30, "exact walk enumeration needs l <= 30");
  budget.check_enumeration(std::ldexp(static_cast<double>(n), ell),
                           "walk_indicator_distribution");
  const RationalMatrix& a = spec.matrix.exact_entries();
  std::vector<char> in_w(n, 0);
  for (int v : spec.target) in_w[v] = 1;
  // (current vertex, indicator bits so far) -> probability
  std::map<std::pair<int, std::uint32_t>, Rational> layer;
  for (int v = 0; v < n; ++v)
    layer[{v, static_cast<std::uint32_t>(in_w[v])}] += Rational(1, n);
  for (int step = 1; step < ell; ++step) {
    std::map<std::pair<int, std::uint32_t>, Rational> next;
    for (const auto& [state, mass] : layer) {
      for (int u = 0; u < n; ++u) {
        if (a[state.first][u] == 0) continue;
        std::uint32_t bits = state.second | (static_cast<std::uint32_t>(in_w[u]) << step);
        next[{u, bits}] += mass * a[state.first][u];
      }
    }
    layer = std::move(next);
  }
  std::map<std::uint32_t, Rational> by_bits;
  for (const auto& [state, mass] : layer) by_bits[state.second] += mass;
  std::vector<Outcome<Rational>> support;
  for (const auto& [bits, mass] : by_bits) {
    std::vector<Rational> values(ell);
    for (int i = 0; i < ell; ++i) values[i] = (bits >> i & 1u) ? 1 : 0;
    support.push_back({mass, std::move(values)});
  }
  return ExactDistribution(ell, std::move(support));
}

}  // namespace conclab

#endif  // CONCLAB_EXPANDER_HPP_
