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

#ifndef CONCLAB_TESTS_ORACLES_HPP_
#define CONCLAB_TESTS_ORACLES_HPP_

// Brute-force reference computations for the tests. They share only the
// scalar types with the library and deliberately take the slow, obvious route.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "conclab/common.hpp"

namespace oracle {

using conclab::Integer;
using conclab::Rational;

// Row n of Pascal's triangle.
inline std::vector<Integer> pascal_row(int n) {
  std::vector<Integer> row{1};
  for (int i = 1; i <= n; ++i) {
    std::vector<Integer> next(i + 1);
    next[0] = next[i] = 1;
    for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return row;
}

inline Rational rational_pow(const Rational& base, long e) {
  Rational r(1);
  for (long i = 0; i < e; ++i) r *= base;
  return r;
}

// Pr[Bin(n, p) >= s] from Pascal coefficients.
inline Rational binomial_tail(int n, const Rational& p, long s) {
  const auto row = pascal_row(n);
  Rational total(0);
  for (long j = std::max(0L, s); j <= n; ++j)
    total += Rational(row[j]) * rational_pow(p, j) * rational_pow(Rational(1) - p, n - j);
  return total;
}

// A distribution written as (probability, coordinates) pairs.
using Atoms = std::vector<std::pair<Rational, std::vector<Rational>>>;

inline Rational tail(const Atoms& atoms, const Rational& t) {
  Rational total(0);
  for (const auto& [prob, x] : atoms) {
    Rational s(0);
    for (const auto& v : x) s += v;
    if (s >= t) total += prob;
  }
  return total;
}

inline Rational mean_sum(const Atoms& atoms) {
  Rational total(0);
  for (const auto& [prob, x] : atoms)
    for (const auto& v : x) total += prob * v;
  return total;
}

// E over a uniform index tuple (i_1..i_m) in [n]^m of prod x_{i_j}, by listing
// all n^m tuples.
inline Rational tuple_product_mean(const Atoms& atoms, int n, int m) {
  std::vector<int> idx(m, 0);
  Rational total(0);
  long count = 0;
  while (true) {
    for (const auto& [prob, x] : atoms) {
      Rational prod(1);
      for (int i : idx) prod *= x[i];
      total += prob * prod;
    }
    ++count;
    int pos = 0;
    while (pos < m && ++idx[pos] == n) idx[pos++] = 0;
    if (pos == m) break;
  }
  return total / count;
}

// Gap tuples of every m-subset of [l], each with mass 1 / C(l, m).
inline std::map<std::vector<int>, Rational> gap_law(int m, int ell) {
  std::map<std::vector<int>, long> counts;
  long total = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ell); ++mask) {
    if (__builtin_popcountll(mask) != m) continue;
    std::vector<int> gaps;
    int prev = 0;
    for (int i = 1; i <= ell; ++i)
      if (mask >> (i - 1) & 1) {
        gaps.push_back(i - prev);
        prev = i;
      }
    ++counts[gaps];
    ++total;
  }
  std::map<std::vector<int>, Rational> law;
  for (const auto& [g, c] : counts) law[g] = Rational(c, total);
  return law;
}

// Visit-count law of a walk on a general transition matrix, by listing every
// path. Returns Pr[#visits to W = c] for c = 0..l.
inline std::vector<double> walk_visit_law(const Eigen::MatrixXd& a, const std::vector<int>& w,
                                          int ell) {
  const int n = static_cast<int>(a.rows());
  std::vector<char> in_w(n, 0);
  for (int v : w) in_w[v] = 1;
  std::vector<double> law(ell + 1, 0.0);
  std::vector<int> path(ell, 0);
  while (true) {
    double prob = 1.0 / n;
    int visits = in_w[path[0]];
    for (int i = 1; i < ell; ++i) {
      prob *= a(path[i - 1], path[i]);
      visits += in_w[path[i]];
    }
    law[visits] += prob;
    int pos = ell - 1;
    while (pos >= 0 && ++path[pos] == n) path[pos--] = 0;
    if (pos < 0) break;
  }
  return law;
}

// Pr[v_i in W for every i in steps] by listing every path.
inline double stay_by_paths(const Eigen::MatrixXd& a, const std::vector<int>& w, int ell,
                            const std::vector<int>& steps_one_based) {
  const int n = static_cast<int>(a.rows());
  std::vector<char> in_w(n, 0), need(ell, 0);
  for (int v : w) in_w[v] = 1;
  for (int s : steps_one_based) need[s - 1] = 1;
  double total = 0.0;
  std::vector<int> path(ell, 0);
  while (true) {
    bool ok = true;
    for (int i = 0; i < ell && ok; ++i)
      if (need[i] && !in_w[path[i]]) ok = false;
    if (ok) {
      double prob = 1.0 / n;
      for (int i = 1; i < ell; ++i) prob *= a(path[i - 1], path[i]);
      total += prob;
    }
    int pos = ell - 1;
    while (pos >= 0 && ++path[pos] == n) path[pos--] = 0;
    if (pos < 0) break;
  }
  return total;
}

// Largest singular value by power iteration on B^T B.
inline double spectral_norm(const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd g = b.transpose() * b;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(g.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.01 * static_cast<double>(i);
  double eig = 0.0;
  for (int it = 0; it < 5000; ++it) {
    Eigen::VectorXd next = g * v;
    const double norm = next.norm();
    if (norm == 0.0) return 0.0;
    next /= norm;
    const double change = (next - v).norm();
    v = next;
    eig = v.dot(g * v);
    if (change < 1e-14) break;
  }
  return std::sqrt(std::max(0.0, eig));
}

using Edge = std::pair<int, int>;

inline bool adjacent(std::uint64_t host, int n, int u, int v) {
  if (u > v) std::swap(u, v);
  // Lexicographic pair order: (0,1), (0,2), ..., (0,n-1), (1,2), ...
  int index = 0;
  for (int a = 0; a < u; ++a) index += n - a - 1;
  index += v - u - 1;
  return host >> index & 1;
}

// Edge-preserving injective maps pattern -> host, divided by the number of
// edge-preserving permutations of the pattern.
inline long copies(int pattern_vertices, const std::vector<Edge>& pattern_edges, int n,
                   std::uint64_t host) {
  auto preserved = [&](const std::vector<int>& image, std::uint64_t graph, int size) {
    for (auto [u, v] : pattern_edges)
      if (!adjacent(graph, size, image[u], image[v])) return false;
    return true;
  };
  long maps = 0;
  std::vector<int> image(pattern_vertices);
  std::vector<char> used(n, 0);
  auto extend = [&](auto&& self, int i) -> void {
    if (i == pattern_vertices) {
      if (preserved(image, host, n)) ++maps;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = 1;
      image[i] = v;
      self(self, i + 1);
      used[v] = 0;
    }
  };
  extend(extend, 0);
  // The pattern on its own vertex set, as a host.
  std::uint64_t self_mask = 0;
  for (auto [u, v] : pattern_edges) {
    int a = std::min(u, v), b = std::max(u, v), index = 0;
    for (int x = 0; x < a; ++x) index += pattern_vertices - x - 1;
    index += b - a - 1;
    self_mask |= std::uint64_t{1} << index;
  }
  long autos = 0;
  std::vector<int> perm(pattern_vertices);
  for (int i = 0; i < pattern_vertices; ++i) perm[i] = i;
  do {
    if (preserved(perm, self_mask, pattern_vertices)) ++autos;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return maps / autos;
}

inline long triangles(int n, std::uint64_t host) {
  long count = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      for (int c = b + 1; c < n; ++c)
        if (adjacent(host, n, a, b) && adjacent(host, n, b, c) && adjacent(host, n, a, c))
          ++count;
  return count;
}

// max copies over every host with exactly m edges.
inline long packing(int n, long m, int pattern_vertices, const std::vector<Edge>& pattern_edges) {
  const int pairs = n * (n - 1) / 2;
  long best = 0;
  for (std::uint64_t host = 0; host < (std::uint64_t{1} << pairs); ++host)
    if (__builtin_popcountll(host) == m)
      best = std::max(best, copies(pattern_vertices, pattern_edges, n, host));
  return best;
}

// Pr[copies >= t] in G(n, p) over all hosts.
inline Rational gnp_copy_tail(int n, const Rational& p, int pattern_vertices,
                              const std::vector<Edge>& pattern_edges, const Rational& t) {
  const int pairs = n * (n - 1) / 2;
  Rational total(0);
  for (std::uint64_t host = 0; host < (std::uint64_t{1} << pairs); ++host) {
    const int e = __builtin_popcountll(host);
    if (Rational(copies(pattern_vertices, pattern_edges, n, host)) >= t)
      total += rational_pow(p, e) * rational_pow(Rational(1) - p, pairs - e);
  }
  return total;
}

// E[(copies)^m] in G(n, p).
inline Rational gnp_copy_moment(int n, const Rational& p, int pattern_vertices,
                                const std::vector<Edge>& pattern_edges, int m) {
  const int pairs = n * (n - 1) / 2;
  Rational total(0);
  for (std::uint64_t host = 0; host < (std::uint64_t{1} << pairs); ++host) {
    const int e = __builtin_popcountll(host);
    total += rational_pow(Rational(copies(pattern_vertices, pattern_edges, n, host)), m) *
             rational_pow(p, e) * rational_pow(Rational(1) - p, pairs - e);
  }
  return total;
}

// e_k(x) by the recurrence e_j(x_1..x_i) = e_j(x_1..x_{i-1}) + x_i e_{j-1}(...).
inline Rational elementary(const std::vector<Rational>& x, int k) {
  std::vector<Rational> e(k + 1, Rational(0));
  e[0] = 1;
  for (const auto& v : x)
    for (int j = k; j >= 1; --j) e[j] += v * e[j - 1];
  return e[k];
}

// Pr[e_k(v) >= t] for i.i.d. Bernoulli(p), listing all 2^l points.
inline Rational es_tail(int ell, const Rational& p, int k, const Rational& t) {
  Rational total(0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ell); ++mask) {
    std::vector<Rational> x(ell);
    int ones = 0;
    for (int i = 0; i < ell; ++i) {
      x[i] = (mask >> i & 1) ? 1 : 0;
      ones += static_cast<int>(mask >> i & 1);
    }
    if (elementary(x, k) >= t)
      total += rational_pow(p, ones) * rational_pow(Rational(1) - p, ell - ones);
  }
  return total;
}

// Every permutation of [n] as a vector.
inline std::vector<std::vector<int>> permutations(int n) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::vector<std::vector<int>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return all;
}

// max over sets T of N^2 indicators with |T| <= m of
// Pr[g_t = 1 for all t] / prod_t Pr[g_t = 1].
inline Rational permutation_worst_ratio(int n, int m) {
  const auto perms = permutations(n);
  const int vars = n * n;
  Rational worst(0);
  const Rational marginal(1, n);
  std::vector<int> chosen;
  auto visit = [&](auto&& self, int next) -> void {
    if (!chosen.empty()) {
      long hits = 0;
      for (const auto& f : perms) {
        bool all = true;
        for (int t : chosen)
          if (f[t / n] != t % n) {
            all = false;
            break;
          }
        if (all) ++hits;
      }
      const Rational ratio = Rational(hits, static_cast<long>(perms.size())) /
                             rational_pow(marginal, static_cast<long>(chosen.size()));
      worst = std::max(worst, ratio);
    }
    if (static_cast<int>(chosen.size()) == m) return;
    for (int t = next; t < vars; ++t) {
      chosen.push_back(t);
      self(self, t + 1);
      chosen.pop_back();
    }
  };
  visit(visit, 0);
  return worst;
}

// A double bracketed by rationals: lo <= x <= hi after rounding error of a
// few ulps in libm. Used to compare a double formula with an exact value.
inline Rational certified_upper(double x) {
  return Rational(x) * (Rational(1) + Rational(1, Integer(1) << 50));
}
inline Rational certified_lower(double x) {
  return Rational(x) * (Rational(1) - Rational(1, Integer(1) << 50));
}

}  // namespace oracle

#endif  // CONCLAB_TESTS_ORACLES_HPP_
