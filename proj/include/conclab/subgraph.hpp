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

#ifndef CONCLAB_SUBGRAPH_HPP_
#define CONCLAB_SUBGRAPH_HPP_

// Copies of a fixed pattern graph G in a random host graph: the copy-count
// polynomial q(e), packing numbers N(n, m, H), M*_G(n, p), the growth
// boundedness certificate for copy indicators, and the resulting tail bounds
// for G(n, p) and G(n, m).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "conclab/common.hpp"
#include "conclab/core_bounds.hpp"
#include "conclab/polybound.hpp"

namespace conclab {

using Edge = std::pair<int, int>;

inline constexpr int kMaxPatternVertices = 8;

// Number of vertex permutations preserving the edge set. Brute force.
inline long automorphism_count(int vertices, const std::vector<Edge>& edges) {
  if (vertices > kMaxPatternVertices)
    throw ResourceError("automorphism_count supports at most 8 vertices");
  std::set<Edge> edge_set;
  for (auto [u, v] : edges) edge_set.insert({std::min(u, v), std::max(u, v)});
  std::vector<int> perm(vertices);
  std::iota(perm.begin(), perm.end(), 0);
  long count = 0;
  do {
    bool preserved = true;
    for (auto [u, v] : edge_set) {
      int a = perm[u], b = perm[v];
      if (!edge_set.count({std::min(a, b), std::max(a, b)})) {
        preserved = false;
        break;
      }
    }
    if (preserved) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// A simple graph without isolated vertices, identified with its edge set.
class Pattern {
 public:
  Pattern(int vertices, std::vector<Edge> edges, std::string name = "")
      : vertices_(vertices), edges_(std::move(edges)), name_(std::move(name)) {
    if (vertices_ < 2) throw MalformedInputError("pattern needs at least 2 vertices");
    if (vertices_ > kMaxPatternVertices)
      throw MalformedInputError("pattern supports at most 8 vertices");
    std::vector<int> degree(vertices_, 0);
    for (auto& [u, v] : edges_) {
      if (u < 0 || v < 0 || u >= vertices_ || v >= vertices_)
        throw MalformedInputError("pattern edge endpoint out of range");
      if (u == v) throw MalformedInputError("pattern has a loop");
      if (u > v) std::swap(u, v);
      ++degree[u];
      ++degree[v];
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw MalformedInputError("pattern has a repeated edge");
    for (int d : degree)
      if (d == 0) throw MalformedInputError("pattern has an isolated vertex");
    automorphisms_ = automorphism_count(vertices_, edges_);
  }

  static Pattern complete(int k) {
    std::vector<Edge> edges;
    for (int u = 0; u < k; ++u)
      for (int v = u + 1; v < k; ++v) edges.push_back({u, v});
    return Pattern(k, std::move(edges), "k" + std::to_string(k));
  }
  static Pattern k2() { return complete(2); }
  static Pattern k3() { return complete(3); }
  static Pattern k4() { return complete(4); }
  static Pattern p3() { return Pattern(3, {{0, 1}, {1, 2}}, "p3"); }
  static Pattern c4() { return Pattern(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}, "c4"); }

  static std::optional<Pattern> builtin(const std::string& name) {
    if (name == "k2") return k2();
    if (name == "k3") return k3();
    if (name == "k4") return k4();
    if (name == "p3") return p3();
    if (name == "c4") return c4();
    return std::nullopt;
  }

  int vertices() const { return vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  long automorphisms() const { return automorphisms_; }
  const std::string& name() const { return name_; }

  // Lexicographically least relabelled edge list over all vertex orders.
  std::vector<Edge> canonical_form() const {
    std::vector<int> perm(vertices_);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Edge> best;
    do {
      std::vector<Edge> relabelled;
      for (auto [u, v] : edges_) {
        int a = perm[u], b = perm[v];
        relabelled.push_back({std::min(a, b), std::max(a, b)});
      }
      std::sort(relabelled.begin(), relabelled.end());
      if (best.empty() || relabelled < best) best = std::move(relabelled);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }

 private:
  int vertices_;
  std::vector<Edge> edges_;
  std::string name_;
  long automorphisms_ = 1;
};

inline long pair_count(int n) { return static_cast<long>(n) * (n - 1) / 2; }

// Index of {u, v} among the C(n, 2) pairs, ordered (0,1), (0,2), ..., (1,2), ...
inline int pair_index(int n, int u, int v) {
  require(u != v && u >= 0 && v >= 0 && u < n && v < n, "pair_index needs distinct vertices in [n]");
  if (u > v) std::swap(u, v);
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

inline Edge pair_endpoints(int n, int index) {
  for (int u = 0; u < n; ++u) {
    const int row = n - u - 1;
    if (index < row) return {u, u + 1 + index};
    index -= row;
  }
  throw PreconditionError("pair index out of range");
}

// e in {0,1}^{C(n,2)}.
struct EdgeAssignment {
  int n = 0;
  std::vector<char> present;

  static EdgeAssignment empty(int n) {
    return {n, std::vector<char>(pair_count(n), 0)};
  }
  static EdgeAssignment complete(int n) {
    return {n, std::vector<char>(pair_count(n), 1)};
  }
  static EdgeAssignment from_edges(int n, const std::vector<Edge>& edges) {
    auto e = empty(n);
    for (auto [u, v] : edges) e.present[pair_index(n, u, v)] = 1;
    return e;
  }
  static EdgeAssignment from_mask(int n, std::uint64_t mask) {
    require(pair_count(n) <= 64, "bitmask hosts need C(n,2) <= 64");
    auto e = empty(n);
    for (long i = 0; i < pair_count(n); ++i) e.present[i] = (mask >> i) & 1u;
    return e;
  }
  bool has(int u, int v) const { return present[pair_index(n, u, v)] != 0; }
  long edge_count() const {
    return std::count(present.begin(), present.end(), char{1});
  }
};

// All copies of a pattern inside K_n, each as its sorted list of pair
// indices. These are the monomials of q(e).
class CopyIndex {
 public:
  CopyIndex(const Pattern& pattern, int n, const Budget& budget = {}) : n_(n) {
    require(n >= 1, "CopyIndex needs n >= 1");
    const int v = pattern.vertices();
    if (n < v) return;
    double maps = 1.0;
    for (int i = 0; i < v; ++i) maps *= n - i;
    budget.check_enumeration(maps, "copy enumeration");
    std::set<std::vector<int>> seen;
    std::vector<int> image(v);
    std::vector<char> used(n, 0);
    auto place = [&](auto&& self, int depth) -> void {
      if (depth == v) {
        std::vector<int> copy;
        for (auto [a, b] : pattern.edges())
          copy.push_back(pair_index(n, image[a], image[b]));
        std::sort(copy.begin(), copy.end());
        seen.insert(std::move(copy));
        return;
      }
      for (int u = 0; u < n; ++u) {
        if (used[u]) continue;
        used[u] = 1;
        image[depth] = u;
        self(self, depth + 1);
        used[u] = 0;
      }
    };
    place(place, 0);
    copies_.assign(seen.begin(), seen.end());
    if (pair_count(n) <= 64) {
      for (const auto& copy : copies_) {
        std::uint64_t mask = 0;
        for (int i : copy) mask |= std::uint64_t{1} << i;
        masks_.push_back(mask);
      }
    }
  }

  int n() const { return n_; }
  const std::vector<std::vector<int>>& copies() const { return copies_; }
  std::size_t size() const { return copies_.size(); }

  long count(const EdgeAssignment& e) const {
    require(e.n == n_, "host size does not match the copy index");
    long total = 0;
    for (const auto& copy : copies_) {
      bool all = true;
      for (int i : copy)
        if (!e.present[i]) {
          all = false;
          break;
        }
      total += all;
    }
    return total;
  }

  long count(std::uint64_t host) const {
    require(pair_count(n_) <= 64, "bitmask hosts need C(n,2) <= 64");
    long total = 0;
    for (std::uint64_t mask : masks_) total += (host & mask) == mask;
    return total;
  }

 private:
  int n_;
  std::vector<std::vector<int>> copies_;
  std::vector<std::uint64_t> masks_;
};

inline long count_copies(const Pattern& pattern, const EdgeAssignment& edges) {
  return CopyIndex(pattern, edges.n).count(edges);
}

// q(e) as a polynomial over the C(n, 2) edge variables.
template <typename S = Rational>
BasicPolynomial<S> copy_polynomial(const Pattern& pattern, int n, const Budget& budget = {}) {
  require(n >= pattern.vertices(), "copy polynomial needs n >= v_G");
  CopyIndex index(pattern, n, budget);
  std::vector<Monomial<S>> monomials;
  for (const auto& copy : index.copies()) monomials.push_back({S(1), copy});
  return BasicPolynomial<S>(static_cast<int>(pair_count(n)), std::move(monomials));
}

// Nonempty edge subsets of G with isolated vertices dropped, one per
// isomorphism class.
inline std::vector<Pattern> edge_subpatterns(const Pattern& g) {
  const int e = g.edge_count();
  require(e <= 20, "edge_subpatterns needs e_G <= 20");
  std::set<std::vector<Edge>> seen;
  std::vector<Pattern> out;
  for (std::uint32_t subset = 1; subset < (1u << e); ++subset) {
    std::vector<int> relabel(g.vertices(), -1);
    int next = 0;
    std::vector<Edge> edges;
    for (int i = 0; i < e; ++i) {
      if (!(subset >> i & 1u)) continue;
      auto [u, v] = g.edges()[i];
      if (relabel[u] < 0) relabel[u] = next++;
      if (relabel[v] < 0) relabel[v] = next++;
      edges.push_back({relabel[u], relabel[v]});
    }
    Pattern h(next, std::move(edges));
    auto canonical = h.canonical_form();
    if (seen.insert(canonical).second) out.push_back(Pattern(next, std::move(canonical)));
  }
  return out;
}

struct PackingResult {
  long value = 0;
  bool exhaustive = true;
};

namespace detail {

// Next integer with the same popcount.
inline std::uint64_t next_same_popcount(std::uint64_t x) {
  const std::uint64_t c = x & (~x + 1);
  const std::uint64_t r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

// Host whose edges are the first m pairs in colex order, i.e. a clique grown
// one vertex at a time. Used as a certified lower bound when the exhaustive
// search is over budget.
inline EdgeAssignment clique_first_host(int n, long m) {
  auto e = EdgeAssignment::empty(n);
  long placed = 0;
  for (int v = 1; v < n && placed < m; ++v)
    for (int u = 0; u < v && placed < m; ++u, ++placed) e.present[pair_index(n, u, v)] = 1;
  return e;
}

}  // namespace detail

// N(n, m, H): most copies of H over hosts with n vertices and exactly m edges.
// Copies may share vertices and edges.
inline PackingResult packing_number(int n, long m, const Pattern& h, const Budget& budget = {}) {
  const long pairs = pair_count(n);
  require(n >= 1, "packing_number needs n >= 1");
  require(m >= 0 && m <= pairs, "packing_number needs 0 <= m <= C(n, 2)");
  if (n < h.vertices() || m < h.edge_count()) return {0, true};
  if (h.edge_count() == 1) return {m, true};
  CopyIndex index(h, n, budget);
  if (m == pairs) return {static_cast<long>(index.size()), true};
  const double hosts = to_double(binomial(pairs, m));
  if (pairs > 64 || hosts > static_cast<double>(budget.enumeration)) {
    const long partial = index.count(detail::clique_first_host(n, m));
    throw ResourceError("packing_number: " + std::to_string(hosts) +
                            " hosts exceed the enumeration budget; best known " +
                            std::to_string(partial),
                        static_cast<double>(partial));
  }
  long best = 0;
  const std::uint64_t last = pairs == 64 ? 0 : (std::uint64_t{1} << pairs);
  for (std::uint64_t host = (m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);;
       host = detail::next_same_popcount(host)) {
    if (pairs < 64 && host >= last) break;
    best = std::max(best, index.count(host));
    if (m == 0 || pairs == 64) break;
  }
  return {best, true};
}

namespace detail {

// n^{v_H} p^{e_H}.
inline Rational packing_cap(int n, const Pattern& h, const Rational& p) {
  return power(Rational(n), h.vertices()) * power(p, h.edge_count());
}

}  // namespace detail

struct MStarResult {
  long value = 0;
  // Per sub-pattern: largest m at which its constraint still holds.
  std::vector<std::pair<std::vector<Edge>, long>> per_pattern;
};

// M*_G(n, p) = max{m <= C(n,2) : N(n, m, H) <= n^{v_H} p^{e_H} for all H}.
// A sub-pattern whose copy count in K_n already meets its cap never binds,
// so its packing numbers are not searched.
inline MStarResult m_star(int n, const Rational& p, const Pattern& g, const Budget& budget = {}) {
  require(p >= 0, "m_star needs p >= 0");
  require(n >= g.vertices(), "m_star needs n >= v_G");
  const long pairs = pair_count(n);
  std::vector<char> ok(pairs + 1, 1);
  MStarResult result;
  for (const auto& h : edge_subpatterns(g)) {
    const Rational cap = detail::packing_cap(n, h, p);
    long last_ok = pairs;
    const long in_complete = static_cast<long>(CopyIndex(h, n, budget).size());
    if (Rational(in_complete) > cap) {
      for (long m = 1; m <= pairs; ++m) {
        if (Rational(packing_number(n, m, h, budget).value) > cap) {
          ok[m] = 0;
          last_ok = std::min(last_ok, m - 1);
        }
      }
    }
    result.per_pattern.push_back({h.edges(), last_ok});
  }
  for (long m = pairs; m >= 0; --m)
    if (ok[m]) {
      result.value = m;
      break;
    }
  return result;
}

inline long m_star_value(int n, double p, const Pattern& g, const Budget& budget = {}) {
  return m_star(n, from_double<Rational>(p), g, budget).value;
}

struct PackingWitness {
  std::optional<double> ratio;  // N(n,m1,H) m2 / (m1 N(n,m2,H)); empty if no constraint
  long n1 = 0;
  long n2 = 0;
};

inline PackingWitness check_packing_inequality(const Pattern& h, int n, long m1, long m2,
                                               const Budget& budget = {}) {
  require(h.edge_count() > 0, "packing inequality needs e_H > 0");
  require(n >= h.vertices(), "packing inequality needs n >= v_H");
  require(0 <= m1 && m1 <= m2 && m2 <= pair_count(n),
          "packing inequality needs 0 <= m1 <= m2 <= C(n, 2)");
  PackingWitness w;
  w.n1 = packing_number(n, m1, h, budget).value;
  w.n2 = packing_number(n, m2, h, budget).value;
  if (m1 == 0 || w.n2 == 0) return w;
  w.ratio = static_cast<double>(w.n1) * static_cast<double>(m2) /
            (static_cast<double>(m1) * static_cast<double>(w.n2));
  return w;
}

// ---------------------------------------------------------------------------
// Random graph models

struct RandomGraphModel {
  enum class Kind { kGnp, kGnm, kExact };
  Kind kind = Kind::kGnp;
  int n = 0;
  Rational p;      // G(n, p)
  long edges = 0;  // G(n, m)
  std::optional<ExactDistribution> dist;

  static RandomGraphModel gnp(int n, const Rational& p) {
    require(n >= 2, "random graph needs n >= 2");
    require(p >= 0 && p <= 1, "G(n, p) needs p in [0, 1]");
    RandomGraphModel model;
    model.kind = Kind::kGnp;
    model.n = n;
    model.p = p;
    return model;
  }
  static RandomGraphModel gnm(int n, long m) {
    require(n >= 2, "random graph needs n >= 2");
    require(m >= 0 && m <= pair_count(n), "G(n, m) needs 0 <= m <= C(n, 2)");
    RandomGraphModel model;
    model.kind = Kind::kGnm;
    model.n = n;
    model.edges = m;
    return model;
  }
  static RandomGraphModel exact(int n, ExactDistribution dist) {
    require(n >= 2, "random graph needs n >= 2");
    if (static_cast<long>(dist.size()) != pair_count(n))
      throw MalformedInputError("edge distribution must have C(n, 2) coordinates");
    if (!dist.is_binary()) throw MalformedInputError("edge distribution must be binary");
    RandomGraphModel model;
    model.kind = Kind::kExact;
    model.n = n;
    model.dist = std::move(dist);
    return model;
  }

  // Largest per-edge marginal Pr[e_{uv} = 1].
  Rational edge_probability() const {
    switch (kind) {
      case Kind::kGnp:
        return p;
      case Kind::kGnm:
        return Rational(edges, pair_count(n));
      case Kind::kExact: {
        auto marginals = MarginalProfile<Rational>::from_distribution(*dist);
        Rational best(0);
        for (int j = 0; j < marginals.variables(); ++j)
          best = std::max(best, marginals.moment(j, 1));
        return best;
      }
    }
    return Rational(0);
  }
};

// The edge law as an explicit distribution over {0,1}^{C(n,2)}.
inline ExactDistribution edge_distribution(const RandomGraphModel& model,
                                           const Budget& budget = {}) {
  const long pairs = pair_count(model.n);
  switch (model.kind) {
    case RandomGraphModel::Kind::kGnp:
      require(pairs <= 30, "exact G(n, p) enumeration needs C(n, 2) <= 30");
      return product_bernoulli<Rational>(static_cast<int>(pairs), model.p, budget);
    case RandomGraphModel::Kind::kGnm: {
      const Integer count = binomial(pairs, model.edges);
      budget.check_enumeration(to_double(count), "G(n, m) enumeration");
      const Rational prob(Integer(1), count);
      std::vector<Outcome<Rational>> support;
      for_each_combination(static_cast<int>(pairs), static_cast<int>(model.edges),
                           [&](const std::vector<int>& chosen) {
                             std::vector<Rational> values(pairs, Rational(0));
                             for (int i : chosen) values[i] = 1;
                             support.push_back({prob, std::move(values)});
                           });
      return ExactDistribution(pairs, std::move(support));
    }
    case RandomGraphModel::Kind::kExact:
      return *model.dist;
  }
  throw PreconditionError("unknown random graph model");
}

namespace detail {

inline std::uint64_t outcome_mask(const Outcome<Rational>& outcome) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; i < outcome.values.size(); ++i)
    if (outcome.values[i] == 1) mask |= std::uint64_t{1} << i;
  return mask;
}

}  // namespace detail

// Law of the copy indicators (x_{E'})_{E' ~ G}.
inline ExactDistribution copy_indicator_distribution(const RandomGraphModel& model,
                                                     const Pattern& g,
                                                     const Budget& budget = {}) {
  require(pair_count(model.n) <= 64, "copy indicators need C(n, 2) <= 64");
  CopyIndex index(g, model.n, budget);
  require(index.size() > 0, "pattern has no copies in K_n");
  const ExactDistribution edges = edge_distribution(model, budget);
  std::map<std::vector<char>, Rational> merged;
  for (const auto& outcome : edges.support()) {
    const std::uint64_t host = detail::outcome_mask(outcome);
    std::vector<char> bits(index.size());
    for (std::size_t c = 0; c < index.size(); ++c) {
      std::uint64_t need = 0;
      for (int i : index.copies()[c]) need |= std::uint64_t{1} << i;
      bits[c] = (host & need) == need;
    }
    merged[bits] += outcome.probability;
  }
  std::vector<Outcome<Rational>> support;
  for (const auto& [bits, prob] : merged) {
    std::vector<Rational> values(bits.size());
    for (std::size_t c = 0; c < bits.size(); ++c) values[c] = bits[c] ? 1 : 0;
    support.push_back({prob, std::move(values)});
  }
  return ExactDistribution(index.size(), std::move(support));
}

// mu* = p^{e_G} prod_{i < v_G} (n - i) / d.
inline Rational copy_mean_independent(const Pattern& g, int n, const Rational& p) {
  Rational falling(1);
  for (int i = 0; i < g.vertices(); ++i) falling *= (n - i);
  return power(p, g.edge_count()) * falling / g.automorphisms();
}

// mu*_i of q(e) under i.i.d. Bernoulli(p) edges. Every edge set K lying in
// some copy is the image of a K inside the first copy under a vertex
// permutation, so the maximum only ranges over subsets of one copy.
inline PolyStats<double> copy_poly_stats(const Pattern& g, int n, double p,
                                         const Budget& budget = {}) {
  require(p >= 0 && p <= 1, "copy_poly_stats needs p in [0, 1]");
  require(n >= g.vertices(), "copy_poly_stats needs n >= v_G");
  CopyIndex index(g, n, budget);
  const int e = g.edge_count();
  const std::vector<int>& first = index.copies().front();
  PolyStats<double> stats;
  stats.mu0_star = static_cast<double>(index.size()) * std::pow(p, e);
  stats.mu_prime = 0.0;
  for (int i = 1; i <= e; ++i) {
    double best = 0.0;
    for_each_combination(e, i, [&](const std::vector<int>& idx) {
      std::vector<int> k;
      for (int t : idx) k.push_back(first[t]);
      long containing = 0;
      for (const auto& copy : index.copies())
        containing += std::includes(copy.begin(), copy.end(), k.begin(), k.end());
      best = std::max(best, static_cast<double>(containing) * std::pow(p, e - i));
    });
    stats.mu_star.push_back(best);
    stats.mu_prime = std::max(stats.mu_prime, best);
  }
  stats.mu = stats.mu0_star;
  return stats;
}

// Smallest delta for which the packing premise
// N(n, m, H) <= delta n^{v_H} p^{e_H} / (2^{e_G} v_G^{v_G}) holds for all H.
inline Rational minimal_premise_delta(const Pattern& g, int n, long m, const Rational& p,
                                      const Budget& budget = {}) {
  require(p > 0, "premise needs p > 0");
  const Rational scale = power(Rational(2), g.edge_count()) *
                         power(Rational(g.vertices()), g.vertices());
  Rational worst(0);
  for (const auto& h : edge_subpatterns(g)) {
    const long packed = packing_number(n, m, h, budget).value;
    worst = std::max(worst, Rational(packed) * scale / detail::packing_cap(n, h, p));
  }
  return worst;
}

struct GraphGbReport {
  bool premise = false;       // packing premise for every H
  bool almost_independent = false;  // edges (delta', e_G m)-almost independent
  bool growth_bounded = false;      // copy indicators (delta'', m)-growth bounded
  Rational growth_factor;     // 1 + delta'' = (1 + delta')^{e_G} (1 + delta) mu* / mu
  Rational mu;                // E[q(e)]
  Rational mu_star;           // independent-model mean with p the largest marginal
  Rational moment_ratio;      // E[q^m] / mu^m
  Rational premise_delta;     // smallest delta meeting the premise

  // Premise and almost independence hold, so the conclusion is asserted.
  bool certified() const { return premise && almost_independent; }
};

inline GraphGbReport graph_gb_check(const Pattern& g, const RandomGraphModel& model,
                                    const Rational& delta, const Rational& delta_prime,
                                    int m, const Budget& budget = {}) {
  require(m >= 1, "graph_gb_check needs m >= 1");
  require(delta > 0, "graph_gb_check needs delta > 0");
  require(delta_prime >= 0, "graph_gb_check needs delta' >= 0");
  require(model.n >= g.vertices(), "graph_gb_check needs n >= v_G");
  require(m <= pair_count(model.n), "graph_gb_check needs m <= C(n, 2)");
  GraphGbReport report;
  const Rational p = model.edge_probability();
  require(p > 0, "graph_gb_check needs a positive edge probability");
  report.premise_delta = minimal_premise_delta(g, model.n, m, p, budget);
  report.premise = report.premise_delta <= delta;

  const ExactDistribution edges = edge_distribution(model, budget);
  report.almost_independent =
      check_almost_independent(edges, delta_prime, g.edge_count() * m, budget).holds;

  const ExactDistribution copies = copy_indicator_distribution(model, g, budget);
  report.mu = coordinate_mean(copies) * static_cast<long>(copies.size());
  report.mu_star = copy_mean_independent(g, model.n, p);
  report.growth_factor = power(Rational(1) + delta_prime, g.edge_count()) *
                         (Rational(1) + delta) * report.mu_star / report.mu;
  auto check = check_growth_bounded(copies, report.growth_factor - 1, m);
  report.growth_bounded = check.holds;
  report.moment_ratio = check.ratio;
  return report;
}

struct JorBound {
  double value = 1.0;
  long m_star = 0;
};

// exp(-c_G eps^2 M*_G(n, p)); c_G is supplied by the caller.
inline JorBound jor_tail_bound(const Pattern& g, int n, const Rational& p, double eps,
                               double c_g, const Budget& budget = {}) {
  require(eps >= 0 && eps <= 0.5, "jor_tail_bound needs eps in [0, 1/2]");
  require(p > 0, "jor_tail_bound needs p > 0");
  require(n >= g.vertices(), "jor_tail_bound needs n >= v_G");
  require(c_g > 0, "jor_tail_bound needs c_G > 0");
  JorBound bound;
  bound.m_star = m_star(n, p, g, budget).value;
  bound.value = std::exp(-c_g * eps * eps * static_cast<double>(bound.m_star));
  return bound;
}

// (1 + e_G / (m - e_G))^{e_G}, the bound on mu* / mu for G(n, m).
inline double gnm_correction_factor(int e_g, long m_edges) {
  require(m_edges > e_g, "correction factor needs m > e_G");
  return std::pow(1.0 + static_cast<double>(e_g) / static_cast<double>(m_edges - e_g), e_g);
}

struct GnmBound {
  double value = 1.0;
  Rational p_paper;     // m / n, the value the bound is stated with
  Rational p_marginal;  // m / C(n, 2), the actual edge marginal
  double correction = 1.0;
  bool correction_ok = false;  // correction <= 1 + eps / 4
  long m_star = 0;
};

inline GnmBound gnm_tail_bound(const Pattern& g, int n, long m_edges, double eps, double c_g,
                               const Budget& budget = {}) {
  require(eps > 0 && eps <= 1, "gnm_tail_bound needs eps in (0, 1]");
  require(n >= g.vertices(), "gnm_tail_bound needs n >= v_G");
  require(m_edges <= pair_count(n), "gnm_tail_bound needs m <= C(n, 2)");
  const double e_g = g.edge_count();
  require(static_cast<double>(m_edges) >= 9.0 * e_g * e_g / eps,
          "gnm_tail_bound needs m >= 9 e_G^2 / eps");
  require(c_g > 0, "gnm_tail_bound needs c_G > 0");
  GnmBound bound;
  bound.p_paper = Rational(m_edges, n);
  bound.p_marginal = Rational(m_edges, pair_count(n));
  bound.correction = gnm_correction_factor(g.edge_count(), m_edges);
  bound.correction_ok = bound.correction <= 1.0 + eps / 4.0;
  bound.m_star = m_star(n, bound.p_paper, g, budget).value;
  bound.value = std::exp(-c_g * eps * eps * static_cast<double>(bound.m_star));
  return bound;
}

// Exact Pr[q(e) >= threshold].
inline Rational subgraph_tail_exact(const RandomGraphModel& model, const Pattern& g,
                                    const Rational& threshold, const Budget& budget = {}) {
  if (threshold <= 0) return Rational(1);
  require(pair_count(model.n) <= 64, "exact subgraph tail needs C(n, 2) <= 64");
  CopyIndex index(g, model.n, budget);
  const ExactDistribution edges = edge_distribution(model, budget);
  Rational total(0);
  for (const auto& outcome : edges.support())
    if (Rational(index.count(detail::outcome_mask(outcome))) >= threshold)
      total += outcome.probability;
  return total;
}

// One host graph drawn from a G(n, p) or G(n, m) model.
inline EdgeAssignment sample_host(const RandomGraphModel& model, std::uint64_t seed) {
  Rng rng(seed);
  const long pairs = pair_count(model.n);
  auto host = EdgeAssignment::empty(model.n);
  switch (model.kind) {
    case RandomGraphModel::Kind::kGnp: {
      const double p = to_double(model.p);
      for (long i = 0; i < pairs; ++i) host.present[i] = uniform01(rng) < p;
      break;
    }
    case RandomGraphModel::Kind::kGnm: {
      std::vector<int> pool(pairs);
      std::iota(pool.begin(), pool.end(), 0);
      for (long i = 0; i < model.edges; ++i) {
        std::swap(pool[i], pool[i + uniform_below(rng, pairs - i)]);
        host.present[pool[i]] = 1;
      }
      break;
    }
    case RandomGraphModel::Kind::kExact: {
      double u = uniform01(rng), cumulative = 0.0;
      const auto& support = model.dist->support();
      std::size_t pick = support.size() - 1;
      for (std::size_t o = 0; o < support.size(); ++o) {
        cumulative += to_double(support[o].probability);
        if (u < cumulative) {
          pick = o;
          break;
        }
      }
      for (long i = 0; i < pairs; ++i) host.present[i] = support[pick].values[i] == 1;
      break;
    }
  }
  return host;
}

// Monte Carlo Pr[q(e) >= threshold]; streams as in monte_carlo_tail.
inline Estimate subgraph_tail_mc(const RandomGraphModel& model, const Pattern& g,
                                 double threshold, std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads = 1, const Budget& budget = {}) {
  auto index = std::make_shared<CopyIndex>(g, model.n, budget);
  SampledDistribution dist{1, [index, model](std::uint64_t s) {
                             return std::vector<double>{
                                 static_cast<double>(index->count(sample_host(model, s)))};
                           }};
  return monte_carlo_tail(dist, threshold, trials, seed, threads);
}

}  // namespace conclab

#endif  // CONCLAB_SUBGRAPH_HPP_
