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

#ifndef CONCLAB_FORMATS_HPP_
#define CONCLAB_FORMATS_HPP_

// JSON file formats:
//   distribution  {"n": 3, "entries": [{"p": "1/2", "x": [1, 0, 1]}, ...]}
//                 all-string probabilities load exactly, otherwise as doubles
//   matrix        {"n": 2, "rows": [["1/2", "1/2"], ["1/2", "1/2"]]}
//   target set    [0, 3, 5]
//   polynomial    {"l": 4, "monomials": [{"w": 1.5, "vars": [0, 0, 2]}, ...]}
//   pattern       {"vertices": 3, "edges": [[0, 1], [1, 2]]}

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "conclab/common.hpp"
#include "conclab/core_bounds.hpp"
#include "conclab/expander.hpp"
#include "conclab/polybound.hpp"
#include "conclab/subgraph.hpp"

namespace conclab {

using Json = nlohmann::json;

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw MalformedInputError(path + ": " + e.what());
  }
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw MalformedInputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline long as_integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw MalformedInputError(std::string(what) + " must be an integer");
  return j.get<long>();
}

// A number or a "num/den" string, exactly.
inline Rational as_rational(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return from_double<Rational>(j.get<double>());
  throw MalformedInputError("expected a number or a rational string");
}

inline double as_real(const Json& j) {
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  if (j.is_number()) return j.get<double>();
  throw MalformedInputError("expected a number or a rational string");
}

template <typename S>
S as_scalar(const Json& j) {
  if constexpr (kIsExact<S>) {
    return as_rational(j);
  } else {
    return as_real(j);
  }
}

template <typename S>
BasicDistribution<S> distribution_from(const Json& j, std::size_t n) {
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) throw MalformedInputError("\"entries\" must be an array");
  std::vector<Outcome<S>> support;
  for (const auto& entry : entries) {
    Outcome<S> outcome{as_scalar<S>(field(entry, "p")), {}};
    const Json& x = field(entry, "x");
    if (!x.is_array()) throw MalformedInputError("\"x\" must be an array");
    for (const auto& v : x) outcome.values.push_back(as_scalar<S>(v));
    support.push_back(std::move(outcome));
  }
  return BasicDistribution<S>(n, std::move(support));
}

}  // namespace detail

using AnyDistribution = std::variant<ExactDistribution, FloatDistribution>;

inline AnyDistribution distribution_from_json(const Json& j) {
  const long n = detail::as_integer(detail::field(j, "n"), "\"n\"");
  if (n < 1) throw MalformedInputError("distribution needs n >= 1");
  bool exact = true;
  for (const auto& entry : detail::field(j, "entries"))
    if (!detail::field(entry, "p").is_string()) exact = false;
  if (exact) return detail::distribution_from<Rational>(j, n);
  return detail::distribution_from<double>(j, n);
}

inline AnyDistribution load_distribution(const std::string& path) {
  return distribution_from_json(read_json_file(path));
}

template <typename S>
Json distribution_to_json(const BasicDistribution<S>& dist) {
  Json entries = Json::array();
  for (const auto& outcome : dist.support()) {
    Json x = Json::array();
    for (const auto& v : outcome.values) {
      if constexpr (kIsExact<S>) {
        x.push_back(to_string(v));
      } else {
        x.push_back(v);
      }
    }
    if constexpr (kIsExact<S>) {
      entries.push_back({{"p", to_string(outcome.probability)}, {"x", x}});
    } else {
      entries.push_back({{"p", outcome.probability}, {"x", x}});
    }
  }
  return {{"n", dist.size()}, {"entries", entries}};
}

// All-string entries give a matrix with exact rational entries.
inline TransitionMatrix matrix_from_json(const Json& j) {
  const long n = detail::as_integer(detail::field(j, "n"), "\"n\"");
  const Json& rows = detail::field(j, "rows");
  if (!rows.is_array() || static_cast<long>(rows.size()) != n)
    throw MalformedInputError("\"rows\" must hold n rows");
  bool exact = true;
  for (const auto& row : rows) {
    if (!row.is_array() || static_cast<long>(row.size()) != n)
      throw MalformedInputError("every row must hold n entries");
    for (const auto& a : row)
      if (!a.is_string()) exact = false;
  }
  if (exact) {
    RationalMatrix a(n, std::vector<Rational>(n));
    for (long r = 0; r < n; ++r)
      for (long c = 0; c < n; ++c) a[r][c] = detail::as_rational(rows[r][c]);
    return TransitionMatrix::from_rationals(std::move(a));
  }
  Eigen::MatrixXd a(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) a(r, c) = detail::as_real(rows[r][c]);
  return TransitionMatrix::from_doubles(std::move(a));
}

inline TransitionMatrix load_matrix(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

inline std::vector<int> target_from_json(const Json& j) {
  if (!j.is_array()) throw MalformedInputError("target set must be an array");
  std::vector<int> w;
  for (const auto& v : j) w.push_back(static_cast<int>(detail::as_integer(v, "target vertex")));
  return w;
}

inline std::vector<int> load_target(const std::string& path) {
  return target_from_json(read_json_file(path));
}

template <typename S = double>
BasicPolynomial<S> polynomial_from_json(const Json& j) {
  const long ell = detail::as_integer(detail::field(j, "l"), "\"l\"");
  const Json& monomials = detail::field(j, "monomials");
  if (!monomials.is_array()) throw MalformedInputError("\"monomials\" must be an array");
  std::vector<Monomial<S>> out;
  for (const auto& mono : monomials) {
    Monomial<S> m{detail::as_scalar<S>(detail::field(mono, "w")), {}};
    for (const auto& v : detail::field(mono, "vars"))
      m.support.push_back(static_cast<int>(detail::as_integer(v, "variable index")));
    out.push_back(std::move(m));
  }
  return BasicPolynomial<S>(static_cast<int>(ell), std::move(out));
}

template <typename S = double>
BasicPolynomial<S> load_polynomial(const std::string& path) {
  return polynomial_from_json<S>(read_json_file(path));
}

inline Pattern pattern_from_json(const Json& j) {
  const long v = detail::as_integer(detail::field(j, "vertices"), "\"vertices\"");
  std::vector<Edge> edges;
  for (const auto& e : detail::field(j, "edges")) {
    if (!e.is_array() || e.size() != 2)
      throw MalformedInputError("every edge must be a pair [u, v]");
    edges.push_back({static_cast<int>(detail::as_integer(e[0], "edge endpoint")),
                     static_cast<int>(detail::as_integer(e[1], "edge endpoint"))});
  }
  return Pattern(static_cast<int>(v), std::move(edges));
}

// A built-in name (k2, k3, k4, p3, c4) or a path to a pattern file.
inline Pattern load_pattern(const std::string& name_or_path) {
  if (auto builtin = Pattern::builtin(name_or_path)) return *builtin;
  return pattern_from_json(read_json_file(name_or_path));
}

}  // namespace conclab

#endif  // CONCLAB_FORMATS_HPP_
