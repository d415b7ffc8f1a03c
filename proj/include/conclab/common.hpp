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

#ifndef CONCLAB_COMMON_HPP_
#define CONCLAB_COMMON_HPP_

// Shared vocabulary for the whole library: exact scalars, error types,
// resource budgets, seed derivation and a few combinatorial helpers.

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace conclab {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                  boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid input (bad file contents, empty support, ...).
class MalformedInputError : public Error {
 public:
  using Error::Error;
};

// Input violates a domain invariant (asymmetric matrix, rows not stochastic).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The requested enumeration or DP exceeds the configured budget.
class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what,
                         std::optional<double> partial = std::nullopt)
      : Error(what), partial_(partial) {}
  // Best value found before giving up, when the operation has one.
  std::optional<double> partial() const { return partial_; }

 private:
  std::optional<double> partial_;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

// ---------------------------------------------------------------------------
// Budgets

struct Budget {
  std::uint64_t enumeration = 1'000'000;  // states / subsets / outcomes
  std::uint64_t dp_cells = 10'000'000;

  // CONC_LAB_BUDGET is either "N" (enumeration N, DP cells 10N) or "N,M".
  static Budget from_env() {
    Budget budget;
    const char* raw = std::getenv("CONC_LAB_BUDGET");
    if (raw == nullptr || *raw == '\0') return budget;
    std::string text(raw);
    auto comma = text.find(',');
    try {
      budget.enumeration = std::stoull(text.substr(0, comma));
      budget.dp_cells = comma == std::string::npos
                            ? budget.enumeration * 10
                            : std::stoull(text.substr(comma + 1));
    } catch (const std::exception&) {
      throw MalformedInputError("CONC_LAB_BUDGET must be \"N\" or \"N,M\", got \"" +
                                text + "\"");
    }
    return budget;
  }

  void check_enumeration(double count, std::string_view what) const {
    if (count > static_cast<double>(enumeration)) {
      throw ResourceError(std::string(what) + ": " + std::to_string(count) +
                          " items exceed the enumeration budget of " +
                          std::to_string(enumeration));
    }
  }
  void check_dp(double cells, std::string_view what) const {
    if (cells > static_cast<double>(dp_cells)) {
      throw ResourceError(std::string(what) + ": " + std::to_string(cells) +
                          " DP cells exceed the budget of " +
                          std::to_string(dp_cells));
    }
  }
};

// ---------------------------------------------------------------------------
// Scalars

template <typename T>
inline constexpr bool kIsExact = std::is_same_v<T, Rational>;

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Integer& x) { return x.convert_to<double>(); }

// Converts a double to the requested scalar. For Rational the conversion is
// exact (every finite double is a dyadic rational).
template <typename S>
S from_double(double x) {
  if constexpr (kIsExact<S>) {
    if (!std::isfinite(x)) throw PreconditionError("non-finite value");
    return Rational(x);
  } else {
    return x;
  }
}

// a <= b, exactly for rationals and with 1e-12 relative slack for doubles.
inline bool leq(const Rational& a, const Rational& b) { return a <= b; }
inline bool leq(double a, double b) {
  return a <= b + 1e-12 * std::max(1.0, std::abs(b));
}

template <typename S>
S power(const S& base, long exponent) {
  if constexpr (kIsExact<S>) {
    if (exponent < 0) return power(S(1) / base, -exponent);
    Rational result(1), b(base);
    while (exponent > 0) {
      if (exponent & 1) result *= b;
      b *= b;
      exponent >>= 1;
    }
    return result;
  } else {
    return std::pow(base, static_cast<double>(exponent));
  }
}

// Parses "num/den", an integer, or a decimal literal into an exact rational.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto fail = [&] {
    return MalformedInputError("cannot parse \"" + std::string(text) +
                               "\" as a rational");
  };
  auto parse_integer = [&](std::string_view s) {
    s = trim(s);
    std::string_view digits = s;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+'))
      digits.remove_prefix(1);
    if (digits.empty()) throw fail();
    for (char c : digits)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    if (s.front() == '+') s.remove_prefix(1);
    return Integer(std::string(s));
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw fail();
    return Rational(num, den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    for (char c : frac)
      if (!std::isdigit(static_cast<unsigned char>(c))) throw fail();
    Integer int_part =
        (whole.empty() || whole == "-" || whole == "+") ? Integer(0)
                                                        : parse_integer(whole);
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer frac_part = frac.empty() ? Integer(0) : Integer(std::string(frac));
    Rational magnitude = Rational(abs(int_part)) + Rational(frac_part, scale);
    return negative ? Rational(-magnitude) : magnitude;
  }
  return Rational(parse_integer(text));
}

inline std::string to_string(const Rational& x) {
  return x.str();
}

// Least integer >= x.
inline long ceil_to_long(const Rational& x) {
  const Integer num = numerator(x);
  const Integer den = denominator(x);
  Integer q = num / den;  // truncates toward zero
  if (q * den < num) q += 1;
  if (q > std::numeric_limits<long>::max() || q < std::numeric_limits<long>::min())
    throw OverflowError("ceiling does not fit in a long");
  return q.convert_to<long>();
}

// ---------------------------------------------------------------------------
// Combinatorics

inline Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Integer result = 1;
  for (long i = 1; i <= k; ++i) {
    result *= (n - k + i);
    result /= i;
  }
  return result;
}

inline double binomial_d(double n, long k) {
  if (k < 0) return 0.0;
  double result = 1.0;
  for (long i = 0; i < k; ++i) result *= (n - i) / static_cast<double>(i + 1);
  return result;
}

inline double log_binomial(long n, long k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Pr[Bin(n, p) >= s], summed term by term.
template <typename S>
S binomial_upper_tail(int n, const S& p, long s) {
  if (s <= 0) return S(1);
  if (s > n) return S(0);
  S total(0);
  S q = S(1) - p;
  for (long j = s; j <= n; ++j) {
    S term = power(p, j) * power(q, n - j);
    if constexpr (kIsExact<S>) {
      total += Rational(binomial(n, j)) * term;
    } else {
      total += std::exp(log_binomial(n, j)) * term;
    }
  }
  return total;
}

// Visits every size-k subset of {0, ..., n-1} in lexicographic order. The
// callback receives a const reference to the current index vector.
template <typename F>
void for_each_combination(int n, int k, F&& visit) {
  if (k < 0 || k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(static_cast<const std::vector<int>&>(idx));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// ---------------------------------------------------------------------------
// Randomness
//
// Every stochastic routine takes an explicit 64-bit seed. Per-trial streams
// use derive_seed(master, tag, index) = splitmix64(splitmix64(master ^ tag) +
// index), where tag is the FNV-1a hash of a routine or experiment name. The
// result only depends on the trial index, never on which thread ran it.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index) {
  return splitmix64(splitmix64(master ^ tag) + index);
}

using Rng = std::mt19937_64;

// Uniform in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in {0, ..., bound - 1} by rejection, independent of the standard
// library's distribution implementations.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound <= 1) return 0;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

// Exact probability or a Monte Carlo estimate with a 99% normal-approximation
// half-width.
struct Estimate {
  double value = 0.0;
  double ci_half_width = 0.0;
  bool exact = true;
};

inline constexpr double kZ99 = 2.5758293035489004;

inline Estimate proportion_estimate(std::uint64_t hits, std::uint64_t trials) {
  double p = static_cast<double>(hits) / static_cast<double>(trials);
  return {p, kZ99 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials)),
          false};
}

}  // namespace conclab

#endif  // CONCLAB_COMMON_HPP_
