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

#ifndef CONCLAB_HARNESS_HPP_
#define CONCLAB_HARNESS_HPP_

// Experiment configuration and reporting: typed parameter schemas with
// comma-separated sweeps, command line and key=value config file parsing,
// and the CSV / JSON report writers.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "conclab/common.hpp"

namespace conclab {

// ASCII "conc-lab".
inline constexpr std::uint64_t kDefaultSeed = 0x636F6E632D6C6162ULL;

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ParamType { kInt, kReal, kRational, kString };

// Rational parameters keep their source text; they are parsed on use.
using ParamValue = std::variant<long, double, std::string>;
using ParamPoint = std::map<std::string, ParamValue>;

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::kReal;
  std::string default_value;  // empty: required
  std::string help;
  // Returns an error message, or an empty string when the value is fine.
  std::function<std::string(const ParamValue&)> check;
};

struct RunContext {
  std::uint64_t seed = kDefaultSeed;  // already derived for the row
  std::uint64_t trials = 10000;
  unsigned threads = 1;
  Budget budget;
};

struct ReportRow {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();
  double bound = std::numeric_limits<double>::quiet_NaN();
  std::string bound_kind = "none";  // exact-rational | float | mc-estimate | none
  double oracle = std::numeric_limits<double>::quiet_NaN();
  double oracle_ci = 0.0;
  std::string oracle_kind = "none";
  std::string verdict;
  double ms = 0.0;

  // Parameter snapshot with the provenance labels, keys sorted.
  std::string param_json() const {
    nlohmann::json snapshot = params;
    snapshot["provenance"] = {{"bound", bound_kind}, {"oracle", oracle_kind}};
    return snapshot.dump();
  }
};

struct ExperimentSpec {
  std::string id;
  std::string pairing;  // bound and oracle, shown in --help
  std::vector<ParamSpec> params;
  std::function<std::vector<ReportRow>(const ParamPoint&, const RunContext&)> run;
};

struct RunConfig {
  std::string command;
  // Each parameter holds a sweep: a list of one or more values.
  std::map<std::string, std::vector<ParamValue>> params;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t trials = 10000;
  std::string output = "-";
  std::string format = "csv";
  unsigned threads = 1;
  Budget budget;
  bool timing = true;
};

// ---------------------------------------------------------------------------
// Parameter access

inline long get_int(const ParamPoint& point, const std::string& key) {
  return std::get<long>(point.at(key));
}

inline Rational get_rational(const ParamPoint& point, const std::string& key) {
  const auto& value = point.at(key);
  if (auto* text = std::get_if<std::string>(&value)) return parse_rational(*text);
  if (auto* integer = std::get_if<long>(&value)) return Rational(*integer);
  return from_double<Rational>(std::get<double>(value));
}

inline double get_real(const ParamPoint& point, const std::string& key) {
  const auto& value = point.at(key);
  if (auto* real = std::get_if<double>(&value)) return *real;
  if (auto* integer = std::get_if<long>(&value)) return static_cast<double>(*integer);
  return to_double(parse_rational(std::get<std::string>(value)));
}

inline const std::string& get_string(const ParamPoint& point, const std::string& key) {
  return std::get<std::string>(point.at(key));
}

inline nlohmann::json param_to_json(const ParamValue& value) {
  if (auto* integer = std::get_if<long>(&value)) return *integer;
  if (auto* real = std::get_if<double>(&value)) return *real;
  return std::get<std::string>(value);
}

inline nlohmann::json point_to_json(const ParamPoint& point) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : point) j[key] = param_to_json(value);
  return j;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  if (items.empty()) items.push_back("");
  return items;
}

inline ParamValue parse_value(const ParamSpec& spec, const std::string& text) {
  auto bad = [&](const char* expected) {
    return ConfigError("--" + spec.name + " \"" + text + "\" is not " + expected);
  };
  switch (spec.type) {
    case ParamType::kInt: {
      std::size_t used = 0;
      long value = 0;
      try {
        value = std::stol(text, &used);
      } catch (const std::exception&) {
        throw bad("an integer");
      }
      if (used != text.size()) throw bad("an integer");
      return value;
    }
    case ParamType::kReal: {
      try {
        return to_double(parse_rational(text));
      } catch (const MalformedInputError&) {
      }
      char* end = nullptr;
      const double value = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value))
        throw bad("a real number");
      return value;
    }
    case ParamType::kRational:
      try {
        parse_rational(text);
      } catch (const MalformedInputError&) {
        throw bad("a rational number (e.g. 3/10 or 0.3)");
      }
      return text;
    case ParamType::kString:
      return text;
  }
  throw bad("valid");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Validators

// Checks lo <= x <= hi (strict at an open end) and reports the interval with
// its mathematical name, e.g. "ε ∈ [0, 4/5]".
inline std::function<std::string(const ParamValue&)> in_range(double lo, double hi,
                                                              bool lo_open, bool hi_open,
                                                              std::string symbol,
                                                              std::string interval) {
  return [=](const ParamValue& value) -> std::string {
    double x;
    if (auto* real = std::get_if<double>(&value)) {
      x = *real;
    } else if (auto* integer = std::get_if<long>(&value)) {
      x = static_cast<double>(*integer);
    } else {
      x = to_double(parse_rational(std::get<std::string>(value)));
    }
    const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
    if (ok) return "";
    return "requires " + symbol + " ∈ " + interval;
  };
}

inline std::function<std::string(const ParamValue&)> one_of(std::vector<std::string> allowed) {
  return [=](const ParamValue& value) -> std::string {
    const auto& text = std::get<std::string>(value);
    if (std::find(allowed.begin(), allowed.end(), text) != allowed.end()) return "";
    std::string message = "must be one of";
    for (const auto& a : allowed) message += " " + a;
    return message;
  };
}

// ---------------------------------------------------------------------------
// Command line and config file

// key=value lines; '#' starts a comment.
inline std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> values;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    values[key] = detail::trim(line.substr(eq + 1));
  }
  return values;
}

inline std::string usage_hint(const std::string& command) {
  return " (run `conc-lab " + (command.empty() ? std::string("--help") : command + " --help") +
         "` for the accepted parameters)";
}

// Owns the CLI11 application so callers can print help and parse errors
// through CLI11's own exit path.
class CommandLine {
 public:
  explicit CommandLine(const std::vector<ExperimentSpec>& registry)
      : registry_(registry), app_("conc-lab: bound-versus-oracle experiments for "
                                  "concentration inequalities") {
    app_.require_subcommand(1);
    app_.fallthrough();
    app_.add_option("--config", config_path_, "key=value file; flags override it");
    seed_ = app_.add_option("--seed", common_["seed"], "64-bit master seed (default " +
                                                           std::to_string(kDefaultSeed) + ")");
    trials_ = app_.add_option("--trials", common_["trials"], "Monte Carlo trials (default 10000)");
    output_ = app_.add_option("--output", common_["output"], "report path, - for stdout");
    format_ = app_.add_option("--format", common_["format"], "csv or json");
    threads_ = app_.add_option("--threads", common_["threads"], "parallel rows / MC workers");
    budget_ = app_.add_option("--budget", common_["budget"],
                              "enumeration budget N or N,M (also CONC_LAB_BUDGET)");
    no_timing_ = app_.add_flag("--no-timing", "write 0 in the ms column");
    for (const auto& spec : registry_) {
      auto* sub = app_.add_subcommand(spec.id, spec.pairing);
      sub->fallthrough();
      for (const auto& param : spec.params) {
        std::string help = param.help;
        if (!param.default_value.empty()) help += " (default " + param.default_value + ")";
        help += "; comma list sweeps";
        options_[spec.id][param.name] =
            sub->add_option("--" + param.name, raw_[spec.id][param.name], help);
      }
      subcommands_[spec.id] = sub;
    }
  }

  CLI::App& app() { return app_; }

  RunConfig parse(int argc, const char* const* argv) {
    app_.parse(argc, argv);
    return build();
  }

  RunConfig parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app_.parse(args);
    return build();
  }

 private:
  RunConfig build() {
    RunConfig config;
    const ExperimentSpec* spec = nullptr;
    for (const auto& candidate : registry_)
      if (subcommands_.at(candidate.id)->parsed()) spec = &candidate;
    if (spec == nullptr) throw ConfigError("no experiment given" + usage_hint(""));
    config.command = spec->id;

    std::map<std::string, std::string> file;
    if (!config_path_.empty()) file = read_config_file(config_path_);
    std::map<std::string, std::string> merged;
    static const char* kCommon[] = {"seed", "trials", "output", "format", "threads",
                                    "budget", "timing"};
    for (const auto& [key, value] : file) {
      bool known = std::find(std::begin(kCommon), std::end(kCommon), key) != std::end(kCommon);
      for (const auto& param : spec->params) known = known || param.name == key;
      if (!known)
        throw ConfigError("unknown key \"" + key + "\" in " + config_path_ +
                          usage_hint(spec->id));
      merged[key] = value;
    }
    auto flag = [&](CLI::Option* opt, const std::string& key) {
      if (opt->count() > 0) merged[key] = common_[key];
    };
    flag(seed_, "seed");
    flag(trials_, "trials");
    flag(output_, "output");
    flag(format_, "format");
    flag(threads_, "threads");
    flag(budget_, "budget");
    if (no_timing_->count() > 0) merged["timing"] = "false";
    for (const auto& param : spec->params)
      if (options_.at(spec->id).at(param.name)->count() > 0)
        merged[param.name] = raw_[spec->id][param.name];

    auto unsigned_value = [&](const std::string& key, std::uint64_t& out) {
      if (!merged.count(key)) return;
      const std::string& text = merged[key];
      std::size_t used = 0;
      try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument(key);
        out = std::stoull(text, &used, 0);
      } catch (const std::exception&) {
        throw ConfigError("--" + key + " \"" + text + "\" is not an unsigned integer" +
                          usage_hint(spec->id));
      }
      if (used != text.size())
        throw ConfigError("--" + key + " \"" + text + "\" is not an unsigned integer" +
                          usage_hint(spec->id));
    };
    unsigned_value("seed", config.seed);
    unsigned_value("trials", config.trials);
    if (config.trials == 0) throw ConfigError("--trials must be positive" + usage_hint(spec->id));
    std::uint64_t threads = 1;
    unsigned_value("threads", threads);
    if (threads == 0 || threads > 256)
      throw ConfigError("--threads must be in 1..256" + usage_hint(spec->id));
    config.threads = static_cast<unsigned>(threads);
    if (merged.count("output")) config.output = merged["output"];
    if (merged.count("format")) config.format = merged["format"];
    if (config.format != "csv" && config.format != "json")
      throw ConfigError("--format must be csv or json" + usage_hint(spec->id));
    config.budget = Budget::from_env();
    if (merged.count("budget")) {
      const std::string& text = merged["budget"];
      try {
        const auto comma = text.find(',');
        std::size_t used = 0;
        config.budget.enumeration = std::stoull(text.substr(0, comma), &used);
        config.budget.dp_cells = comma == std::string::npos
                                     ? config.budget.enumeration * 10
                                     : std::stoull(text.substr(comma + 1));
      } catch (const std::exception&) {
        throw ConfigError("--budget must be N or N,M" + usage_hint(spec->id));
      }
    }
    if (merged.count("timing")) {
      const std::string& text = merged["timing"];
      if (text == "false" || text == "0" || text == "off") {
        config.timing = false;
      } else if (text == "true" || text == "1" || text == "on") {
        config.timing = true;
      } else {
        throw ConfigError("timing must be true or false" + usage_hint(spec->id));
      }
    }

    for (const auto& param : spec->params) {
      std::string text = param.default_value;
      if (merged.count(param.name)) text = merged[param.name];
      if (text.empty())
        throw ConfigError("missing required parameter --" + param.name + usage_hint(spec->id));
      auto& values = config.params[param.name];
      for (const auto& item : detail::split_list(text)) {
        ParamValue value;
        try {
          value = detail::parse_value(param, item);
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(e.what()) + usage_hint(spec->id));
        }
        if (param.check) {
          std::string problem = param.check(value);
          if (!problem.empty())
            throw ConfigError(spec->id + ": --" + param.name + " " + item + " " + problem +
                              usage_hint(spec->id));
        }
        values.push_back(std::move(value));
      }
    }
    return config;
  }

  const std::vector<ExperimentSpec>& registry_;
  CLI::App app_;
  std::string config_path_;
  std::map<std::string, std::string> common_;
  CLI::Option* seed_ = nullptr;
  CLI::Option* trials_ = nullptr;
  CLI::Option* output_ = nullptr;
  CLI::Option* format_ = nullptr;
  CLI::Option* threads_ = nullptr;
  CLI::Option* budget_ = nullptr;
  CLI::Option* no_timing_ = nullptr;
  std::map<std::string, std::map<std::string, std::string>> raw_;
  std::map<std::string, std::map<std::string, CLI::Option*>> options_;
  std::map<std::string, CLI::App*> subcommands_;
};

// ---------------------------------------------------------------------------
// Reports

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

inline std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

inline const char* kCsvHeader = "experiment,param_json,bound,oracle,oracle_ci,verdict,ms";

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& row : rows) {
    out += csv_field(row.experiment) + "," + csv_field(row.param_json()) + "," +
           format_number(row.bound) + "," + format_number(row.oracle) + "," +
           format_number(row.oracle_ci) + "," + csv_field(row.verdict) + "," +
           format_number(row.ms) + "\n";
  }
  return out;
}

namespace detail {

// Numbers as %.17g; NaN as null and infinities as strings, which JSON lacks.
inline std::string json_number(double x) {
  if (std::isnan(x)) return "null";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return format_number(x);
}

inline double number_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) {
    const auto& s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw MalformedInputError("unexpected number string \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace detail

inline std::string report_json(const std::vector<ReportRow>& rows) {
  std::string out = "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    out += i == 0 ? "\n" : ",\n";
    out += "  {\"experiment\": " + nlohmann::json(row.experiment).dump() +
           ", \"params\": " + row.params.dump() +
           ", \"bound\": " + detail::json_number(row.bound) +
           ", \"bound_kind\": " + nlohmann::json(row.bound_kind).dump() +
           ", \"oracle\": " + detail::json_number(row.oracle) +
           ", \"oracle_ci\": " + detail::json_number(row.oracle_ci) +
           ", \"oracle_kind\": " + nlohmann::json(row.oracle_kind).dump() +
           ", \"verdict\": " + nlohmann::json(row.verdict).dump() +
           ", \"ms\": " + detail::json_number(row.ms) + "}";
  }
  out += rows.empty() ? "]\n" : "\n]\n";
  return out;
}

inline std::vector<ReportRow> rows_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<ReportRow> rows;
  for (const auto& item : j) {
    ReportRow row;
    row.experiment = item.at("experiment").get<std::string>();
    row.params = item.at("params");
    row.bound = detail::number_from_json(item.at("bound"));
    row.bound_kind = item.at("bound_kind").get<std::string>();
    row.oracle = detail::number_from_json(item.at("oracle"));
    row.oracle_ci = detail::number_from_json(item.at("oracle_ci"));
    row.oracle_kind = item.at("oracle_kind").get<std::string>();
    row.verdict = item.at("verdict").get<std::string>();
    row.ms = detail::number_from_json(item.at("ms"));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void emit_report(const std::vector<ReportRow>& rows, const std::string& format,
                        const std::string& path) {
  const std::string text = format == "json" ? report_json(rows) : report_csv(rows);
  if (path == "-" || path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write report to " + path);
  out << text;
  if (!out) throw Error("error while writing report to " + path);
}

// Exit code contract: failure iff some row is violated or errored.
inline bool report_failed(const std::vector<ReportRow>& rows) {
  for (const auto& row : rows)
    if (row.verdict == "violated" || row.verdict == "error") return true;
  return false;
}

}  // namespace conclab

#endif  // CONCLAB_HARNESS_HPP_
