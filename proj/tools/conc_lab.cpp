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

#include <iostream>

#include "conclab/experiments.hpp"

int main(int argc, char** argv) {
  conclab::CommandLine cli(conclab::experiment_registry());
  conclab::RunConfig config;
  try {
    config = cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.app().exit(e);
    return code == 0 ? 0 : 2;
  } catch (const conclab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    const auto rows = conclab::run_experiment(config);
    conclab::emit_report(rows, config.format, config.output);
    return conclab::report_failed(rows) ? 1 : 0;
  } catch (const conclab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
