// Copyright 2026 The flexbound Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace flexbound::cli {

enum class ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

struct RunConfig {
  std::string command;  // solve, sweep, pareto, abatement, rte-threshold,
                        // bill, emit-baseline

  std::string signal;  // incentive CSV; alias of cost for pareto/abatement
  std::string signal_kind = "dam";
  std::string tariff;
  std::string emissions;
  std::string baseline;
  std::string schedule;  // for bill
  std::string region = "UTC";
  int year = 2023;
  int month = 7;
  int days = 0;           // 0 = whole month
  int profile_month = 0;  // 0 = use the raw hourly trace

  double uptime = 1.0;
  std::string uptime_mode = "exact";
  double pc = 0.0;
  std::string pc_reference = "average";
  double rte = 1.0;
  std::optional<double> ec;
  std::string method = "exact";  // exact or lagrangian

  double lambda = 0.0;
  std::vector<double> lambdas;  // empty = default schedule
  std::vector<double> u_grid{0.25, 0.5, 0.75, 1.0};
  std::vector<double> pc_grid{0.0, 0.5, 1.0};
  std::vector<double> fractions{0.5, 1.0};
  double scc = 140.0;
  double rec_low = 1.0;
  double rec_high = 20.0;
  double tolerance = 1e-4;

  int steps = 24;
  double mw = 1.0;

  std::string out = "out";
  std::string format = "csv";  // plot data format: csv or json
  unsigned long long seed = 0;
};

nlohmann::json to_json(const RunConfig& config);
// Overwrites only the fields present in `doc`.
void apply_json(const nlohmann::json& doc, RunConfig& config);

// Parses argv into a config; a --config file is applied first so that
// explicit flags win. Throws InputError on bad usage. Returns nullopt when
// help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out);

ExitCode run(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_args + run with error mapping; what main() calls.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace flexbound::cli
