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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flexbound/error.hpp"
#include "json.hpp"

namespace flexbound {

using StatusVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

enum class UptimeMode { kExact, kMinimum, kFree };
// Reference power for the power-capacity band: the mean on-step power, or
// the baseline at the same timestep.
enum class PcReference { kAverage, kBaseline };

std::string_view to_string(UptimeMode mode);
std::string_view to_string(PcReference ref);
UptimeMode uptime_mode_from_string(std::string_view name);
PcReference pc_reference_from_string(std::string_view name);

struct FlexSpec {
  double uptime = 1.0;
  UptimeMode uptime_mode = UptimeMode::kExact;
  double power_capacity = 0.0;
  PcReference pc_reference = PcReference::kAverage;
  double rte = 1.0;
  std::optional<double> ec_cap;
  Eigen::VectorXd baseline;  // MW per step
  double dt_hours = 1.0;

  Eigen::Index horizon() const { return baseline.size(); }

  // Throws InputError when a field is out of range.
  void validate() const;

  // Total energy the flexible load must draw, in MWh.
  double energy_target() const { return baseline.sum() * dt_hours / rte; }

  // On-counts k the uptime mode admits, ascending.
  std::vector<int> admissible_on_counts() const;

  static FlexSpec flat(Eigen::Index steps, double mw = 1.0);
};

struct Schedule {
  StatusVector status;
  Eigen::VectorXd power;  // net MW; zero wherever status is off
  double dt_hours = 1.0;

  Eigen::Index horizon() const { return power.size(); }
  int on_count() const { return int(status.count()); }

  static Schedule from_power(const Eigen::VectorXd& power, double dt = 1.0);
};

struct Violation {
  std::string constraint;  // uptime, power_capacity, rte, ec
  double magnitude = 0.0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
  double max_violation() const;
};

constexpr double kFeasibilityTolerance = 1e-8;

FeasibilityReport feasible(const Schedule& schedule, const FlexSpec& spec,
                           double tol = kFeasibilityTolerance);

// Fraction of baseline energy not consumed in steps at or below baseline.
template <typename PowerDerived, typename BaseDerived>
double energy_capacity(const Eigen::MatrixBase<PowerDerived>& power,
                       const Eigen::MatrixBase<BaseDerived>& baseline,
                       double dt = 1.0) {
  if (power.size() != baseline.size()) {
    throw InputError("schedule and baseline lengths differ");
  }
  if (!(baseline.sum() > 0.0)) {
    throw InputError("energy capacity undefined for zero baseline energy");
  }
  const auto deficit = (baseline - power).array();
  const double shifted = (power.array() <= baseline.array())
                             .select(deficit, 0.0)
                             .sum() *
                         dt;
  return shifted / (baseline.sum() * dt);
}

double energy_capacity(const Schedule& schedule,
                       const Eigen::VectorXd& baseline);

double realized_uptime(const Schedule& schedule);
double realized_power_capacity(const Schedule& schedule, const FlexSpec& spec);

nlohmann::json to_json(const Schedule& schedule);
Schedule schedule_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const FlexSpec& spec);
FlexSpec flex_spec_from_json(const nlohmann::json& doc);

}  // namespace flexbound
