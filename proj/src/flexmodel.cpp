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

#include "flexbound/flexmodel.hpp"

#include <algorithm>
#include <cmath>

namespace flexbound {

std::string_view to_string(UptimeMode mode) {
  switch (mode) {
    case UptimeMode::kExact: return "exact";
    case UptimeMode::kMinimum: return "minimum";
    case UptimeMode::kFree: return "free";
  }
  return "exact";
}

std::string_view to_string(PcReference ref) {
  return ref == PcReference::kAverage ? "average" : "baseline";
}

UptimeMode uptime_mode_from_string(std::string_view name) {
  if (name == "exact") return UptimeMode::kExact;
  if (name == "minimum" || name == "min") return UptimeMode::kMinimum;
  if (name == "free") return UptimeMode::kFree;
  throw InputError("uptime mode must be exact, minimum or free (got '" +
                   std::string(name) + "')");
}

PcReference pc_reference_from_string(std::string_view name) {
  if (name == "average") return PcReference::kAverage;
  if (name == "baseline") return PcReference::kBaseline;
  throw InputError("pc reference must be average or baseline (got '" +
                   std::string(name) + "')");
}

void FlexSpec::validate() const {
  if (!(uptime > 0.0 && uptime <= 1.0)) {
    throw InputError("uptime must be in (0, 1]");
  }
  if (!(power_capacity >= 0.0 && power_capacity <= 1.0)) {
    throw InputError("power capacity must be in [0, 1]");
  }
  if (!(rte > 0.0 && rte <= 1.0)) {
    throw InputError("round-trip efficiency must be in (0, 1]");
  }
  if (ec_cap && !(*ec_cap >= 0.0 && *ec_cap <= 1.0)) {
    throw InputError("energy capacity cap must be in [0, 1]");
  }
  if (!(dt_hours > 0.0) || !std::isfinite(dt_hours)) {
    throw InputError("timestep must be positive");
  }
  if (baseline.size() == 0) throw InputError("baseline is empty");
  if (!baseline.allFinite() || (baseline.array() < 0.0).any()) {
    throw InputError("baseline values must be finite and non-negative");
  }
  if (!(baseline.sum() > 0.0)) {
    throw InputError("baseline has zero total energy");
  }
}

std::vector<int> FlexSpec::admissible_on_counts() const {
  const int steps = int(horizon());
  std::vector<int> ks;
  switch (uptime_mode) {
    case UptimeMode::kExact: {
      const int k = std::clamp(int(std::lround(uptime * steps)), 1, steps);
      ks.push_back(k);
      break;
    }
    case UptimeMode::kMinimum: {
      const int lo =
          std::clamp(int(std::ceil(uptime * steps - 1e-9)), 1, steps);
      for (int k = lo; k <= steps; ++k) ks.push_back(k);
      break;
    }
    case UptimeMode::kFree:
      for (int k = 1; k <= steps; ++k) ks.push_back(k);
      break;
  }
  return ks;
}

FlexSpec FlexSpec::flat(Eigen::Index steps, double mw) {
  FlexSpec spec;
  spec.baseline = Eigen::VectorXd::Constant(steps, mw);
  return spec;
}

Schedule Schedule::from_power(const Eigen::VectorXd& power, double dt) {
  Schedule s;
  s.power = power;
  s.status = power.array() > 0.0;
  s.dt_hours = dt;
  return s;
}

double FeasibilityReport::max_violation() const {
  double worst = 0.0;
  for (const auto& v : violations) worst = std::max(worst, v.magnitude);
  return worst;
}

namespace {

void check_shape(const Schedule& schedule, const FlexSpec& spec) {
  if (schedule.status.size() != schedule.power.size()) {
    throw InputError("schedule status and power lengths differ");
  }
  if (schedule.horizon() != spec.horizon()) {
    throw InputError("schedule horizon " + std::to_string(schedule.horizon()) +
                     " does not match baseline length " +
                     std::to_string(spec.horizon()));
  }
}

// Largest |1 - p/ref| over on-steps.
double max_relative_deviation(const Schedule& schedule, const FlexSpec& spec) {
  const Eigen::Index n = schedule.horizon();
  const int k = schedule.on_count();
  double worst = 0.0;
  if (spec.pc_reference == PcReference::kAverage) {
    const double avg = schedule.status.select(schedule.power, 0.0).sum() / k;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!schedule.status[t]) continue;
      const double p = schedule.power[t];
      const double dev = avg > 0.0 ? std::abs(1.0 - p / avg) : 0.0;
      worst = std::max(worst, dev);
    }
  } else {
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!schedule.status[t]) continue;
      const double b = spec.baseline[t];
      const double p = schedule.power[t];
      const double dev = b > 0.0 ? std::abs(1.0 - p / b)
                                 : (p > 0.0 ? 1.0 + p : 0.0);
      worst = std::max(worst, dev);
    }
  }
  return worst;
}

}  // namespace

FeasibilityReport feasible(const Schedule& schedule, const FlexSpec& spec,
                           double tol) {
  check_shape(schedule, spec);
  const Eigen::Index n = schedule.horizon();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (schedule.power[t] < -tol) {
      throw InputError("negative power at step " + std::to_string(t));
    }
    if (!schedule.status[t] && std::abs(schedule.power[t]) > tol) {
      throw InputError("power drawn while off at step " + std::to_string(t));
    }
  }

  FeasibilityReport report;
  auto flag = [&](const char* id, double magnitude) {
    if (magnitude > tol) report.violations.push_back({id, magnitude});
  };

  const int k = schedule.on_count();
  const auto ks = spec.admissible_on_counts();
  if (k == 0) {
    flag("uptime", 1.0 / double(n));
  } else if (spec.uptime_mode == UptimeMode::kExact) {
    flag("uptime", std::abs(k - ks.front()) / double(n));
  } else if (k < ks.front()) {
    flag("uptime", (ks.front() - k) / double(n));
  }

  if (k > 0) {
    flag("power_capacity",
         max_relative_deviation(schedule, spec) - spec.power_capacity);
  }

  const double base_energy = spec.baseline.sum() * schedule.dt_hours;
  const double flex_energy = schedule.power.sum() * schedule.dt_hours;
  flag("rte", std::abs(base_energy - spec.rte * flex_energy) /
                  std::max(1.0, base_energy));

  if (spec.ec_cap) {
    flag("ec", energy_capacity(schedule.power, spec.baseline) - *spec.ec_cap);
  }
  report.feasible = report.violations.empty();
  return report;
}

double energy_capacity(const Schedule& schedule,
                       const Eigen::VectorXd& baseline) {
  return energy_capacity(schedule.power, baseline, schedule.dt_hours);
}

double realized_uptime(const Schedule& schedule) {
  if (schedule.horizon() == 0) throw InputError("empty schedule");
  return double(schedule.on_count()) / double(schedule.horizon());
}

double realized_power_capacity(const Schedule& schedule, const FlexSpec& spec) {
  check_shape(schedule, spec);
  if (schedule.on_count() == 0) {
    throw InputError("power capacity undefined for a schedule with no on-steps");
  }
  return max_relative_deviation(schedule, spec);
}

nlohmann::json to_json(const Schedule& schedule) {
  nlohmann::json doc;
  std::vector<int> status(std::size_t(schedule.horizon()));
  for (Eigen::Index t = 0; t < schedule.horizon(); ++t) {
    status[std::size_t(t)] = schedule.status[t] ? 1 : 0;
  }
  doc["status"] = status;
  doc["power"] = std::vector<double>(schedule.power.data(),
                                     schedule.power.data() + schedule.horizon());
  doc["dt_hours"] = schedule.dt_hours;
  return doc;
}

Schedule schedule_from_json(const nlohmann::json& doc) {
  try {
    const auto status = doc.at("status").get<std::vector<int>>();
    const auto power = doc.at("power").get<std::vector<double>>();
    if (status.size() != power.size()) {
      throw InputError("schedule status and power lengths differ");
    }
    Schedule s;
    s.dt_hours = doc.value("dt_hours", 1.0);
    s.power = Eigen::Map<const Eigen::VectorXd>(power.data(),
                                                Eigen::Index(power.size()));
    s.status.resize(Eigen::Index(status.size()));
    for (std::size_t t = 0; t < status.size(); ++t) {
      s.status[Eigen::Index(t)] = status[t] != 0;
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("schedule JSON: ") + e.what());
  }
}

nlohmann::json to_json(const FlexSpec& spec) {
  nlohmann::json doc;
  doc["uptime"] = spec.uptime;
  doc["uptime_mode"] = std::string(to_string(spec.uptime_mode));
  doc["power_capacity"] = spec.power_capacity;
  doc["pc_reference"] = std::string(to_string(spec.pc_reference));
  doc["rte"] = spec.rte;
  doc["ec_cap"] = spec.ec_cap ? nlohmann::json(*spec.ec_cap) : nlohmann::json();
  doc["baseline"] = std::vector<double>(
      spec.baseline.data(), spec.baseline.data() + spec.baseline.size());
  doc["dt_hours"] = spec.dt_hours;
  return doc;
}

FlexSpec flex_spec_from_json(const nlohmann::json& doc) {
  try {
    FlexSpec spec;
    spec.uptime = doc.value("uptime", 1.0);
    spec.uptime_mode =
        uptime_mode_from_string(doc.value("uptime_mode", std::string("exact")));
    spec.power_capacity = doc.value("power_capacity", 0.0);
    spec.pc_reference = pc_reference_from_string(
        doc.value("pc_reference", std::string("average")));
    spec.rte = doc.value("rte", 1.0);
    if (doc.contains("ec_cap") && !doc["ec_cap"].is_null()) {
      spec.ec_cap = doc["ec_cap"].get<double>();
    }
    const auto base = doc.at("baseline").get<std::vector<double>>();
    spec.baseline =
        Eigen::Map<const Eigen::VectorXd>(base.data(), Eigen::Index(base.size()));
    spec.dt_hours = doc.value("dt_hours", 1.0);
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("flex spec JSON: ") + e.what());
  }
}

}  // namespace flexbound
