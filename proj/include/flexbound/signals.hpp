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

#include <array>
#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace flexbound {

using TimePoint = std::chrono::sys_seconds;

enum class SignalKind { kMef, kAef, kDamPrice, kGeneric };

std::string_view to_string(SignalKind kind);
SignalKind signal_kind_from_string(std::string_view name);

// Canonical units: $/MWh for prices, kgCO2/MWh for emissions factors.
std::string_view default_units(SignalKind kind);
bool is_emissions(SignalKind kind);

// Uniform hourly series anchored at `start` (UTC).
struct SignalSeries {
  SignalKind kind = SignalKind::kGeneric;
  std::string region = "UTC";
  std::string units;
  TimePoint start{};
  Eigen::VectorXd values;

  Eigen::Index size() const { return values.size(); }
  TimePoint timestamp(Eigen::Index i) const {
    return start + std::chrono::hours(i);
  }
};

struct LoadedSignal {
  SignalSeries series;
  // Indices of hours that were filled by linear interpolation.
  std::vector<Eigen::Index> interpolated;
};

// Mean value per local hour-of-day for one calendar month.
struct HourlyProfile {
  int month = 1;
  Eigen::Matrix<double, 24, 1> values = Eigen::Matrix<double, 24, 1>::Zero();
  std::array<int, 24> count{};
};

// Parses `timestamp,value` CSV with a header row. Gaps of up to two missing
// hours are linearly interpolated; anything else off the hourly grid throws
// InputError.
LoadedSignal load_signal(std::istream& in, SignalKind kind,
                         std::string units = {}, std::string region = "UTC");
LoadedSignal load_signal_file(const std::filesystem::path& path,
                              SignalKind kind, std::string units = {},
                              std::string region = "UTC");

void write_signal_csv(std::ostream& out, const SignalSeries& series);

nlohmann::json to_json(const SignalSeries& series);
SignalSeries signal_from_json(const nlohmann::json& doc);

// Fixed UTC offset for a region label ("CAISO", "ERCOT", "UTC-05", ...).
int utc_offset_hours(std::string_view region);

TimePoint parse_timestamp(std::string_view text);
std::string format_timestamp(TimePoint t);

HourlyProfile month_hour_average(const SignalSeries& series, int month);

// Repeats the 24 profile slots `days` times.
Eigen::VectorXd broadcast(const HourlyProfile& profile, int days);

}  // namespace flexbound
