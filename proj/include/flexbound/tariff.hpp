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

#include <bitset>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flexbound/flexmodel.hpp"
#include "json.hpp"

namespace flexbound {

// Hour-of-day x weekday (Monday = 0) x month (1-12) selector.
struct Applicability {
  std::bitset<24> hours;
  std::bitset<7> weekdays;
  std::bitset<12> months;

  bool contains(int hour, int weekday, int month) const {
    return hours[std::size_t(hour)] && weekdays[std::size_t(weekday)] &&
           months[std::size_t(month - 1)];
  }
  bool empty() const {
    return hours.none() || weekdays.none() || months.none();
  }
  static Applicability always();
};

struct EnergyCharge {
  double rate = 0.0;  // $/MWh
  Applicability applies;
};

struct DemandCharge {
  double rate = 0.0;  // $/MW per billing period
  Applicability window;
};

struct Tariff {
  std::string name;
  std::vector<EnergyCharge> energy_charges;
  std::vector<DemandCharge> demand_charges;
  double fixed_charge = 0.0;  // $ per billing period

  // Throws InputError unless every (month, weekday, hour) has exactly one
  // energy charge and every rate is admissible.
  void validate() const;
};

// A run of whole local days inside one calendar month; `days == 0` means
// through the end of the month. Demand and fixed charges apply once per
// period.
struct BillingPeriod {
  int year = 2023;
  int month = 1;
  int first_day = 1;
  int days = 0;

  int day_count() const;
  Eigen::Index hours() const { return Eigen::Index(day_count()) * 24; }
  // Monday = 0.
  int weekday_at(Eigen::Index step) const;
  int hour_at(Eigen::Index step) const { return int(step % 24); }
};

int days_in_month(int year, int month);

struct BillBreakdown {
  double energy_cost = 0.0;
  std::vector<double> demand_costs;
  double fixed_cost = 0.0;
  double total = 0.0;
};

// One demand charge resolved onto a concrete horizon.
struct DemandWindow {
  double rate = 0.0;
  StatusVector mask;
};

Tariff parse_tariff(std::istream& in);
Tariff parse_tariff_file(const std::string& path);
Tariff tariff_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Tariff& tariff);

BillBreakdown bill(const Tariff& tariff, const Eigen::VectorXd& power,
                   const BillingPeriod& period, double dt_hours = 1.0);
BillBreakdown bill(const Tariff& tariff, const Schedule& schedule,
                   const BillingPeriod& period);

Eigen::VectorXd marginal_energy_rates(const Tariff& tariff,
                                      const BillingPeriod& period);
std::vector<DemandWindow> demand_windows(const Tariff& tariff,
                                         const BillingPeriod& period);

nlohmann::json to_json(const BillBreakdown& b);

}  // namespace flexbound
