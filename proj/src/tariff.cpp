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

#include "flexbound/tariff.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "flexbound/error.hpp"

namespace flexbound {
namespace {

template <std::size_t N>
std::bitset<N> read_set(const nlohmann::json& doc, const char* key, int lo,
                        int hi) {
  std::bitset<N> bits;
  if (!doc.contains(key)) {
    bits.set();
    return bits;
  }
  for (const auto& v : doc.at(key)) {
    const int x = v.get<int>();
    if (x < lo || x > hi) {
      throw InputError(std::string(key) + " entry " + std::to_string(x) +
                       " outside " + std::to_string(lo) + ".." +
                       std::to_string(hi));
    }
    bits.set(std::size_t(x - lo));
  }
  return bits;
}

template <std::size_t N>
std::vector<int> write_set(const std::bitset<N>& bits, int lo) {
  std::vector<int> out;
  for (std::size_t i = 0; i < N; ++i) {
    if (bits[i]) out.push_back(int(i) + lo);
  }
  return out;
}

Applicability read_applicability(const nlohmann::json& doc) {
  Applicability a;
  a.hours = read_set<24>(doc, "hours", 0, 23);
  a.weekdays = read_set<7>(doc, "weekdays", 0, 6);
  a.months = read_set<12>(doc, "months", 1, 12);
  return a;
}

void write_applicability(nlohmann::json& doc, const Applicability& a) {
  doc["hours"] = write_set(a.hours, 0);
  doc["weekdays"] = write_set(a.weekdays, 0);
  doc["months"] = write_set(a.months, 1);
}

}  // namespace

Applicability Applicability::always() {
  Applicability a;
  a.hours.set();
  a.weekdays.set();
  a.months.set();
  return a;
}

void Tariff::validate() const {
  if (!std::isfinite(fixed_charge)) throw InputError("fixed charge not finite");
  if (energy_charges.empty()) throw InputError("tariff has no energy charges");
  for (const auto& e : energy_charges) {
    if (!std::isfinite(e.rate)) throw InputError("energy rate not finite");
    if (e.applies.empty()) {
      throw InputError("energy charge with empty applicability");
    }
  }
  for (const auto& d : demand_charges) {
    if (!std::isfinite(d.rate) || d.rate < 0.0) {
      throw InputError("demand charge rate must be finite and >= 0");
    }
    if (d.window.empty()) throw InputError("demand charge with empty window");
  }
  for (int m = 1; m <= 12; ++m) {
    for (int w = 0; w < 7; ++w) {
      for (int h = 0; h < 24; ++h) {
        int hits = 0;
        for (const auto& e : energy_charges) hits += e.applies.contains(h, w, m);
        if (hits == 0) {
          throw InputError("uncovered hours: month " + std::to_string(m) +
                           ", weekday " + std::to_string(w) + ", hour " +
                           std::to_string(h) + " has no energy charge");
        }
        if (hits > 1) {
          throw InputError("overlapping energy periods at month " +
                           std::to_string(m) + ", weekday " +
                           std::to_string(w) + ", hour " + std::to_string(h));
        }
      }
    }
  }
}

int days_in_month(int year, int month) {
  const std::chrono::year_month_day_last last{
      std::chrono::year{year} / std::chrono::month{unsigned(month)} /
      std::chrono::last};
  return int(unsigned(last.day()));
}

int BillingPeriod::day_count() const {
  if (month < 1 || month > 12) throw InputError("billing month out of range");
  const int dim = days_in_month(year, month);
  if (first_day < 1 || first_day > dim) {
    throw InputError("billing period first day out of range");
  }
  const int n = days == 0 ? dim - first_day + 1 : days;
  if (n < 1 || first_day + n - 1 > dim) {
    throw InputError("billing period runs past the end of the month");
  }
  return n;
}

int BillingPeriod::weekday_at(Eigen::Index step) const {
  const std::chrono::sys_days first{std::chrono::year{year} /
                                    std::chrono::month{unsigned(month)} /
                                    std::chrono::day{unsigned(first_day)}};
  const std::chrono::weekday wd{first + std::chrono::days{step / 24}};
  return int(wd.iso_encoding()) - 1;
}

Tariff tariff_from_json(const nlohmann::json& doc) {
  try {
    Tariff t;
    t.name = doc.value("name", std::string());
    t.fixed_charge = doc.value("fixed_charge", 0.0);
    for (const auto& e : doc.at("energy_charges")) {
      t.energy_charges.push_back(
          {e.at("rate").get<double>(), read_applicability(e)});
    }
    if (doc.contains("demand_charges")) {
      for (const auto& d : doc.at("demand_charges")) {
        t.demand_charges.push_back(
            {d.at("rate").get<double>(), read_applicability(d)});
      }
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("tariff JSON: ") + e.what());
  }
}

Tariff parse_tariff(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("tariff JSON: ") + e.what());
  }
  return tariff_from_json(doc);
}

Tariff parse_tariff_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tariff file " + path);
  return parse_tariff(in);
}

nlohmann::json to_json(const Tariff& tariff) {
  nlohmann::json doc;
  doc["name"] = tariff.name;
  doc["fixed_charge"] = tariff.fixed_charge;
  doc["energy_charges"] = nlohmann::json::array();
  for (const auto& e : tariff.energy_charges) {
    nlohmann::json j;
    j["rate"] = e.rate;
    write_applicability(j, e.applies);
    doc["energy_charges"].push_back(j);
  }
  doc["demand_charges"] = nlohmann::json::array();
  for (const auto& d : tariff.demand_charges) {
    nlohmann::json j;
    j["rate"] = d.rate;
    write_applicability(j, d.window);
    doc["demand_charges"].push_back(j);
  }
  return doc;
}

Eigen::VectorXd marginal_energy_rates(const Tariff& tariff,
                                      const BillingPeriod& period) {
  const Eigen::Index n = period.hours();
  Eigen::VectorXd rates(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const int h = period.hour_at(t);
    const int w = period.weekday_at(t);
    const EnergyCharge* hit = nullptr;
    for (const auto& e : tariff.energy_charges) {
      if (!e.applies.contains(h, w, period.month)) continue;
      if (hit) throw InputError("overlapping energy periods");
      hit = &e;
    }
    if (!hit) throw InputError("uncovered hour in billing period");
    rates[t] = hit->rate;
  }
  return rates;
}

std::vector<DemandWindow> demand_windows(const Tariff& tariff,
                                         const BillingPeriod& period) {
  const Eigen::Index n = period.hours();
  std::vector<DemandWindow> out;
  for (const auto& d : tariff.demand_charges) {
    DemandWindow w;
    w.rate = d.rate;
    w.mask.resize(n);
    for (Eigen::Index t = 0; t < n; ++t) {
      w.mask[t] = d.window.contains(period.hour_at(t), period.weekday_at(t),
                                    period.month);
    }
    out.push_back(std::move(w));
  }
  return out;
}

BillBreakdown bill(const Tariff& tariff, const Eigen::VectorXd& power,
                   const BillingPeriod& period, double dt_hours) {
  if (power.size() != period.hours()) {
    throw InputError("schedule horizon " + std::to_string(power.size()) +
                     " does not match billing period of " +
                     std::to_string(period.hours()) + " hours");
  }
  if (dt_hours != 1.0) {
    throw InputError("tariff billing requires hourly resolution");
  }
  BillBreakdown b;
  b.energy_cost = marginal_energy_rates(tariff, period).dot(power) * dt_hours;
  for (const auto& w : demand_windows(tariff, period)) {
    const double peak =
        w.mask.any() ? w.mask.select(power.array(), 0.0).maxCoeff() : 0.0;
    b.demand_costs.push_back(w.rate * std::max(peak, 0.0));
  }
  b.fixed_cost = tariff.fixed_charge;
  b.total = b.energy_cost + b.fixed_cost;
  for (double d : b.demand_costs) b.total += d;
  return b;
}

BillBreakdown bill(const Tariff& tariff, const Schedule& schedule,
                   const BillingPeriod& period) {
  return bill(tariff, schedule.power, period, schedule.dt_hours);
}

nlohmann::json to_json(const BillBreakdown& b) {
  return {{"energy_cost", b.energy_cost},
          {"demand_costs", b.demand_costs},
          {"fixed_cost", b.fixed_cost},
          {"total", b.total}};
}

}  // namespace flexbound
