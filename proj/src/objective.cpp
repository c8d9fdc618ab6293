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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flexbound/error.hpp"
#include "flexbound/solver.hpp"
#include "solver_internal.hpp"

namespace flexbound {

Objective Objective::linear(Eigen::VectorXd coeffs) {
  Objective o;
  o.energy_price = std::move(coeffs);
  return o;
}

Objective Objective::weighted(Eigen::VectorXd price, Eigen::VectorXd emissions,
                              double lambda) {
  Objective o;
  o.energy_price = std::move(price);
  o.emissions = std::move(emissions);
  o.emissions_weight = lambda;
  return o;
}

Objective Objective::from_tariff(const Tariff& tariff,
                                 const BillingPeriod& period) {
  Objective o;
  o.energy_price = marginal_energy_rates(tariff, period);
  o.demand = demand_windows(tariff, period);
  o.fixed = tariff.fixed_charge;
  return o;
}

Objective Objective::emissions_endpoint() const {
  if (emissions.size() == 0) {
    throw InputError("emissions endpoint needs an emissions vector");
  }
  Objective o = *this;
  o.cost_weight = 0.0;
  o.emissions_weight = 1.0;
  o.tie_break = energy_price;
  return o;
}

Objective Objective::with_emissions(Eigen::VectorXd e, double lambda) const {
  Objective o = *this;
  o.emissions = std::move(e);
  o.emissions_weight = lambda;
  return o;
}

bool Objective::has_demand() const {
  if (cost_weight == 0.0) return false;
  return std::any_of(demand.begin(), demand.end(), [](const DemandWindow& w) {
    return w.rate > 0.0 && w.mask.any();
  });
}

Objective::Kind Objective::kind() const {
  if (!demand.empty()) return Kind::kTariff;
  if (emissions_weight != 0.0 && emissions.size() > 0) return Kind::kWeighted;
  return Kind::kLinear;
}

Eigen::Index Objective::horizon() const {
  if (energy_price.size() > 0) return energy_price.size();
  if (emissions.size() > 0) return emissions.size();
  if (!demand.empty()) return demand.front().mask.size();
  return 0;
}

Eigen::VectorXd Objective::effective_coefficients(Eigen::Index steps) const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(steps);
  if (energy_price.size() > 0 && cost_weight != 0.0) {
    if (energy_price.size() != steps) {
      throw InputError("price vector length does not match horizon");
    }
    c += cost_weight * energy_price;
  }
  if (emissions.size() > 0 && emissions_weight != 0.0) {
    if (emissions.size() != steps) {
      throw InputError("emissions vector length does not match horizon");
    }
    c += emissions_weight * emissions;
  }
  return c;
}

namespace {

double demand_total(const std::vector<DemandWindow>& demand,
                    const Eigen::VectorXd& power) {
  double total = 0.0;
  for (const auto& w : demand) {
    if (w.mask.size() != power.size()) {
      throw InputError("demand window length does not match horizon");
    }
    if (!w.mask.any()) continue;
    total += w.rate * std::max(0.0, w.mask.select(power.array(), 0.0).maxCoeff());
  }
  return total;
}

}  // namespace

double Objective::value(const Eigen::VectorXd& power, double dt) const {
  double v = effective_coefficients(power.size()).dot(power) * dt;
  if (cost_weight != 0.0) {
    v += cost_weight * (demand_total(demand, power) + fixed);
  }
  return v;
}

double Objective::cost(const Eigen::VectorXd& power, double dt) const {
  double v = energy_price.size() > 0 ? energy_price.dot(power) * dt : 0.0;
  return v + demand_total(demand, power) + fixed;
}

double Objective::emissions_total(const Eigen::VectorXd& power,
                                  double dt) const {
  return emissions.size() > 0 ? emissions.dot(power) * dt : 0.0;
}

nlohmann::json to_json(const SolveResult& result) {
  nlohmann::json doc;
  doc["schedule"] = to_json(result.schedule);
  doc["objective_value"] = result.objective_value;
  doc["cost"] = result.cost;
  doc["emissions"] = result.emissions;
  doc["diagnostics"] = {{"mode", result.diagnostics.mode},
                        {"iterations", result.diagnostics.iterations},
                        {"max_violation", result.diagnostics.max_violation},
                        {"on_count", result.diagnostics.on_count},
                        {"nodes", result.diagnostics.nodes}};
  return doc;
}

SolveResult solve(const Objective& objective, const FlexSpec& spec) {
  if (objective.has_demand()) return solve_peak_priced(objective, spec);
  if (spec.uptime_mode == UptimeMode::kExact) {
    spec.validate();
    return solve_fixed_k(objective, spec, spec.admissible_on_counts().front());
  }
  return solve_min_uptime(objective, spec);
}

namespace detail {

bool flat_baseline(const FlexSpec& spec) {
  return spec.baseline.size() > 0 &&
         (spec.baseline.array() == spec.baseline[0]).all();
}

std::optional<Bounds> bounds_for(const FlexSpec& spec, int k) {
  const double energy = energy_steps(spec);
  const double pc = spec.power_capacity;
  Bounds b;
  if (spec.pc_reference == PcReference::kAverage) {
    const double avg = energy / k;
    b = {(1.0 - pc) * avg, (1.0 + pc) * avg};
    return b;
  }
  const double base = spec.baseline[0];
  b = {(1.0 - pc) * base, (1.0 + pc) * base};
  const double slack = 1e-12 * std::max(1.0, energy);
  if (k * b.lo > energy + slack || k * b.hi < energy - slack) {
    return std::nullopt;
  }
  return b;
}

std::vector<Eigen::Index> sorted_order(const Eigen::VectorXd& coeffs,
                                       const Eigen::VectorXd& tie_break) {
  std::vector<Eigen::Index> order(std::size_t(coeffs.size()));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  const bool use_tie = tie_break.size() == coeffs.size();
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (coeffs[a] != coeffs[b]) return coeffs[a] < coeffs[b];
                     if (use_tie && tie_break[a] != tie_break[b]) {
                       return tie_break[a] < tie_break[b];
                     }
                     return a < b;
                   });
  return order;
}

void check_inputs(const Objective& objective, const FlexSpec& spec) {
  spec.validate();
  const Eigen::Index steps = spec.horizon();
  if (objective.horizon() != steps) {
    throw InputError("objective horizon " +
                     std::to_string(objective.horizon()) +
                     " does not match baseline length " +
                     std::to_string(steps));
  }
  if (!objective.effective_coefficients(steps).allFinite()) {
    throw InputError("objective coefficients must be finite");
  }
  if (objective.emissions_weight < 0.0 || objective.cost_weight < 0.0) {
    throw InputError("objective weights must be non-negative");
  }
}

SolveResult finish(const Objective& objective, Schedule schedule,
                   Diagnostics diagnostics) {
  SolveResult r;
  r.objective_value = objective.value(schedule.power, schedule.dt_hours);
  r.cost = objective.cost(schedule.power, schedule.dt_hours);
  r.emissions = objective.emissions_total(schedule.power, schedule.dt_hours);
  diagnostics.on_count = schedule.on_count();
  r.schedule = std::move(schedule);
  r.diagnostics = std::move(diagnostics);
  return r;
}

bool better(double candidate, double incumbent) {
  // Near-ties keep the incumbent so rounding noise cannot pick the winner.
  if (!std::isfinite(incumbent)) return candidate < incumbent;
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

std::vector<double> greedy_fill(std::size_t count, double width,
                                double residual) {
  std::vector<double> fill(count, 0.0);
  for (std::size_t i = 0; i < count && residual > 0.0; ++i) {
    fill[i] = std::min(width, residual);
    residual -= fill[i];
  }
  // Rounding leftovers land on the last filled item.
  if (residual > 0.0 && count > 0) fill[count - 1] += residual;
  return fill;
}

}  // namespace detail
}  // namespace flexbound
