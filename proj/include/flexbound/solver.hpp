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

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flexbound/flexmodel.hpp"
#include "flexbound/tariff.hpp"
#include "json.hpp"

namespace flexbound {

// cost_weight * (energy_price . p dt + sum_j rate_j max_{W_j} p + fixed)
//   + emissions_weight * (emissions . p dt)
//
// Vectors are per timestep in $/MWh and kgCO2/MWh. Either may be empty.
// `tie_break` is an optional secondary key used only to order steps whose
// effective coefficients are equal; the final tie-break is the step index.
struct Objective {
  enum class Kind { kLinear, kTariff, kWeighted };

  Eigen::VectorXd energy_price;
  std::vector<DemandWindow> demand;
  double fixed = 0.0;
  Eigen::VectorXd emissions;
  double cost_weight = 1.0;
  double emissions_weight = 0.0;
  Eigen::VectorXd tie_break;

  static Objective linear(Eigen::VectorXd coeffs);
  static Objective weighted(Eigen::VectorXd price, Eigen::VectorXd emissions,
                            double lambda);
  static Objective from_tariff(const Tariff& tariff,
                               const BillingPeriod& period);
  // Pure-emissions objective; ties are broken by the cost side.
  Objective emissions_endpoint() const;
  Objective with_emissions(Eigen::VectorXd emissions, double lambda) const;

  Kind kind() const;
  bool has_demand() const;
  Eigen::Index horizon() const;

  // Per-step coefficient of p_t * dt in the minimized objective.
  Eigen::VectorXd effective_coefficients(Eigen::Index steps) const;

  double value(const Eigen::VectorXd& power, double dt) const;
  double cost(const Eigen::VectorXd& power, double dt) const;
  double emissions_total(const Eigen::VectorXd& power, double dt) const;
};

struct Diagnostics {
  std::string mode;
  int iterations = 0;
  double max_violation = 0.0;
  int on_count = 0;
  std::size_t nodes = 0;
};

struct SolveResult {
  Schedule schedule;
  double objective_value = 0.0;
  double cost = 0.0;
  double emissions = 0.0;
  Diagnostics diagnostics;
};

// Exact optimum of a linear objective with exactly k on-steps.
SolveResult solve_fixed_k(const Objective& objective, const FlexSpec& spec,
                          int k);

// Exact optimum over every on-count the uptime mode admits.
SolveResult solve_min_uptime(const Objective& objective, const FlexSpec& spec);

struct LagrangianOptions {
  double step = 1.0;
  double tolerance = 1e-8;
  int max_iterations = 10000;
  double backoff = 0.5;
};

// Penalizes power-capacity violations with a scalar multiplier that grows in
// proportion to the worst violation until the relaxed optimum is feasible.
SolveResult solve_lagrangian(const Objective& objective, const FlexSpec& spec,
                             const LagrangianOptions& options = {});

// Exact optimum for objectives with up to three peak-priced windows.
SolveResult solve_peak_priced(const Objective& objective, const FlexSpec& spec);

SolveResult solve_tariff(const Tariff& tariff, const FlexSpec& spec,
                         const BillingPeriod& period,
                         const Eigen::VectorXd& emissions = {},
                         double lambda = 0.0);

// Enumerates all 2^T status vectors. T <= 16.
SolveResult brute_force(const Objective& objective, const FlexSpec& spec);

// Dispatches on the objective kind and uptime mode.
SolveResult solve(const Objective& objective, const FlexSpec& spec);

nlohmann::json to_json(const SolveResult& result);

}  // namespace flexbound
