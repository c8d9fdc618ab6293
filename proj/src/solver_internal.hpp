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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "flexbound/flexmodel.hpp"
#include "flexbound/solver.hpp"

namespace flexbound::detail {

struct Bounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Sum of baseline over rte: the energy target in MW-steps.
inline double energy_steps(const FlexSpec& spec) {
  return spec.baseline.sum() / spec.rte;
}

bool flat_baseline(const FlexSpec& spec);

// Power bounds are identical across on-steps for the average reference and
// for a flat baseline.
inline bool uniform_bounds(const FlexSpec& spec) {
  return spec.pc_reference == PcReference::kAverage || flat_baseline(spec);
}

// Per-step bounds shared by all on-steps when exactly k steps are on, or
// nullopt when k steps cannot carry the energy target.
std::optional<Bounds> bounds_for(const FlexSpec& spec, int k);

inline bool ec_active(const FlexSpec& spec) {
  return spec.ec_cap.has_value() && *spec.ec_cap < 1.0;
}

// Step indices ordered by (coefficient, tie_break, index).
std::vector<Eigen::Index> sorted_order(const Eigen::VectorXd& coeffs,
                                       const Eigen::VectorXd& tie_break);

void check_inputs(const Objective& objective, const FlexSpec& spec);

SolveResult finish(const Objective& objective, Schedule schedule,
                   Diagnostics diagnostics);

bool better(double candidate, double incumbent);

// Items sorted by cost; selects exactly k and fills `energy` within per-item
// bounds. Exact depth-first branch and bound with a Lagrangian bound on the
// energy constraint.
struct BnbItem {
  double cost = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
struct BnbOutcome {
  bool feasible = false;
  std::vector<double> power;  // per item, zero when off
  std::vector<bool> on;
  double value = 0.0;
  std::size_t nodes = 0;
};
BnbOutcome select_and_fill(std::span<const BnbItem> items, int k,
                           double energy, std::size_t node_limit);

// Greedy fill of `residual` over items in the given order, each able to
// take up to `width` above its lower bound. Returns per-item fill.
std::vector<double> greedy_fill(std::size_t count, double width,
                                double residual);

// Same, but keeps sum_i max(0, base - lo - fill_i) <= budget by trading
// cheap high fill for fill below the baseline. Items sorted by cost.
std::optional<std::vector<double>> fill_with_deficit_budget(
    std::span<const double> cost, double lo, double hi, double base,
    double residual, double budget);

}  // namespace flexbound::detail
