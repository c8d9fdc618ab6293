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
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flexbound/flexmodel.hpp"
#include "flexbound/signals.hpp"
#include "flexbound/solver.hpp"
#include "json.hpp"

namespace flexbound {

constexpr double kKgPerTon = 1000.0;

// Percent improvement of `flexible` over `baseline`. Positive means the
// flexible schedule is cheaper (or cleaner). Empty when the baseline is
// within 1e-9 of zero.
std::optional<double> savings(double baseline, double flexible);

// Objective value of running the spec's baseline profile unchanged.
double baseline_value(const Objective& objective, const FlexSpec& spec);

// Worker threads for sweeps: FLEXBOUND_THREADS if set, else the hardware
// concurrency.
unsigned worker_count();

struct SurfaceMetadata {
  std::string incentive;
  std::string region;
  int month = 0;
  double rte = 1.0;
  std::optional<double> ec_cap;
};

struct SurfacePoint {
  double uptime = 0.0;
  double power_capacity = 0.0;
  // NaN where the point is infeasible or the baseline value is zero.
  double savings_pct = 0.0;
  double objective_value = 0.0;
  double realized_ec = 0.0;
  bool feasible = true;
};

struct SavingsSurface {
  Eigen::VectorXd u_grid;
  Eigen::VectorXd pc_grid;
  // Rows follow u_grid, columns pc_grid.
  Eigen::MatrixXd values;
  std::vector<SurfacePoint> points;  // u-major
  double baseline_value = 0.0;
  SurfaceMetadata metadata;
};

// One solve per grid point. Infeasible points are kept as NaN; any other
// solver error is rethrown with the grid coordinates attached.
SavingsSurface sweep_surface(const Objective& objective, const FlexSpec& spec,
                             const Eigen::VectorXd& u_grid,
                             const Eigen::VectorXd& pc_grid,
                             SurfaceMetadata metadata = {});

struct ParetoPoint {
  double lambda = 0.0;  // +inf marks the pure-emissions solve
  double cost = 0.0;
  double emissions = 0.0;
  Schedule schedule;
};

struct ParetoFront {
  // Emissions descending, cost ascending, non-dominated.
  std::vector<ParetoPoint> points;
  ParetoPoint cost_optimal;
  ParetoPoint emissions_optimal;
};

// {0}, 25 log-spaced weights in [1e-3, 1e3]. The pure-emissions endpoint is
// always added by pareto_front.
std::vector<double> default_lambdas();

ParetoFront pareto_front(const Objective& cost_objective,
                         const Eigen::VectorXd& emissions,
                         const FlexSpec& spec,
                         const std::vector<double>& lambdas = default_lambdas());

struct AbatementResult {
  double fraction = 1.0;
  double cost_per_ton = 0.0;
  double fraction_abated = 1.0;
  std::size_t anchor = 0;  // first front index at or past the target
  double cost = 0.0;
  double emissions = 0.0;
  bool degenerate = false;  // no emissions spread on the front
};

AbatementResult abatement_cost(const ParetoFront& front, double fraction);

struct RecEquivalent {
  Eigen::Matrix<double, 24, 1> cost_per_ton;  // NaN where undefined
  std::array<bool, 24> undefined{};
};

RecEquivalent rec_equivalent(double rec_price, const HourlyProfile& emissions);

struct RteThreshold {
  double rte = 1.0;
  bool viable = false;
  double savings_at_unity = 0.0;
};

RteThreshold min_viable_rte(const Objective& objective, const FlexSpec& spec,
                            double tolerance = 1e-4);

struct Benchmarks {
  double scc = 140.0;      // $/ton
  double rec_low = 1.0;    // $/MWh
  double rec_high = 20.0;  // $/MWh
  void validate() const;
};

nlohmann::json to_json(const SavingsSurface& surface);
nlohmann::json to_json(const ParetoFront& front);
nlohmann::json to_json(const AbatementResult& result);
nlohmann::json to_json(const Benchmarks& benchmarks);
nlohmann::json to_json(const RteThreshold& threshold);

void write_csv(std::ostream& out, const SavingsSurface& surface);
void write_csv(std::ostream& out, const ParetoFront& front);
void write_csv(std::ostream& out, const std::vector<AbatementResult>& table,
               const Benchmarks& benchmarks);

}  // namespace flexbound
