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
#include <random>

#include <gtest/gtest.h>

#include "flexbound/error.hpp"
#include "flexbound/solver.hpp"

namespace flexbound {
namespace {

struct Instance {
  Objective objective;
  FlexSpec spec;
};

Instance random_linear(std::mt19937_64& rng, int max_steps) {
  std::uniform_int_distribution<int> steps(1, max_steps);
  std::uniform_real_distribution<double> coeff(-50.0, 150.0);
  const double pcs[] = {0.0, 0.25, 0.5, 1.0};
  const double rtes[] = {0.65, 0.85, 1.0};
  const int n = steps(rng);
  Instance in;
  in.spec = FlexSpec::flat(n);
  in.spec.power_capacity = pcs[rng() % 4];
  in.spec.rte = rtes[rng() % 3];
  in.spec.uptime_mode = rng() % 2 ? UptimeMode::kExact : UptimeMode::kMinimum;
  in.spec.uptime = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  Eigen::VectorXd c(n);
  for (auto& x : c) x = coeff(rng);
  in.objective = Objective::linear(c);
  return in;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

void expect_match(const Instance& in, const SolveResult& r,
                  const SolveResult& oracle, int trial) {
  EXPECT_LE(rel_gap(r.objective_value, oracle.objective_value), 1e-9)
      << "trial " << trial << ": " << r.objective_value << " vs "
      << oracle.objective_value;
  const auto rep = feasible(r.schedule, in.spec);
  EXPECT_TRUE(rep.feasible) << "trial " << trial << " violation "
                            << rep.max_violation();
}

TEST(Oracle, LinearAverageReference) {
  std::mt19937_64 rng(20230701);
  for (int trial = 0; trial < 1000; ++trial) {
    const Instance in = random_linear(rng, 10);
    expect_match(in, solve(in.objective, in.spec),
                 brute_force(in.objective, in.spec), trial);
  }
}

TEST(Oracle, LinearBaselineReference) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> base(0.2, 3.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Instance in = random_linear(rng, 8);
    in.spec.pc_reference = PcReference::kBaseline;
    in.spec.rte = 1.0;
    if (trial % 2) {
      for (auto& b : in.spec.baseline) b = base(rng);
    }
    SolveResult oracle;
    try {
      oracle = brute_force(in.objective, in.spec);
    } catch (const InfeasibleError&) {
      EXPECT_THROW(solve(in.objective, in.spec), InfeasibleError) << trial;
      continue;
    }
    expect_match(in, solve(in.objective, in.spec), oracle, trial);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Oracle, EnergyCap) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> cap(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Instance in = random_linear(rng, 8);
    in.spec.ec_cap = cap(rng);
    SolveResult oracle;
    try {
      oracle = brute_force(in.objective, in.spec);
    } catch (const InfeasibleError&) {
      EXPECT_THROW(solve(in.objective, in.spec), InfeasibleError) << trial;
      continue;
    }
    expect_match(in, solve(in.objective, in.spec), oracle, trial);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Oracle, DemandCharges) {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> rate(0.0, 40.0);
  for (int trial = 0; trial < 300; ++trial) {
    Instance in = random_linear(rng, 8);
    const Eigen::Index n = in.spec.horizon();
    const int windows = 1 + int(rng() % 3);
    for (int j = 0; j < windows; ++j) {
      StatusVector mask(n);
      for (auto& m : mask) m = j == 0 || rng() % 2;
      in.objective.demand.push_back({rate(rng), mask});
    }
    if (trial % 3 == 0) {
      in.objective.emissions = Eigen::VectorXd::Random(n).cwiseAbs() * 500;
      in.objective.emissions_weight = 0.01;
    }
    expect_match(in, solve(in.objective, in.spec),
                 brute_force(in.objective, in.spec), trial);
  }
}

TEST(Oracle, LagrangianAgreesWhenConverged) {
  std::mt19937_64 rng(4242);
  int converged = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Instance in = random_linear(rng, 8);
    in.spec.uptime_mode = UptimeMode::kFree;
    const auto exact = solve_min_uptime(in.objective, in.spec);
    try {
      const auto r = solve_lagrangian(in.objective, in.spec);
      EXPECT_LT(r.diagnostics.max_violation, 1e-8) << trial;
      EXPECT_LE(rel_gap(r.objective_value, exact.objective_value), 1e-6)
          << trial;
      ++converged;
    } catch (const ConvergenceError&) {
    }
  }
  EXPECT_GT(converged, 150);
}

TEST(Properties, ScalingAndShift) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Instance in = random_linear(rng, 10);
    const double base = solve(in.objective, in.spec).objective_value;
    const auto scaled =
        Objective::linear(Eigen::VectorXd(3.5 * in.objective.energy_price));
    EXPECT_LE(rel_gap(solve(scaled, in.spec).objective_value, 3.5 * base), 1e-9);
    const double energy = in.spec.baseline.sum() / in.spec.rte;
    const auto shifted = Objective::linear(
        (in.objective.energy_price.array() + 12.0).matrix());
    EXPECT_LE(rel_gap(solve(shifted, in.spec).objective_value,
                      base + 12.0 * energy),
              1e-9);
  }
}

TEST(Properties, MonotoneInPowerCapacityAndKSet) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    Instance in = random_linear(rng, 10);
    in.spec.uptime_mode = UptimeMode::kMinimum;
    double prev = INFINITY;
    for (double pc : {0.0, 0.25, 0.5, 1.0}) {
      in.spec.power_capacity = pc;
      const double v = solve(in.objective, in.spec).objective_value;
      EXPECT_LE(v, prev + 1e-9 * std::max(1.0, std::abs(prev)));
      prev = v;
    }
    FlexSpec free = in.spec;
    free.uptime_mode = UptimeMode::kFree;
    EXPECT_LE(solve(in.objective, free).objective_value, prev + 1e-9 * std::max(1.0, std::abs(prev)));
  }
}

TEST(Properties, EnergyIsConserved) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance in = random_linear(rng, 10);
    const auto r = solve(in.objective, in.spec);
    const double target = in.spec.baseline.sum() / in.spec.rte;
    EXPECT_LE(std::abs(r.schedule.power.sum() - target), 1e-9 * target);
  }
}

}  // namespace
}  // namespace flexbound
