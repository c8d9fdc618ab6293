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
#include <limits>

#include "flexbound/error.hpp"
#include "flexbound/solver.hpp"
#include "solver_internal.hpp"

namespace flexbound {
namespace {

struct Relaxed {
  Schedule schedule;
  double value = std::numeric_limits<double>::infinity();
  int k = 0;
};

// Relaxed problem for one on-count: each on-step pays mu per MW outside
// [lo, hi], so its cost is piecewise linear with slopes c - mu, c, c + mu.
// The penalty shape is the same for every step, so the k cheapest steps are
// on and the energy fills segments in key order.
Relaxed relaxed_for_k(const std::vector<Eigen::Index>& order,
                      const Eigen::VectorXd& coeffs, Eigen::Index steps,
                      double energy, double pc, double mu, int k) {
  const double avg = energy / k;
  const double lo = (1.0 - pc) * avg;
  const double width = 2.0 * pc * avg;
  std::vector<double> p(std::size_t(k), 0.0);
  std::size_t ia = 0, ib = 0, ic = 0;
  const std::size_t n = std::size_t(k);
  auto cost = [&](std::size_t i) { return coeffs[order[i]]; };
  double residual = energy;
  while (residual > 0.0) {
    const double inf = std::numeric_limits<double>::infinity();
    const double ka = ia < n ? cost(ia) - mu : inf;
    // A step's middle segment follows its lower one, its upper the middle.
    const double kb = ib < ia ? cost(ib) : inf;
    const double kc = ic < ib ? cost(ic) + mu : inf;
    if (ka <= kb && ka <= kc && ia < n) {
      const double add = std::min(lo, residual);
      p[ia] += add;
      residual -= add;
      ++ia;
    } else if (kb <= kc && ib < ia) {
      const double add = std::min(width, residual);
      p[ib] += add;
      residual -= add;
      ++ib;
    } else if (ic < ib) {
      p[ic] += residual;
      residual = 0.0;
      ++ic;
    } else {
      break;
    }
  }
  Relaxed r;
  r.k = k;
  r.schedule.status = StatusVector::Constant(steps, false);
  r.schedule.power = Eigen::VectorXd::Zero(steps);
  r.value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index t = order[i];
    r.schedule.status[t] = true;
    r.schedule.power[t] = p[i];
    const double over = std::max(0.0, p[i] - (lo + width));
    const double under = std::max(0.0, lo - p[i]);
    r.value += coeffs[t] * p[i] + mu * (over + under);
  }
  return r;
}

double max_violation(const Schedule& s, double energy, double pc) {
  const int k = s.on_count();
  const double avg = energy / k;
  double worst = 0.0;
  for (Eigen::Index t = 0; t < s.horizon(); ++t) {
    if (!s.status[t]) continue;
    worst = std::max(worst, std::abs(1.0 - s.power[t] / avg) - pc);
  }
  return std::max(0.0, worst);
}

}  // namespace

SolveResult solve_lagrangian(const Objective& objective, const FlexSpec& spec,
                             const LagrangianOptions& options) {
  detail::check_inputs(objective, spec);
  if (objective.has_demand()) {
    throw InputError("solve_lagrangian needs a linear objective");
  }
  if (spec.pc_reference != PcReference::kAverage) {
    throw UnsupportedError(
        "the Lagrangian mode relaxes the average-referenced power band only");
  }
  if (detail::ec_active(spec)) {
    throw UnsupportedError(
        "an energy-capacity cap is not supported in the Lagrangian mode");
  }
  if (!(options.step > 0.0) || !(options.backoff > 0.0 && options.backoff < 1.0)) {
    throw InputError("Lagrangian step must be > 0 and backoff in (0, 1)");
  }

  const Eigen::Index steps = spec.horizon();
  const Eigen::VectorXd c = objective.effective_coefficients(steps);
  const auto order = detail::sorted_order(c, objective.tie_break);
  const double energy = detail::energy_steps(spec);
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  const auto ks = spec.admissible_on_counts();

  double mu = 0.0;
  double step = options.step;
  Eigen::VectorXd prev, prev2;
  double violation = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    Relaxed best;
    for (int k : ks) {
      Relaxed r = relaxed_for_k(order, c, steps, energy,
                                spec.power_capacity, mu, k);
      if (r.value < best.value) best = std::move(r);
    }
    best.schedule.dt_hours = spec.dt_hours;
    violation = max_violation(best.schedule, energy, spec.power_capacity);
    if (violation < options.tolerance) {
      Diagnostics diag;
      diag.mode = "lagrangian";
      diag.iterations = iter;
      diag.max_violation = violation;
      return detail::finish(objective, std::move(best.schedule), diag);
    }
    // A-B-A pattern in the relaxed schedules counts as oscillation.
    if (prev2.size() == steps && best.schedule.power == prev2 &&
        best.schedule.power != prev) {
      step *= options.backoff;
    }
    prev2 = std::move(prev);
    prev = best.schedule.power;
    mu += step * violation * scale;
  }
  throw ConvergenceError("Lagrangian iterations hit the cap of " +
                         std::to_string(options.max_iterations) +
                         " with max violation " + std::to_string(violation));
}

}  // namespace flexbound
