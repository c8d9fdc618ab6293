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
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "dense_lp.hpp"
#include "flexbound/error.hpp"
#include "flexbound/solver.hpp"
#include "solver_internal.hpp"

namespace flexbound {
namespace {

constexpr Eigen::Index kMaxBruteForceSteps = 16;

struct StepBounds {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

// Per-step power bounds for the on-steps in `on`, zero elsewhere.
std::optional<StepBounds> step_bounds(const FlexSpec& spec,
                                      const std::vector<Eigen::Index>& on) {
  const Eigen::Index n = spec.horizon();
  StepBounds b{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  const double pc = spec.power_capacity;
  const double energy = detail::energy_steps(spec);
  for (Eigen::Index t : on) {
    const double ref = spec.pc_reference == PcReference::kAverage
                           ? energy / double(on.size())
                           : spec.baseline[t];
    b.lo[t] = (1.0 - pc) * ref;
    b.hi[t] = (1.0 + pc) * ref;
  }
  const double slack = 1e-12 * std::max(1.0, energy);
  if (b.lo.sum() > energy + slack || b.hi.sum() < energy - slack) {
    return std::nullopt;
  }
  return b;
}

std::optional<Eigen::VectorXd> greedy_inner(const Eigen::VectorXd& c,
                                            const std::vector<Eigen::Index>& on,
                                            const StepBounds& b,
                                            double energy) {
  std::vector<Eigen::Index> order = on;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return c[x] < c[y]; });
  Eigen::VectorXd p = b.lo;
  double residual = energy - b.lo.sum();
  for (Eigen::Index t : order) {
    if (residual <= 0.0) break;
    const double add = std::min(b.hi[t] - b.lo[t], residual);
    p[t] += add;
    residual -= add;
  }
  return p;
}

// Variables: p over on-steps, then one peak per demand window, then one
// deficit per step when the energy cap binds.
std::optional<Eigen::VectorXd> lp_inner(const Objective& objective,
                                        const FlexSpec& spec,
                                        const std::vector<Eigen::Index>& on,
                                        const StepBounds& b) {
  const Eigen::Index n = spec.horizon();
  const Eigen::Index m = Eigen::Index(on.size());
  const bool ec = detail::ec_active(spec);
  const Eigen::Index windows = Eigen::Index(objective.demand.size());
  const Eigen::Index nd = ec ? n : 0;
  const Eigen::Index nv = m + windows + nd;
  const double dt = spec.dt_hours;
  const Eigen::VectorXd c = objective.effective_coefficients(n);

  detail::LinearProgram lp;
  lp.cost = Eigen::VectorXd::Zero(nv);
  lp.lower = Eigen::VectorXd::Zero(nv);
  lp.upper = Eigen::VectorXd::Constant(nv, std::numeric_limits<double>::infinity());
  for (Eigen::Index i = 0; i < m; ++i) {
    lp.cost[i] = c[on[std::size_t(i)]] * dt;
    lp.lower[i] = b.lo[on[std::size_t(i)]];
    lp.upper[i] = b.hi[on[std::size_t(i)]];
  }
  for (Eigen::Index j = 0; j < windows; ++j) {
    lp.cost[m + j] = objective.cost_weight * objective.demand[std::size_t(j)].rate;
  }
  lp.a_eq = Eigen::MatrixXd::Zero(1, nv);
  lp.a_eq.row(0).head(m).setOnes();
  lp.b_eq = Eigen::VectorXd::Constant(1, detail::energy_steps(spec));

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index j = 0; j < windows; ++j) {
    const auto& mask = objective.demand[std::size_t(j)].mask;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!mask[on[std::size_t(i)]]) continue;
      Eigen::VectorXd r = Eigen::VectorXd::Zero(nv);
      r[i] = 1.0;
      r[m + j] = -1.0;
      rows.push_back(r);
      rhs.push_back(0.0);
    }
  }
  if (ec) {
    // d_t >= b_t - p_t on on-steps; off steps contribute b_t outright.
    double off_deficit = 0.0;
    std::vector<bool> is_on(std::size_t(n), false);
    for (Eigen::Index t : on) is_on[std::size_t(t)] = true;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!is_on[std::size_t(t)]) off_deficit += spec.baseline[t];
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(nv);
      r[i] = -1.0;
      r[m + windows + on[std::size_t(i)]] = -1.0;
      rows.push_back(r);
      rhs.push_back(-spec.baseline[on[std::size_t(i)]]);
    }
    Eigen::VectorXd r = Eigen::VectorXd::Zero(nv);
    r.tail(nd).setOnes();
    rows.push_back(r);
    rhs.push_back(*spec.ec_cap * spec.baseline.sum() - off_deficit);
  }
  lp.a_le = Eigen::MatrixXd::Zero(Eigen::Index(rows.size()), nv);
  lp.b_le = Eigen::VectorXd::Zero(Eigen::Index(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    lp.a_le.row(Eigen::Index(r)) = rows[r].transpose();
    lp.b_le[Eigen::Index(r)] = rhs[r];
  }
  const auto sol = detail::solve_lp(lp);
  if (!sol.feasible) return std::nullopt;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < m; ++i) {
    p[on[std::size_t(i)]] = std::clamp(sol.x[i], b.lo[on[std::size_t(i)]],
                                       b.hi[on[std::size_t(i)]]);
  }
  return p;
}

}  // namespace

SolveResult brute_force(const Objective& objective, const FlexSpec& spec) {
  detail::check_inputs(objective, spec);
  const Eigen::Index n = spec.horizon();
  if (n > kMaxBruteForceSteps) {
    throw InputError("brute_force is limited to " +
                     std::to_string(kMaxBruteForceSteps) + " steps");
  }
  const auto ks = spec.admissible_on_counts();
  const double energy = detail::energy_steps(spec);
  const bool use_lp = objective.has_demand() || detail::ec_active(spec);
  const Eigen::VectorXd c = objective.effective_coefficients(n);

  std::optional<Schedule> best;
  double best_value = std::numeric_limits<double>::infinity();
  Diagnostics diag;
  diag.mode = "brute_force";
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
    const int k = std::popcount(mask);
    if (!std::binary_search(ks.begin(), ks.end(), k)) continue;
    std::vector<Eigen::Index> on;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (mask & (std::uint32_t{1} << t)) on.push_back(t);
    }
    const auto b = step_bounds(spec, on);
    if (!b) continue;
    ++diag.nodes;
    const auto p = use_lp ? lp_inner(objective, spec, on, *b)
                          : greedy_inner(c, on, *b, energy);
    if (!p) continue;
    Schedule s;
    s.dt_hours = spec.dt_hours;
    s.power = *p;
    s.status = StatusVector::Zero(n);
    for (Eigen::Index t : on) s.status[t] = true;
    const double v = objective.value(s.power, s.dt_hours);
    if (detail::better(v, best_value)) {
      best_value = v;
      best = std::move(s);
    }
  }
  if (!best) {
    throw InfeasibleError("no schedule satisfies the flexibility envelope");
  }
  return detail::finish(objective, std::move(*best), diag);
}

}  // namespace flexbound
