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
namespace detail {
namespace {

struct SegmentFill {
  std::vector<double> low;
  std::vector<double> high;
  double deficit = 0.0;
};

// Lagrangian greedy with multiplier `mu` on the deficit budget: the part of
// each item below the baseline costs c - mu, the rest costs c.
SegmentFill segment_greedy(std::span<const double> cost, double low_width,
                           double high_width, double base_gap, double residual,
                           double mu, bool low_first) {
  const std::size_t n = cost.size();
  SegmentFill f{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0.0};
  std::size_t i = 0;  // next low segment
  std::size_t j = 0;  // next high segment
  while (residual > 0.0 && (i < n || j < n)) {
    bool take_low;
    if (i >= n) {
      take_low = false;
    } else if (j >= n || j >= i) {
      // An item's high segment never precedes its own low segment.
      take_low = true;
    } else {
      const double kl = cost[i] - mu;
      const double kh = cost[j];
      take_low = kl < kh || (kl == kh && low_first);
    }
    if (take_low) {
      f.low[i] = std::min(low_width, residual);
      residual -= f.low[i];
      ++i;
    } else {
      f.high[j] = std::min(high_width, residual);
      residual -= f.high[j];
      ++j;
    }
  }
  double filled_low = 0.0;
  for (double x : f.low) filled_low += x;
  f.deficit = double(n) * base_gap - filled_low;
  return f;
}

}  // namespace

std::optional<std::vector<double>> fill_with_deficit_budget(
    std::span<const double> cost, double lo, double hi, double base,
    double residual, double budget) {
  const std::size_t n = cost.size();
  const double width = hi - lo;
  const double base_gap = std::max(0.0, base - lo);
  const double low_width = std::clamp(base - lo, 0.0, width);
  const double high_width = width - low_width;
  const double slack = 1e-12 * std::max(1.0, base * double(n));

  auto combine = [&](const SegmentFill& f) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f.low[i] + f.high[i];
    return out;
  };

  const SegmentFill plain =
      segment_greedy(cost, low_width, high_width, base_gap, residual, 0.0, true);
  if (plain.deficit <= budget + slack) return combine(plain);

  const double cmin = *std::min_element(cost.begin(), cost.end());
  const double cmax = *std::max_element(cost.begin(), cost.end());
  double mu_hi = (cmax - cmin) + 1.0;
  const SegmentFill tight = segment_greedy(cost, low_width, high_width,
                                           base_gap, residual, mu_hi, true);
  if (tight.deficit > budget + slack) return std::nullopt;

  double mu_lo = 0.0;
  for (int it = 0; it < 200 && mu_hi - mu_lo > 1e-15 * std::max(1.0, mu_hi);
       ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    const SegmentFill f = segment_greedy(cost, low_width, high_width, base_gap,
                                         residual, mid, true);
    (f.deficit <= budget ? mu_hi : mu_lo) = mid;
  }
  const SegmentFill a = segment_greedy(cost, low_width, high_width, base_gap,
                                       residual, mu_lo, true);
  const SegmentFill b = segment_greedy(cost, low_width, high_width, base_gap,
                                       residual, mu_hi, true);
  if (a.deficit <= budget) return combine(a);
  const double theta =
      std::clamp((a.deficit - budget) / (a.deficit - b.deficit), 0.0, 1.0);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (1.0 - theta) * (a.low[i] + a.high[i]) +
             theta * (b.low[i] + b.high[i]);
  }
  return out;
}

namespace {

// Exact fixed-k solve when every on-step shares the same bounds: the k
// cheapest steps are on; power starts at the lower bound and the remaining
// energy goes to the cheapest steps first.
std::optional<Schedule> fixed_k_uniform(const FlexSpec& spec,
                                        std::span<const Eigen::Index> order,
                                        const Eigen::VectorXd& coeffs, int k) {
  const auto bounds = bounds_for(spec, k);
  if (!bounds) return std::nullopt;
  const Eigen::Index steps = spec.horizon();
  const double energy = energy_steps(spec);
  const double residual = energy - k * bounds->lo;

  std::vector<double> fill;
  if (ec_active(spec)) {
    if (!flat_baseline(spec)) {
      throw UnsupportedError(
          "an energy-capacity cap requires a flat baseline");
    }
    const double base = spec.baseline[0];
    const double budget =
        *spec.ec_cap * double(steps) * base - double(steps - k) * base;
    if (budget < -1e-12 * double(steps) * base) return std::nullopt;
    std::vector<double> cost(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cost[std::size_t(i)] = coeffs[order[std::size_t(i)]];
    auto f = fill_with_deficit_budget(cost, bounds->lo, bounds->hi, base,
                                      residual, std::max(0.0, budget));
    if (!f) return std::nullopt;
    fill = std::move(*f);
  } else {
    fill = greedy_fill(std::size_t(k), bounds->hi - bounds->lo, residual);
  }

  Schedule s;
  s.dt_hours = spec.dt_hours;
  s.status = StatusVector::Constant(steps, false);
  s.power = Eigen::VectorXd::Zero(steps);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index t = order[std::size_t(i)];
    s.status[t] = true;
    s.power[t] = bounds->lo + fill[std::size_t(i)];
  }
  return s;
}

constexpr std::size_t kNodeLimit = 2'000'000;

// Baseline reference with a non-flat baseline: bounds differ per step, so
// selection is a small MILP.
std::optional<Schedule> fixed_k_heterogeneous(const FlexSpec& spec,
                                              std::span<const Eigen::Index> order,
                                              const Eigen::VectorXd& coeffs,
                                              int k, std::size_t* nodes) {
  if (ec_active(spec)) {
    throw UnsupportedError(
        "an energy-capacity cap requires a flat baseline");
  }
  const double pc = spec.power_capacity;
  std::vector<BnbItem> items;
  items.reserve(order.size());
  for (Eigen::Index t : order) {
    const double b = spec.baseline[t];
    items.push_back({coeffs[t], (1.0 - pc) * b, (1.0 + pc) * b});
  }
  const BnbOutcome out =
      select_and_fill(items, k, energy_steps(spec), kNodeLimit);
  if (nodes) *nodes += out.nodes;
  if (!out.feasible) return std::nullopt;
  Schedule s;
  s.dt_hours = spec.dt_hours;
  s.status = StatusVector::Constant(spec.horizon(), false);
  s.power = Eigen::VectorXd::Zero(spec.horizon());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!out.on[i]) continue;
    s.status[order[i]] = true;
    s.power[order[i]] = out.power[i];
  }
  return s;
}

std::optional<Schedule> fixed_k(const FlexSpec& spec,
                                std::span<const Eigen::Index> order,
                                const Eigen::VectorXd& coeffs, int k,
                                std::size_t* nodes) {
  if (uniform_bounds(spec)) return fixed_k_uniform(spec, order, coeffs, k);
  return fixed_k_heterogeneous(spec, order, coeffs, k, nodes);
}

void require_linear(const Objective& objective, const char* who) {
  if (objective.has_demand()) {
    throw InputError(std::string(who) +
                     " needs a linear objective; use solve_peak_priced for "
                     "demand charges");
  }
}

}  // namespace
}  // namespace detail

SolveResult solve_fixed_k(const Objective& objective, const FlexSpec& spec,
                          int k) {
  detail::check_inputs(objective, spec);
  detail::require_linear(objective, "solve_fixed_k");
  if (k < 1 || k > spec.horizon()) {
    throw InputError("on-count k must be in 1.." +
                     std::to_string(spec.horizon()));
  }
  const Eigen::VectorXd c = objective.effective_coefficients(spec.horizon());
  const auto order = detail::sorted_order(c, objective.tie_break);
  Diagnostics diag;
  diag.mode = detail::uniform_bounds(spec) ? "fixed_k" : "fixed_k_bnb";
  auto s = detail::fixed_k(spec, order, c, k, &diag.nodes);
  if (!s) {
    throw InfeasibleError("no schedule with " + std::to_string(k) +
                          " on-steps satisfies the flexibility envelope");
  }
  return detail::finish(objective, std::move(*s), diag);
}

SolveResult solve_min_uptime(const Objective& objective, const FlexSpec& spec) {
  detail::check_inputs(objective, spec);
  detail::require_linear(objective, "solve_min_uptime");
  if (spec.uptime_mode == UptimeMode::kExact) {
    throw InputError("solve_min_uptime needs uptime mode minimum or free");
  }
  const Eigen::VectorXd c = objective.effective_coefficients(spec.horizon());
  const auto order = detail::sorted_order(c, objective.tie_break);
  Diagnostics diag;
  diag.mode = detail::uniform_bounds(spec) ? "min_uptime" : "min_uptime_bnb";

  std::optional<Schedule> best;
  double best_value = std::numeric_limits<double>::infinity();
  for (int k : spec.admissible_on_counts()) {
    auto s = detail::fixed_k(spec, order, c, k, &diag.nodes);
    ++diag.iterations;
    if (!s) continue;
    const double v = c.dot(s->power) * spec.dt_hours;
    if (detail::better(v, best_value)) {
      best_value = v;
      best = std::move(s);
    }
  }
  if (!best) {
    throw InfeasibleError("no admissible uptime satisfies the flexibility "
                          "envelope");
  }
  return detail::finish(objective, std::move(*best), diag);
}

}  // namespace flexbound
