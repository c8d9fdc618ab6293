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

// Exact minimization of linear energy terms plus up to three windowed peak
// charges, for envelopes where every on-step shares the bounds [lo, hi].
//
// For a fixed on-set the problem is an LP in (p, P_1..P_n). At an optimal
// vertex every window peak P_j sits at one of: nothing on in the window, lo,
// hi, or a single shared interior level P* fixed by the energy balance. Each
// assignment of those four levels to the windows splits the steps into
//   X: capped at lo (in some window at lo),
//   Y: capped at P* (in some window at P*, none at lo),
//   Z: capped at hi,
// plus forbidden steps. With one interior level no step is fractional, so an
// optimum has i Y-steps at P*, m Z-steps at hi and the rest at lo; exchange
// arguments make each of those the cheapest available, which leaves a
// two-parameter scan per on-count. Without an interior level the Z-steps
// take a greedy fill.

#include <algorithm>
#include <cmath>
#include <limits>

#include "flexbound/error.hpp"
#include "flexbound/solver.hpp"
#include "solver_internal.hpp"

namespace flexbound {
namespace {

enum Level : int { kNone = 0, kLow = 1, kMid = 2, kHigh = 3 };

struct ClassList {
  std::vector<Eigen::Index> index;
  std::vector<double> cost;
  std::vector<double> prefix{0.0};

  void push(Eigen::Index t, double c) {
    index.push_back(t);
    cost.push_back(c);
    prefix.push_back(prefix.back() + c);
  }
  int size() const { return int(index.size()); }
};

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  int assignment = -1;
  int k = 0;
  bool mid = false;
  int x = 0;  // X-steps on (no interior level)
  int i = 0, m = 0, a = 0;
};

struct Classes {
  ClassList x, y, z;
};

Classes classify(const std::vector<Eigen::Index>& order,
                 const Eigen::VectorXd& coeffs,
                 const std::vector<unsigned>& membership,
                 const std::vector<Level>& levels) {
  Classes cls;
  for (Eigen::Index t : order) {
    const unsigned mem = membership[std::size_t(t)];
    bool forbidden = false, low = false, mid = false;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      if (!(mem & (1u << j))) continue;
      forbidden |= levels[j] == kNone;
      low |= levels[j] == kLow;
      mid |= levels[j] == kMid;
    }
    if (forbidden) continue;
    if (low) {
      cls.x.push(t, coeffs[t]);
    } else if (mid) {
      cls.y.push(t, coeffs[t]);
    } else {
      cls.z.push(t, coeffs[t]);
    }
  }
  return cls;
}

// Merges X with Y[i:] by cost order.
ClassList merge_tail(const ClassList& x, const ClassList& y, int from,
                     const std::vector<Eigen::Index>& rank) {
  ClassList out;
  int a = 0, b = from;
  while (a < x.size() || b < y.size()) {
    const bool take_x =
        b >= y.size() ||
        (a < x.size() && rank[std::size_t(x.index[std::size_t(a)])] <
                             rank[std::size_t(y.index[std::size_t(b)])]);
    if (take_x) {
      out.push(x.index[std::size_t(a)], x.cost[std::size_t(a)]);
      ++a;
    } else {
      out.push(y.index[std::size_t(b)], y.cost[std::size_t(b)]);
      ++b;
    }
  }
  return out;
}

}  // namespace

SolveResult solve_peak_priced(const Objective& objective, const FlexSpec& spec) {
  detail::check_inputs(objective, spec);
  if (objective.demand.size() > 3) {
    throw InputError("at most 3 demand charges are supported (got " +
                     std::to_string(objective.demand.size()) + ")");
  }
  if (!objective.has_demand()) return solve(objective, spec);
  if (!detail::uniform_bounds(spec)) {
    throw UnsupportedError(
        "demand charges with a baseline power reference need a flat baseline");
  }
  if (detail::ec_active(spec)) {
    throw UnsupportedError(
        "an energy-capacity cap is not supported with demand charges");
  }

  const Eigen::Index steps = spec.horizon();
  const double dt = spec.dt_hours;
  const Eigen::VectorXd coeffs = objective.effective_coefficients(steps);
  const auto order = detail::sorted_order(coeffs, objective.tie_break);
  std::vector<Eigen::Index> rank(static_cast<std::size_t>(steps));
  for (std::size_t r = 0; r < order.size(); ++r) rank[std::size_t(order[r])] = Eigen::Index(r);

  std::vector<double> rates;
  std::vector<unsigned> membership(std::size_t(steps), 0u);
  for (const auto& w : objective.demand) {
    if (w.mask.size() != steps) {
      throw InputError("demand window length does not match horizon");
    }
    if (!(w.rate > 0.0) || !w.mask.any()) continue;
    for (Eigen::Index t = 0; t < steps; ++t) {
      if (w.mask[t]) membership[std::size_t(t)] |= 1u << rates.size();
    }
    rates.push_back(objective.cost_weight * w.rate);
  }
  const int windows = int(rates.size());
  const double energy = detail::energy_steps(spec);
  const double slack = 1e-12 * std::max(1.0, energy);
  const auto ks = spec.admissible_on_counts();

  struct KBounds {
    int k;
    double lo, hi, width, residual;
  };
  std::vector<KBounds> kb;
  for (int k : ks) {
    const auto b = detail::bounds_for(spec, k);
    if (!b) continue;
    kb.push_back({k, b->lo, b->hi, b->hi - b->lo, energy - k * b->lo});
  }
  if (kb.empty()) {
    throw InfeasibleError("no admissible uptime satisfies the envelope");
  }

  int assignments = 1;
  for (int j = 0; j < windows; ++j) assignments *= 4;

  Candidate best;
  Diagnostics diag;
  diag.mode = "peak_priced";

  for (int code = 0; code < assignments; ++code) {
    std::vector<Level> levels(static_cast<std::size_t>(windows));
    bool has_mid = false;
    double mid_rate = 0.0;
    for (int j = 0, c = code; j < windows; ++j, c /= 4) {
      levels[std::size_t(j)] = Level(c % 4);
      if (levels[std::size_t(j)] == kMid) {
        has_mid = true;
        mid_rate += rates[std::size_t(j)];
      }
    }
    auto level_cost = [&](double lo, double hi) {
      double v = 0.0;
      for (int j = 0; j < windows; ++j) {
        if (levels[std::size_t(j)] == kLow) v += rates[std::size_t(j)] * lo;
        if (levels[std::size_t(j)] == kHigh) v += rates[std::size_t(j)] * hi;
      }
      return v;
    };

    const Classes cls = classify(order, coeffs, membership, levels);
    const auto& X = cls.x;
    const auto& Y = cls.y;
    const auto& Z = cls.z;
    ++diag.iterations;

    if (!has_mid) {
      for (const auto& b : kb) {
        const int x_lo = std::max(0, b.k - Z.size());
        const int x_hi = std::min(b.k, X.size());
        for (int x = x_lo; x <= x_hi; ++x) {
          const int z = b.k - x;
          if (b.residual > z * b.width + slack) continue;
          double fill = 0.0;
          if (b.width > 0.0 && b.residual > 0.0) {
            const int full =
                std::min(z, int(std::floor(b.residual / b.width)));
            fill = b.width * Z.prefix[std::size_t(full)];
            if (full < z) {
              fill += (b.residual - full * b.width) * Z.cost[std::size_t(full)];
            }
          }
          const double value =
              dt * (b.lo * (X.prefix[std::size_t(x)] + Z.prefix[std::size_t(z)]) +
                    fill) +
              level_cost(b.lo, b.hi);
          if (detail::better(value, best.value)) {
            best = {value, code, b.k, false, x, 0, 0, 0};
          }
        }
      }
      continue;
    }

    if (Y.size() == 0) continue;
    for (int i = 1; i <= Y.size(); ++i) {
      const ClassList A = merge_tail(X, Y, i, rank);
      for (const auto& b : kb) {
        if (b.k < i || !(b.width > slack)) continue;
        const int total = b.k - i;  // on-steps outside Y[0..i)
        const int a_min = std::max(0, total - Z.size());
        const int a_max = std::min(A.size(), total);
        if (a_min > a_max) continue;
        // Split of the `total` cheapest of A and Z: first a with
        // A[a] >= Z[total - a - 1].
        int lo_a = a_min, hi_a = a_max;
        while (lo_a < hi_a) {
          const int mid = (lo_a + hi_a) / 2;
          if (A.cost[std::size_t(mid)] >= Z.cost[std::size_t(total - mid - 1)]) {
            hi_a = mid;
          } else {
            lo_a = mid + 1;
          }
        }
        const int a_star = lo_a;
        const double ratio = b.residual / b.width;
        const int m_lo = std::max(0, int(std::ceil(ratio - i - 1e-9)));
        const int m_hi =
            std::min({Z.size(), total, int(std::floor(ratio + 1e-9))});
        const double base_level = level_cost(b.lo, b.hi);
        for (int m = m_lo; m <= m_hi; ++m) {
          const int r = total - m;
          const int am_max = std::min(A.size(), r);
          if (a_min > am_max) continue;
          const int a = std::clamp(a_star, a_min, am_max);
          const double peak = std::clamp(
              b.lo + (b.residual - m * b.width) / i, b.lo, b.hi);
          const double linear =
              peak * Y.prefix[std::size_t(i)] + b.hi * Z.prefix[std::size_t(m)] +
              b.lo * (A.prefix[std::size_t(a)] + Z.prefix[std::size_t(m + r - a)] -
                      Z.prefix[std::size_t(m)]);
          const double value = dt * linear + base_level + mid_rate * peak;
          if (detail::better(value, best.value)) {
            best = {value, code, b.k, true, 0, i, m, a};
          }
        }
      }
    }
  }

  if (best.assignment < 0) {
    throw InfeasibleError("no schedule satisfies the flexibility envelope");
  }

  // Rebuild the winning schedule.
  std::vector<Level> levels(static_cast<std::size_t>(windows));
  for (int j = 0, c = best.assignment; j < windows; ++j, c /= 4) {
    levels[std::size_t(j)] = Level(c % 4);
  }
  const Classes cls = classify(order, coeffs, membership, levels);
  const KBounds b = *std::find_if(kb.begin(), kb.end(),
                                  [&](const KBounds& e) { return e.k == best.k; });
  Schedule s;
  s.dt_hours = dt;
  s.status = StatusVector::Constant(steps, false);
  s.power = Eigen::VectorXd::Zero(steps);
  auto set = [&](Eigen::Index t, double p) {
    s.status[t] = true;
    s.power[t] = p;
  };
  if (!best.mid) {
    const int z = best.k - best.x;
    for (int q = 0; q < best.x; ++q) set(cls.x.index[std::size_t(q)], b.lo);
    const auto fill =
        detail::greedy_fill(std::size_t(z), b.width, std::max(0.0, b.residual));
    for (int q = 0; q < z; ++q) {
      set(cls.z.index[std::size_t(q)], b.lo + fill[std::size_t(q)]);
    }
  } else {
    const ClassList A = merge_tail(cls.x, cls.y, best.i, rank);
    const double peak = std::clamp(
        b.lo + (b.residual - best.m * b.width) / best.i, b.lo, b.hi);
    const int r = best.k - best.i - best.m;
    for (int q = 0; q < best.i; ++q) set(cls.y.index[std::size_t(q)], peak);
    for (int q = 0; q < best.m; ++q) set(cls.z.index[std::size_t(q)], b.hi);
    for (int q = 0; q < best.a; ++q) set(A.index[std::size_t(q)], b.lo);
    for (int q = best.m; q < best.m + r - best.a; ++q) {
      set(cls.z.index[std::size_t(q)], b.lo);
    }
  }
  return detail::finish(objective, std::move(s), diag);
}

SolveResult solve_tariff(const Tariff& tariff, const FlexSpec& spec,
                         const BillingPeriod& period,
                         const Eigen::VectorXd& emissions, double lambda) {
  if (tariff.demand_charges.size() > 3) {
    throw InputError("at most 3 demand charges are supported");
  }
  if (spec.horizon() != period.hours()) {
    throw InputError("baseline length does not match the billing period");
  }
  if (lambda < 0.0) throw InputError("emissions weight must be >= 0");
  Objective obj = Objective::from_tariff(tariff, period);
  if (emissions.size() > 0) obj = obj.with_emissions(emissions, lambda);
  return solve(obj, spec);
}

}  // namespace flexbound
