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
#include "solver_internal.hpp"

namespace flexbound::detail {
namespace {

class Search {
 public:
  Search(std::span<const BnbItem> items, int k, double energy,
         std::size_t node_limit)
      : items_(items),
        k_(k),
        energy_(energy),
        node_limit_(node_limit),
        on_(items.size(), false),
        slack_(1e-12 * std::max(1.0, energy)) {
    for (const auto& it : items_) {
      cmin_ = std::min(cmin_, it.cost);
      cmax_ = std::max(cmax_, it.cost);
    }
  }

  BnbOutcome run() {
    visit(0, 0);
    outcome_.feasible = std::isfinite(incumbent_);
    outcome_.value = incumbent_;
    outcome_.nodes = nodes_;
    return outcome_;
  }

 private:
  // Items are visited in cost order; `i` is the next undecided item.
  void visit(std::size_t i, int n_on) {
    if (++nodes_ > node_limit_) {
      throw UnsupportedError(
          "branch and bound node limit reached; reduce the horizon or use a "
          "flat baseline");
    }
    const std::size_t n = items_.size();
    const int need = k_ - n_on;
    const std::size_t rest = n - i;
    if (need < 0 || std::size_t(need) > rest) return;
    if (need == 0 || std::size_t(need) == rest) {
      for (std::size_t j = i; j < n; ++j) on_[j] = need > 0;
      leaf();
      for (std::size_t j = i; j < n; ++j) on_[j] = false;
      return;
    }
    if (!energy_reachable(i, need)) return;
    if (lower_bound(i, need) >= incumbent_ - 1e-12 * std::abs(incumbent_)) {
      return;
    }
    on_[i] = true;
    visit(i + 1, n_on + 1);
    on_[i] = false;
    visit(i + 1, n_on);
  }

  bool energy_reachable(std::size_t i, int need) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      if (on_[j]) {
        lo += items_[j].lo;
        hi += items_[j].hi;
      }
    }
    scratch_.clear();
    for (std::size_t j = i; j < items_.size(); ++j) scratch_.push_back(items_[j].lo);
    std::nth_element(scratch_.begin(), scratch_.begin() + (need - 1),
                     scratch_.end());
    for (int j = 0; j < need; ++j) lo += scratch_[std::size_t(j)];
    scratch_.clear();
    for (std::size_t j = i; j < items_.size(); ++j) scratch_.push_back(-items_[j].hi);
    std::nth_element(scratch_.begin(), scratch_.begin() + (need - 1),
                     scratch_.end());
    for (int j = 0; j < need; ++j) hi -= scratch_[std::size_t(j)];
    return lo <= energy_ + slack_ && hi >= energy_ - slack_;
  }

  // Dual function of the LP relaxation with a multiplier on the energy
  // constraint; concave in mu, so golden-section search.
  double dual(std::size_t i, int need, double mu) {
    auto g = [mu](const BnbItem& it) {
      return (it.cost - mu) * (it.cost >= mu ? it.lo : it.hi);
    };
    double v = mu * energy_;
    for (std::size_t j = 0; j < i; ++j) {
      if (on_[j]) v += g(items_[j]);
    }
    scratch_.clear();
    for (std::size_t j = i; j < items_.size(); ++j) scratch_.push_back(g(items_[j]));
    std::nth_element(scratch_.begin(), scratch_.begin() + (need - 1),
                     scratch_.end());
    for (int j = 0; j < need; ++j) v += scratch_[std::size_t(j)];
    return v;
  }

  double lower_bound(std::size_t i, int need) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = cmin_, b = cmax_;
    double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
    double f1 = dual(i, need, x1), f2 = dual(i, need, x2);
    double best = std::max({f1, f2, dual(i, need, a), dual(i, need, b)});
    for (int it = 0; it < 40 && b - a > 1e-12 * std::max(1.0, std::abs(b)); ++it) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + kInvPhi * (b - a);
        f2 = dual(i, need, x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - kInvPhi * (b - a);
        f1 = dual(i, need, x1);
      }
      best = std::max({best, f1, f2});
    }
    return best;
  }

  void leaf() {
    double lo = 0.0, hi = 0.0;
    for (std::size_t j = 0; j < items_.size(); ++j) {
      if (!on_[j]) continue;
      lo += items_[j].lo;
      hi += items_[j].hi;
    }
    if (lo > energy_ + slack_ || hi < energy_ - slack_) return;
    std::vector<double> power(items_.size(), 0.0);
    double residual = energy_ - lo;
    double value = 0.0;
    std::size_t last = items_.size();
    for (std::size_t j = 0; j < items_.size(); ++j) {
      if (!on_[j]) continue;
      const double add =
          std::clamp(residual, 0.0, items_[j].hi - items_[j].lo);
      power[j] = items_[j].lo + add;
      residual -= add;
      value += items_[j].cost * power[j];
      last = j;
    }
    if (residual > 0.0 && last < items_.size()) {
      power[last] += residual;
      value += items_[last].cost * residual;
    }
    if (value < incumbent_) {
      incumbent_ = value;
      outcome_.power = std::move(power);
      outcome_.on = on_;
    }
  }

  std::span<const BnbItem> items_;
  int k_;
  double energy_;
  std::size_t node_limit_;
  std::vector<bool> on_;
  double slack_;
  double cmin_ = std::numeric_limits<double>::infinity();
  double cmax_ = -std::numeric_limits<double>::infinity();
  double incumbent_ = std::numeric_limits<double>::infinity();
  std::size_t nodes_ = 0;
  std::vector<double> scratch_;
  BnbOutcome outcome_;
};

}  // namespace

BnbOutcome select_and_fill(std::span<const BnbItem> items, int k,
                           double energy, std::size_t node_limit) {
  return Search(items, k, energy, node_limit).run();
}

}  // namespace flexbound::detail
