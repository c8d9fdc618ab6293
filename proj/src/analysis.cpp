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

#include "flexbound/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "flexbound/error.hpp"

namespace flexbound {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

// Runs task(i) for i in [0, count) on a small pool. Errors are rethrown in
// index order so the outcome does not depend on scheduling.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      unsigned(std::min<std::size_t>(worker_count(), count));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

template <typename E>
[[noreturn]] void rethrow_at(const E& e, double u, double pc) {
  throw E("at uptime " + num(u) + ", power capacity " + num(pc) + ": " +
          e.what());
}

}  // namespace

std::optional<double> savings(double baseline, double flexible) {
  if (!(std::abs(baseline) > 1e-9)) return std::nullopt;
  return 100.0 * (baseline - flexible) / baseline;
}

double baseline_value(const Objective& objective, const FlexSpec& spec) {
  return objective.value(spec.baseline, spec.dt_hours);
}

unsigned worker_count() {
  if (const char* env = std::getenv("FLEXBOUND_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1) return unsigned(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

SavingsSurface sweep_surface(const Objective& objective, const FlexSpec& spec,
                             const Eigen::VectorXd& u_grid,
                             const Eigen::VectorXd& pc_grid,
                             SurfaceMetadata metadata) {
  if (u_grid.size() == 0 || pc_grid.size() == 0) {
    throw InputError("sweep grids must be non-empty");
  }
  spec.validate();
  SavingsSurface s;
  s.u_grid = u_grid;
  s.pc_grid = pc_grid;
  s.values = Eigen::MatrixXd::Constant(u_grid.size(), pc_grid.size(), kNaN);
  s.points.resize(std::size_t(u_grid.size() * pc_grid.size()));
  s.baseline_value = baseline_value(objective, spec);
  metadata.rte = spec.rte;
  metadata.ec_cap = spec.ec_cap;
  s.metadata = std::move(metadata);

  const Eigen::Index npc = pc_grid.size();
  parallel_for(s.points.size(), [&](std::size_t idx) {
    const double u = u_grid[Eigen::Index(idx) / npc];
    const double pc = pc_grid[Eigen::Index(idx) % npc];
    SurfacePoint& pt = s.points[idx];
    pt.uptime = u;
    pt.power_capacity = pc;
    FlexSpec local = spec;
    local.uptime = u;
    local.power_capacity = pc;
    try {
      const SolveResult r = solve(objective, local);
      pt.objective_value = r.objective_value;
      pt.realized_ec = energy_capacity(r.schedule, spec.baseline);
      pt.savings_pct = savings(s.baseline_value, r.objective_value)
                           .value_or(kNaN);
    } catch (const InfeasibleError&) {
      pt.feasible = false;
      pt.objective_value = kNaN;
      pt.realized_ec = kNaN;
      pt.savings_pct = kNaN;
    } catch (const InputError& e) {
      rethrow_at(e, u, pc);
    } catch (const UnsupportedError& e) {
      rethrow_at(e, u, pc);
    } catch (const ConvergenceError& e) {
      rethrow_at(e, u, pc);
    }
  });
  for (std::size_t idx = 0; idx < s.points.size(); ++idx) {
    s.values(Eigen::Index(idx) / npc, Eigen::Index(idx) % npc) =
        s.points[idx].savings_pct;
  }
  return s;
}

std::vector<double> default_lambdas() {
  std::vector<double> l{0.0};
  for (int i = 0; i < 25; ++i) l.push_back(std::pow(10.0, -3.0 + 6.0 * i / 24.0));
  return l;
}

ParetoFront pareto_front(const Objective& cost_objective,
                         const Eigen::VectorXd& emissions,
                         const FlexSpec& spec,
                         const std::vector<double>& lambdas) {
  if (emissions.size() != spec.horizon()) {
    throw InputError("emissions vector length does not match horizon");
  }
  std::vector<double> weights = lambdas;
  for (double l : weights) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw InputError("lambda weights must be finite and non-negative");
    }
  }
  weights.push_back(0.0);
  std::sort(weights.begin(), weights.end());
  weights.erase(std::unique(weights.begin(), weights.end()), weights.end());

  Objective base = cost_objective;
  if (base.tie_break.size() == 0) base.tie_break = emissions;

  // Last slot is the pure-emissions endpoint.
  std::vector<ParetoPoint> raw(weights.size() + 1);
  parallel_for(raw.size(), [&](std::size_t i) {
    const bool endpoint = i == weights.size();
    const Objective o =
        endpoint ? base.with_emissions(emissions, 1.0).emissions_endpoint()
                 : base.with_emissions(emissions, weights[i]);
    const SolveResult r = solve(o, spec);
    raw[i].lambda = endpoint ? kInf : weights[i];
    raw[i].cost = cost_objective.cost(r.schedule.power, r.schedule.dt_hours);
    raw[i].emissions = r.emissions;
    raw[i].schedule = r.schedule;
  });

  ParetoFront front;
  front.cost_optimal = raw.front();
  front.emissions_optimal = raw.back();

  std::vector<ParetoPoint> sorted = raw;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ParetoPoint& a, const ParetoPoint& b) {
                     if (a.emissions != b.emissions) return a.emissions < b.emissions;
                     return a.cost < b.cost;
                   });
  double scale = 1.0;
  for (const auto& p : raw) {
    scale = std::max({scale, std::abs(p.cost), std::abs(p.emissions)});
  }
  const double tol = 1e-9 * scale;
  double best_cost = kInf;
  double last_emissions = -kInf;
  for (auto& p : sorted) {
    if (p.cost < best_cost - tol) {
      if (!front.points.empty() && p.emissions <= last_emissions + tol) {
        front.points.back() = p;
      } else {
        front.points.push_back(p);
      }
      best_cost = p.cost;
      last_emissions = p.emissions;
    }
  }
  std::reverse(front.points.begin(), front.points.end());
  return front;
}

AbatementResult abatement_cost(const ParetoFront& front, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InputError("abatement fraction must be in (0, 1]");
  }
  if (front.points.empty()) throw InputError("empty Pareto front");
  const auto& pts = front.points;
  const double c0 = pts.front().cost;
  const double e0 = pts.front().emissions;
  const double spread = e0 - pts.back().emissions;
  AbatementResult r;
  r.fraction = fraction;
  r.cost = c0;
  r.emissions = e0;
  if (!(spread > 1e-12 * std::max(1.0, std::abs(e0)))) {
    r.degenerate = true;
    r.cost_per_ton = 0.0;
    r.fraction_abated = fraction;
    return r;
  }
  const double target = e0 - fraction * spread;
  std::size_t j = 1;
  while (j + 1 < pts.size() && pts[j].emissions > target) ++j;
  const auto& a = pts[j - 1];
  const auto& b = pts[j];
  const double w = a.emissions == b.emissions
                       ? 1.0
                       : std::clamp((a.emissions - target) /
                                        (a.emissions - b.emissions),
                                    0.0, 1.0);
  r.anchor = j;
  r.cost = a.cost + w * (b.cost - a.cost);
  r.emissions = a.emissions + w * (b.emissions - a.emissions);
  r.fraction_abated = (e0 - r.emissions) / spread;
  r.cost_per_ton = -(r.cost - c0) / (r.emissions - e0) * kKgPerTon;
  return r;
}

RecEquivalent rec_equivalent(double rec_price, const HourlyProfile& emissions) {
  if (!(rec_price >= 0.0) || !std::isfinite(rec_price)) {
    throw InputError("REC price must be finite and non-negative");
  }
  RecEquivalent r;
  for (int h = 0; h < 24; ++h) {
    const double ef = emissions.values[h];
    if (ef > 0.0) {
      r.cost_per_ton[h] = rec_price / (ef / kKgPerTon);
    } else {
      r.cost_per_ton[h] = kNaN;
      r.undefined[std::size_t(h)] = true;
    }
  }
  return r;
}

RteThreshold min_viable_rte(const Objective& objective, const FlexSpec& spec,
                            double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("tolerance must be positive");
  spec.validate();
  const double base = baseline_value(objective, spec);
  auto savings_at = [&](double eta) {
    FlexSpec local = spec;
    local.rte = eta;
    try {
      const SolveResult r = solve(objective, local);
      return savings(base, r.objective_value).value_or(kNaN);
    } catch (const InfeasibleError&) {
      return -kInf;
    }
  };
  RteThreshold t;
  t.savings_at_unity = savings_at(1.0);
  if (!(t.savings_at_unity > 0.0)) return t;
  t.viable = true;
  double hi = 1.0;
  double lo = 0.5;
  while (savings_at(lo) > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < tolerance) {
      t.rte = hi;
      return t;
    }
  }
  while (hi - lo > tolerance / 2) {
    const double mid = 0.5 * (lo + hi);
    (savings_at(mid) > 0.0 ? hi : lo) = mid;
  }
  t.rte = 0.5 * (lo + hi);
  return t;
}

void Benchmarks::validate() const {
  if (!(scc > 0.0) || !(rec_low > 0.0) || !(rec_high >= rec_low)) {
    throw InputError("benchmarks must be positive with rec_low <= rec_high");
  }
}

nlohmann::json to_json(const SavingsSurface& surface) {
  nlohmann::json doc;
  doc["u_grid"] = std::vector<double>(surface.u_grid.begin(), surface.u_grid.end());
  doc["pc_grid"] =
      std::vector<double>(surface.pc_grid.begin(), surface.pc_grid.end());
  doc["baseline_value"] = surface.baseline_value;
  const auto& m = surface.metadata;
  doc["metadata"] = {{"incentive", m.incentive},
                     {"region", m.region},
                     {"month", m.month},
                     {"rte", m.rte},
                     {"ec_cap", m.ec_cap ? nlohmann::json(*m.ec_cap) : nullptr}};
  auto& pts = doc["points"] = nlohmann::json::array();
  for (const auto& p : surface.points) {
    pts.push_back({{"uptime", p.uptime},
                   {"power_capacity", p.power_capacity},
                   {"savings_pct", json_number(p.savings_pct)},
                   {"objective_value", json_number(p.objective_value)},
                   {"realized_ec", json_number(p.realized_ec)},
                   {"feasible", p.feasible}});
  }
  return doc;
}

namespace {
nlohmann::json point_json(const ParetoPoint& p) {
  return {{"lambda", std::isinf(p.lambda) ? nlohmann::json("inf")
                                          : nlohmann::json(p.lambda)},
          {"cost", p.cost},
          {"emissions", p.emissions},
          {"schedule", to_json(p.schedule)}};
}
}  // namespace

nlohmann::json to_json(const ParetoFront& front) {
  nlohmann::json doc;
  auto& pts = doc["points"] = nlohmann::json::array();
  for (const auto& p : front.points) pts.push_back(point_json(p));
  doc["cost_optimal"] = point_json(front.cost_optimal);
  doc["emissions_optimal"] = point_json(front.emissions_optimal);
  return doc;
}

nlohmann::json to_json(const AbatementResult& r) {
  return {{"fraction", r.fraction},
          {"cost_per_ton", r.cost_per_ton},
          {"fraction_abated", r.fraction_abated},
          {"anchor", r.anchor},
          {"cost", r.cost},
          {"emissions", r.emissions},
          {"degenerate", r.degenerate}};
}

nlohmann::json to_json(const Benchmarks& b) {
  return {{"scc", b.scc}, {"rec_low", b.rec_low}, {"rec_high", b.rec_high}};
}

nlohmann::json to_json(const RteThreshold& t) {
  return {{"rte", t.rte},
          {"viable", t.viable},
          {"savings_at_unity", json_number(t.savings_at_unity)}};
}

void write_csv(std::ostream& out, const SavingsSurface& surface) {
  out << "uptime,power_capacity,savings_pct,objective_value,realized_ec,"
         "feasible\n";
  for (const auto& p : surface.points) {
    out << num(p.uptime) << ',' << num(p.power_capacity) << ','
        << num(p.savings_pct) << ',' << num(p.objective_value) << ','
        << num(p.realized_ec) << ',' << (p.feasible ? 1 : 0) << '\n';
  }
}

void write_csv(std::ostream& out, const ParetoFront& front) {
  out << "lambda,cost,emissions\n";
  for (const auto& p : front.points) {
    out << num(p.lambda) << ',' << num(p.cost) << ',' << num(p.emissions)
        << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<AbatementResult>& table,
               const Benchmarks& benchmarks) {
  out << "fraction,fraction_abated,cost_per_ton,cost,emissions,degenerate,"
         "scc,rec_low,rec_high\n";
  for (const auto& r : table) {
    out << num(r.fraction) << ',' << num(r.fraction_abated) << ','
        << num(r.cost_per_ton) << ',' << num(r.cost) << ','
        << num(r.emissions) << ',' << (r.degenerate ? 1 : 0) << ','
        << num(benchmarks.scc) << ',' << num(benchmarks.rec_low) << ','
        << num(benchmarks.rec_high) << '\n';
  }
}

}  // namespace flexbound
