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

#include "flexbound/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flexbound/analysis.hpp"
#include "flexbound/error.hpp"
#include "flexbound/flexmodel.hpp"
#include "flexbound/signals.hpp"
#include "flexbound/solver.hpp"
#include "flexbound/tariff.hpp"

namespace flexbound::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands{
    "solve", "sweep", "pareto", "abatement", "rte-threshold", "bill",
    "emit-baseline"};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string fixed2(double x) {
  if (!std::isfinite(x)) return num(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// Everything a command needs once files are loaded.
struct Context {
  Objective objective;  // cost side (or the single incentive)
  FlexSpec spec;
  Eigen::VectorXd emissions;  // empty when not given
  std::string incentive;
  bool emissions_incentive = false;
  std::optional<Tariff> tariff;
  BillingPeriod period;
  TimePoint start{};
};

SignalKind kind_for(const std::string& name) {
  return signal_kind_from_string(name);
}

Eigen::VectorXd load_values(const RunConfig& c, const std::string& path,
                            SignalKind kind, TimePoint* start = nullptr) {
  auto loaded = load_signal_file(path, kind, {}, c.region);
  SignalSeries s = std::move(loaded.series);
  if (start) *start = s.start;
  if (c.profile_month == 0) return s.values;
  const HourlyProfile p = month_hour_average(s, c.profile_month);
  const int days = c.days > 0 ? c.days : days_in_month(c.year, c.profile_month);
  return broadcast(p, days);
}

BillingPeriod period_of(const RunConfig& c) {
  BillingPeriod p;
  p.year = c.year;
  p.month = c.month;
  p.days = c.days;
  return p;
}

FlexSpec spec_of(const RunConfig& c, Eigen::Index steps) {
  FlexSpec s;
  s.uptime = c.uptime;
  s.uptime_mode = uptime_mode_from_string(c.uptime_mode);
  s.power_capacity = c.pc;
  s.pc_reference = pc_reference_from_string(c.pc_reference);
  s.rte = c.rte;
  s.ec_cap = c.ec;
  s.baseline = Eigen::VectorXd::Ones(steps);
  return s;
}

Context load_context(const RunConfig& c, bool need_emissions) {
  Context ctx;
  const std::string& cost_path = c.signal;
  if (!c.tariff.empty() && !cost_path.empty()) {
    throw InputError("give either --signal/--cost or --tariff, not both");
  }
  if (!c.tariff.empty()) {
    ctx.tariff = parse_tariff_file(c.tariff);
    ctx.period = period_of(c);
    ctx.objective = Objective::from_tariff(*ctx.tariff, ctx.period);
    ctx.incentive = "tariff:" + ctx.tariff->name;
  } else if (!cost_path.empty()) {
    const SignalKind kind = kind_for(c.signal_kind);
    ctx.objective =
        Objective::linear(load_values(c, cost_path, kind, &ctx.start));
    ctx.incentive = std::string(to_string(kind));
    ctx.emissions_incentive = is_emissions(kind);
  } else {
    throw InputError("an incentive is required: --signal/--cost or --tariff");
  }
  const Eigen::Index steps = ctx.objective.horizon();
  if (!c.emissions.empty()) {
    ctx.emissions = load_values(c, c.emissions, SignalKind::kMef);
    if (ctx.emissions.size() != steps) {
      throw InputError("emissions signal has " +
                       std::to_string(ctx.emissions.size()) +
                       " steps but the incentive has " + std::to_string(steps));
    }
  } else if (need_emissions) {
    throw InputError("--emissions is required for this command");
  }
  ctx.spec = spec_of(c, steps);
  if (!c.baseline.empty()) {
    ctx.spec.baseline = load_values(c, c.baseline, SignalKind::kGeneric);
    if (ctx.spec.baseline.size() != steps) {
      throw InputError("baseline has " +
                       std::to_string(ctx.spec.baseline.size()) +
                       " steps but the incentive has " + std::to_string(steps));
    }
  }
  ctx.spec.validate();
  return ctx;
}

fs::path prepare_out(const RunConfig& c) {
  const fs::path dir(c.out);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
}

void write_json(const fs::path& path, const json& doc) {
  write_file(path, doc.dump(2) + "\n");
}

void write_config(const fs::path& dir, const RunConfig& c) {
  write_json(dir / "config.json", to_json(c));
}

void print_table(std::ostream& out,
                 const std::vector<std::pair<std::string, std::string>>& rows) {
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size());
  for (const auto& [k, v] : rows) {
    out << std::left << std::setw(int(width) + 2) << k << v << '\n';
  }
}

std::string schedule_csv(const Schedule& s) {
  std::ostringstream out;
  out << "t,status,power\n";
  for (Eigen::Index t = 0; t < s.horizon(); ++t) {
    out << t << ',' << (s.status[t] ? 1 : 0) << ',' << num(s.power[t]) << '\n';
  }
  return out.str();
}

Objective incentive_objective(const Context& ctx, const RunConfig& c) {
  if (ctx.emissions.size() > 0 && c.lambda > 0.0) {
    return ctx.objective.with_emissions(ctx.emissions, c.lambda);
  }
  return ctx.objective;
}

ExitCode cmd_solve(const RunConfig& c, std::ostream& out) {
  const Context ctx = load_context(c, false);
  const Objective obj = incentive_objective(ctx, c);
  SolveResult r;
  if (c.method == "lagrangian") {
    r = solve_lagrangian(obj, ctx.spec);
  } else if (c.method == "exact") {
    r = solve(obj, ctx.spec);
  } else {
    throw InputError("--method must be exact or lagrangian");
  }
  if (ctx.emissions.size() > 0) {
    r.emissions = ctx.emissions.dot(r.schedule.power) * r.schedule.dt_hours;
  }
  const double base = baseline_value(obj, ctx.spec);
  const auto pct = savings(base, r.objective_value);
  const fs::path dir = prepare_out(c);
  json doc = to_json(r);
  doc["incentive"] = ctx.incentive;
  doc["baseline_value"] = base;
  doc["savings_pct"] = pct ? json(*pct) : json(nullptr);
  doc["realized"] = {
      {"uptime", realized_uptime(r.schedule)},
      {"power_capacity", realized_power_capacity(r.schedule, ctx.spec)},
      {"energy_capacity", energy_capacity(r.schedule, ctx.spec.baseline)}};
  if (ctx.tariff) doc["bill"] = to_json(bill(*ctx.tariff, r.schedule, ctx.period));
  write_json(dir / "result.json", doc);
  if (c.format == "csv") write_file(dir / "schedule.csv", schedule_csv(r.schedule));
  write_config(dir, c);

  const bool em_only = ctx.emissions_incentive && ctx.emissions.size() == 0;
  print_table(out, {{"incentive", ctx.incentive},
                    {"mode", r.diagnostics.mode},
                    {"savings %", pct ? fixed2(*pct) : "undefined"},
                    {em_only ? "emissions kg" : "cost $",
                     fixed2(em_only ? r.objective_value : r.cost)},
                    {"emissions kg", ctx.emissions.size() > 0 || em_only
                                         ? fixed2(em_only ? r.objective_value
                                                          : r.emissions)
                                         : "n/a"},
                    {"realized uptime", fixed2(realized_uptime(r.schedule))},
                    {"realized pc", fixed2(realized_power_capacity(r.schedule, ctx.spec))},
                    {"realized ec", fixed2(energy_capacity(r.schedule, ctx.spec.baseline))},
                    {"output", (dir / "result.json").string()}});
  return ExitCode::kOk;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
}

ExitCode cmd_sweep(const RunConfig& c, std::ostream& out) {
  const Context ctx = load_context(c, false);
  SurfaceMetadata meta;
  meta.incentive = ctx.incentive;
  meta.region = c.region;
  meta.month = c.profile_month ? c.profile_month : c.month;
  const auto surf = sweep_surface(incentive_objective(ctx, c), ctx.spec,
                                  as_vector(c.u_grid), as_vector(c.pc_grid),
                                  meta);
  const fs::path dir = prepare_out(c);
  if (c.format == "json") {
    write_json(dir / "surface.json", to_json(surf));
  } else {
    std::ostringstream csv;
    write_csv(csv, surf);
    write_file(dir / "surface.csv", csv.str());
  }
  write_config(dir, c);
  out << "savings % (rows: uptime, columns: power capacity)\n";
  out << std::setw(8) << "u\\pc";
  for (double pc : c.pc_grid) out << std::setw(10) << fixed2(pc);
  out << '\n';
  for (Eigen::Index i = 0; i < surf.values.rows(); ++i) {
    out << std::setw(8) << fixed2(surf.u_grid[i]);
    for (Eigen::Index j = 0; j < surf.values.cols(); ++j) {
      out << std::setw(10) << fixed2(surf.values(i, j));
    }
    out << '\n';
  }
  return ExitCode::kOk;
}

ParetoFront front_of(const RunConfig& c, const Context& ctx) {
  return c.lambdas.empty()
             ? pareto_front(ctx.objective, ctx.emissions, ctx.spec)
             : pareto_front(ctx.objective, ctx.emissions, ctx.spec, c.lambdas);
}

void write_front(const RunConfig& c, const fs::path& dir,
                 const ParetoFront& front) {
  if (c.format == "json") {
    write_json(dir / "pareto.json", to_json(front));
  } else {
    std::ostringstream csv;
    write_csv(csv, front);
    write_file(dir / "pareto.csv", csv.str());
  }
}

ExitCode cmd_pareto(const RunConfig& c, std::ostream& out) {
  const Context ctx = load_context(c, true);
  const auto front = front_of(c, ctx);
  const fs::path dir = prepare_out(c);
  write_front(c, dir, front);
  write_config(dir, c);
  out << std::setw(12) << "lambda" << std::setw(16) << "cost $"
      << std::setw(16) << "emissions kg" << '\n';
  for (const auto& p : front.points) {
    out << std::setw(12) << (std::isinf(p.lambda) ? "inf" : num(p.lambda))
        << std::setw(16) << fixed2(p.cost) << std::setw(16)
        << fixed2(p.emissions) << '\n';
  }
  return ExitCode::kOk;
}

Benchmarks benchmarks_of(const RunConfig& c) {
  Benchmarks b{c.scc, c.rec_low, c.rec_high};
  b.validate();
  return b;
}

// Hour-of-day REC equivalents need a full local month of emissions data.
std::optional<HourlyProfile> emissions_profile(const RunConfig& c,
                                               std::ostream& out) {
  const auto series =
      load_signal_file(c.emissions, SignalKind::kMef, {}, c.region).series;
  const auto local =
      std::chrono::floor<std::chrono::days>(
          series.start + std::chrono::hours(utc_offset_hours(c.region)));
  const int month =
      int(unsigned(std::chrono::year_month_day(local).month()));
  try {
    return month_hour_average(series, month);
  } catch (const InputError& e) {
    out << "note: no hourly REC table (" << e.what() << ")\n";
    return std::nullopt;
  }
}

void write_rec_table(const RunConfig& c, const fs::path& dir,
                     const Benchmarks& bench, const HourlyProfile& profile,
                     json& doc) {
  const auto lo = rec_equivalent(bench.rec_low, profile);
  const auto hi = rec_equivalent(bench.rec_high, profile);
  auto cell = [](const RecEquivalent& r, int h) {
    return r.undefined[std::size_t(h)] ? json(nullptr)
                                       : json(r.cost_per_ton[h]);
  };
  std::ostringstream csv;
  csv << "hour,rec_low_per_ton,rec_high_per_ton\n";
  json rec = json::array();
  for (int h = 0; h < 24; ++h) {
    csv << h << ',' << num(lo.cost_per_ton[h]) << ','
        << num(hi.cost_per_ton[h]) << '\n';
    rec.push_back({{"hour", h},
                   {"rec_low_per_ton", cell(lo, h)},
                   {"rec_high_per_ton", cell(hi, h)}});
  }
  doc["rec_equivalent"] = rec;
  if (c.format == "csv") write_file(dir / "rec_equivalent.csv", csv.str());
}

ExitCode cmd_abatement(const RunConfig& c, std::ostream& out) {
  const Benchmarks bench = benchmarks_of(c);
  const Context ctx = load_context(c, true);
  const auto front = front_of(c, ctx);
  std::vector<AbatementResult> table;
  for (double f : c.fractions) table.push_back(abatement_cost(front, f));

  const fs::path dir = prepare_out(c);
  write_front(c, dir, front);
  json doc;
  doc["benchmarks"] = to_json(bench);
  doc["abatement"] = json::array();
  for (const auto& r : table) doc["abatement"].push_back(to_json(r));

  if (!c.emissions.empty() && c.profile_month == 0) {
    if (const auto profile = emissions_profile(c, out)) {
      write_rec_table(c, dir, bench, *profile, doc);
    }
  }
  write_json(dir / "abatement.json", doc);
  if (c.format == "csv") {
    std::ostringstream csv;
    write_csv(csv, table, bench);
    write_file(dir / "abatement.csv", csv.str());
  }
  write_config(dir, c);

  out << std::setw(10) << "fraction" << std::setw(18) << "abatement $/ton"
      << std::setw(10) << "scc" << std::setw(14) << "rec $/MWh" << '\n';
  for (const auto& r : table) {
    out << std::setw(10) << fixed2(r.fraction) << std::setw(18)
        << (r.degenerate ? "0.00*" : fixed2(r.cost_per_ton)) << std::setw(10)
        << fixed2(bench.scc) << std::setw(14)
        << (fixed2(bench.rec_low) + "-" + fixed2(bench.rec_high)) << '\n';
  }
  if (!table.empty() && table.front().degenerate) {
    out << "* front has a single point; abatement cost reported as 0\n";
  }
  return ExitCode::kOk;
}

ExitCode cmd_rte(const RunConfig& c, std::ostream& out) {
  const Context ctx = load_context(c, false);
  const auto t = min_viable_rte(incentive_objective(ctx, c), ctx.spec,
                                c.tolerance);
  const fs::path dir = prepare_out(c);
  write_json(dir / "rte_threshold.json", to_json(t));
  write_config(dir, c);
  print_table(out, {{"savings at rte=1 %", fixed2(t.savings_at_unity)},
                    {"viable", t.viable ? "yes" : "no"},
                    {"minimum rte", t.viable ? num(t.rte) : "none (1.0)"}});
  return ExitCode::kOk;
}

Schedule read_schedule(const std::string& path) {
  if (path.empty()) throw InputError("--schedule is required for bill");
  const fs::path p(path);
  if (p.extension() == ".csv") {
    return Schedule::from_power(
        load_signal_file(p, SignalKind::kGeneric).series.values);
  }
  std::ifstream f(p);
  if (!f) throw InputError("cannot open " + path);
  json doc;
  try {
    f >> doc;
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
  return schedule_from_json(doc.contains("schedule") ? doc["schedule"] : doc);
}

ExitCode cmd_bill(const RunConfig& c, std::ostream& out) {
  if (c.tariff.empty()) throw InputError("--tariff is required for bill");
  const Tariff t = parse_tariff_file(c.tariff);
  const BillBreakdown b = bill(t, read_schedule(c.schedule), period_of(c));
  const fs::path dir = prepare_out(c);
  write_json(dir / "bill.json", to_json(b));
  write_config(dir, c);
  std::vector<std::pair<std::string, std::string>> rows{
      {"energy $", fixed2(b.energy_cost)}};
  for (std::size_t i = 0; i < b.demand_costs.size(); ++i) {
    rows.emplace_back("demand[" + std::to_string(i) + "] $",
                      fixed2(b.demand_costs[i]));
  }
  rows.emplace_back("fixed $", fixed2(b.fixed_cost));
  rows.emplace_back("total $", fixed2(b.total));
  print_table(out, rows);
  return ExitCode::kOk;
}

ExitCode cmd_emit_baseline(const RunConfig& c, std::ostream& out) {
  if (c.steps < 1) throw InputError("--steps must be positive");
  if (!(c.mw >= 0.0) || !std::isfinite(c.mw)) {
    throw InputError("--mw must be finite and non-negative");
  }
  SignalSeries s;
  s.kind = SignalKind::kGeneric;
  s.units = "MW";
  s.region = c.region;
  s.start = std::chrono::sys_days{std::chrono::year{c.year} /
                                  std::chrono::month{unsigned(c.month)} /
                                  std::chrono::day{1}};
  s.values = Eigen::VectorXd::Constant(c.steps, c.mw);
  const fs::path dir = prepare_out(c);
  std::ostringstream csv;
  write_signal_csv(csv, s);
  write_file(dir / "baseline.csv", csv.str());
  print_table(out, {{"steps", std::to_string(c.steps)},
                    {"level MW", fixed2(c.mw)},
                    {"total MWh", fixed2(s.values.sum())},
                    {"output", (dir / "baseline.csv").string()}});
  return ExitCode::kOk;
}

void check_config(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) ==
      kCommands.end()) {
    throw InputError("unknown command '" + c.command + "'");
  }
  if (c.format != "csv" && c.format != "json") {
    throw InputError("--format must be csv or json");
  }
  if (c.month < 1 || c.month > 12) throw InputError("--month must be 1..12");
  if (c.profile_month < 0 || c.profile_month > 12) {
    throw InputError("--profile-month must be 1..12");
  }
  for (const auto* path : {&c.signal, &c.tariff, &c.emissions, &c.baseline,
                           &c.schedule}) {
    if (!path->empty() && !fs::exists(*path)) {
      throw InputError("file not found: " + *path);
    }
  }
}

}  // namespace

json to_json(const RunConfig& c) {
  json doc{{"command", c.command},
           {"signal", c.signal},
           {"signal_kind", c.signal_kind},
           {"tariff", c.tariff},
           {"emissions", c.emissions},
           {"baseline", c.baseline},
           {"schedule", c.schedule},
           {"region", c.region},
           {"year", c.year},
           {"month", c.month},
           {"days", c.days},
           {"profile_month", c.profile_month},
           {"uptime", c.uptime},
           {"uptime_mode", c.uptime_mode},
           {"pc", c.pc},
           {"pc_reference", c.pc_reference},
           {"rte", c.rte},
           {"ec", c.ec ? json(*c.ec) : json(nullptr)},
           {"method", c.method},
           {"lambda", c.lambda},
           {"lambdas", c.lambdas},
           {"u_grid", c.u_grid},
           {"pc_grid", c.pc_grid},
           {"fractions", c.fractions},
           {"scc", c.scc},
           {"rec_low", c.rec_low},
           {"rec_high", c.rec_high},
           {"tolerance", c.tolerance},
           {"steps", c.steps},
           {"mw", c.mw},
           {"out", c.out},
           {"format", c.format},
           {"seed", c.seed}};
  return doc;
}

void apply_json(const json& doc, RunConfig& c) {
  if (!doc.is_object()) throw InputError("config file must be a JSON object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key) && !doc[key].is_null()) {
        doc[key].get_to(field);
      }
    };
    get("command", c.command);
    get("signal", c.signal);
    get("signal_kind", c.signal_kind);
    get("tariff", c.tariff);
    get("emissions", c.emissions);
    get("baseline", c.baseline);
    get("schedule", c.schedule);
    get("region", c.region);
    get("year", c.year);
    get("month", c.month);
    get("days", c.days);
    get("profile_month", c.profile_month);
    get("uptime", c.uptime);
    get("uptime_mode", c.uptime_mode);
    get("pc", c.pc);
    get("pc_reference", c.pc_reference);
    get("rte", c.rte);
    if (doc.contains("ec")) {
      c.ec = doc["ec"].is_null() ? std::nullopt
                                 : std::optional<double>(doc["ec"].get<double>());
    }
    get("method", c.method);
    get("lambda", c.lambda);
    get("lambdas", c.lambdas);
    get("u_grid", c.u_grid);
    get("pc_grid", c.pc_grid);
    get("fractions", c.fractions);
    get("scc", c.scc);
    get("rec_low", c.rec_low);
    get("rec_high", c.rec_high);
    get("tolerance", c.tolerance);
    get("steps", c.steps);
    get("mw", c.mw);
    get("out", c.out);
    get("format", c.format);
    get("seed", c.seed);
  } catch (const json::exception& e) {
    throw InputError(std::string("config file: ") + e.what());
  }
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out) {
  RunConfig c;
  // Config file first, so flags parsed below take precedence.
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    std::string path;
    if (a == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    }
    if (path.empty()) continue;
    std::ifstream f(path);
    if (!f) throw InputError("cannot open config file " + path);
    json doc;
    try {
      f >> doc;
    } catch (const json::exception& e) {
      throw InputError("config file " + path + ": " + e.what());
    }
    apply_json(doc, c);
  }

  CLI::App app{"Upper-bound savings from flexible load operation"};
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags override it");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--signal,--cost", c.signal, "incentive CSV (timestamp,value)");
    sub->add_option("--kind", c.signal_kind, "dam, mef, aef or generic");
    sub->add_option("--tariff", c.tariff, "tariff JSON");
    sub->add_option("--emissions", c.emissions, "emissions factor CSV");
    sub->add_option("--baseline", c.baseline, "baseline MW CSV (default flat 1 MW)");
    sub->add_option("--region", c.region, "region label for the UTC offset");
    sub->add_option("--year", c.year, "billing year");
    sub->add_option("--month", c.month, "billing month 1..12");
    sub->add_option("--days", c.days, "billing days (0 = whole month)");
    sub->add_option("--profile-month", c.profile_month,
                    "replace signals by their month-hour average");
    sub->add_option("--uptime", c.uptime, "uptime fraction in (0,1]");
    sub->add_option("--uptime-mode", c.uptime_mode, "exact, minimum or free");
    sub->add_option("--pc", c.pc, "power capacity in [0,1]");
    sub->add_option("--pc-reference", c.pc_reference, "average or baseline");
    sub->add_option("--rte", c.rte, "round-trip efficiency in (0,1]");
    sub->add_option("--ec", c.ec, "energy capacity cap in [0,1]");
    sub->add_option("--method", c.method, "exact or lagrangian");
    sub->add_option("--lambda", c.lambda, "emissions weight for solve/sweep");
    sub->add_option("--lambdas", c.lambdas, "Pareto weights")->delimiter(',');
    sub->add_option("--u-grid", c.u_grid, "uptime grid")->delimiter(',');
    sub->add_option("--pc-grid", c.pc_grid, "power capacity grid")->delimiter(',');
    sub->add_option("--fraction", c.fractions, "abated fractions")->delimiter(',');
    sub->add_option("--scc", c.scc, "social cost of carbon $/ton");
    sub->add_option("--rec-low", c.rec_low, "REC price low $/MWh");
    sub->add_option("--rec-high", c.rec_high, "REC price high $/MWh");
    sub->add_option("--tolerance", c.tolerance, "RTE bisection tolerance");
    sub->add_option("--schedule", c.schedule, "schedule JSON or CSV for bill");
    sub->add_option("--steps", c.steps, "baseline steps");
    sub->add_option("--mw", c.mw, "baseline level MW");
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--format", c.format, "plot data format: csv or json");
    sub->add_option("--seed", c.seed, "seed recorded with the run");
    sub->add_option("--config", config_path, "JSON config file");
  };
  for (const auto& name : kCommands) add_common(app.add_subcommand(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InputError(e.what());
  }
  const auto subs = app.get_subcommands();
  if (!subs.empty()) c.command = subs.front()->get_name();
  if (c.command.empty()) {
    out << app.help();
    throw InputError("a command is required");
  }
  return c;
}

ExitCode run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    check_config(c);
    if (c.command == "solve") return cmd_solve(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    if (c.command == "pareto") return cmd_pareto(c, out);
    if (c.command == "abatement") return cmd_abatement(c, out);
    if (c.command == "rte-threshold") return cmd_rte(c, out);
    if (c.command == "bill") return cmd_bill(c, out);
    return cmd_emit_baseline(c, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return ExitCode::kInfeasible;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
  } catch (const ConvergenceError& e) {
    err << "no convergence: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    err << "file error: " << e.what() << '\n';
  } catch (const json::exception& e) {
    err << "input error: " << e.what() << '\n';
  }
  return ExitCode::kInputError;
}

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  try {
    const auto config = parse_args(argc, argv, out);
    if (!config) return 0;
    return int(run(*config, out, err));
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return int(ExitCode::kInputError);
  }
}

}  // namespace flexbound::cli
