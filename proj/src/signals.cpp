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

#include "flexbound/signals.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flexbound/error.hpp"

namespace flexbound {
namespace {

using std::chrono::hours;
using std::chrono::seconds;

constexpr int kMaxInterpolatedHours = 2;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\xef' ||
                        s.front() == '\xbb' || s.front() == '\xbf')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

int parse_int(std::string_view text, std::string_view what) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("invalid " + std::string(what) + " in timestamp");
  }
  return value;
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(value)) {
    throw InputError("unparseable value '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::kMef: return "MEF";
    case SignalKind::kAef: return "AEF";
    case SignalKind::kDamPrice: return "DAM-price";
    case SignalKind::kGeneric: return "generic";
  }
  return "generic";
}

SignalKind signal_kind_from_string(std::string_view name) {
  if (name == "MEF" || name == "mef") return SignalKind::kMef;
  if (name == "AEF" || name == "aef") return SignalKind::kAef;
  if (name == "DAM-price" || name == "dam" || name == "DAM") {
    return SignalKind::kDamPrice;
  }
  if (name == "generic") return SignalKind::kGeneric;
  throw InputError("unknown signal kind '" + std::string(name) + "'");
}

std::string_view default_units(SignalKind kind) {
  switch (kind) {
    case SignalKind::kMef:
    case SignalKind::kAef: return "kgCO2/MWh";
    case SignalKind::kDamPrice: return "$/MWh";
    case SignalKind::kGeneric: return "";
  }
  return "";
}

bool is_emissions(SignalKind kind) {
  return kind == SignalKind::kMef || kind == SignalKind::kAef;
}

int utc_offset_hours(std::string_view region) {
  struct Entry {
    std::string_view name;
    int offset;
  };
  static constexpr std::array<Entry, 9> kRegions{{{"CAISO", -8},
                                                  {"ERCOT", -6},
                                                  {"SPP", -6},
                                                  {"MISO", -6},
                                                  {"NYISO", -5},
                                                  {"PJM", -5},
                                                  {"ISONE", -5},
                                                  {"ISO-NE", -5},
                                                  {"UTC", 0}}};
  for (const auto& e : kRegions) {
    if (e.name == region) return e.offset;
  }
  if (region.size() > 3 && region.substr(0, 3) == "UTC") {
    std::string_view rest = region.substr(3);
    int sign = 1;
    if (rest.front() == '+') {
      rest.remove_prefix(1);
    } else if (rest.front() == '-') {
      sign = -1;
      rest.remove_prefix(1);
    }
    const int h = parse_int(rest, "region offset");
    if (h > 14) throw InputError("region offset out of range");
    return sign * h;
  }
  throw InputError("unknown region '" + std::string(region) +
                   "' (use an ISO name or UTC+HH)");
}

// Accepts YYYY-MM-DD[T| ]HH:MM[:SS][Z|+HH:MM|-HH:MM]; no zone means UTC.
TimePoint parse_timestamp(std::string_view text) {
  text = trim(text);
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' ||
      (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    throw InputError("bad timestamp '" + std::string(text) + "'");
  }
  const int y = parse_int(text.substr(0, 4), "year");
  const int mo = parse_int(text.substr(5, 2), "month");
  const int d = parse_int(text.substr(8, 2), "day");
  const int hh = parse_int(text.substr(11, 2), "hour");
  const int mi = parse_int(text.substr(14, 2), "minute");
  int ss = 0;
  std::string_view zone = text.substr(16);
  if (!zone.empty() && zone.front() == ':') {
    if (zone.size() < 3) throw InputError("bad seconds in timestamp");
    ss = parse_int(zone.substr(1, 2), "second");
    zone.remove_prefix(3);
    // Fractional seconds are not part of an hourly grid.
    if (!zone.empty() && zone.front() == '.') {
      throw InputError("fractional seconds are not supported");
    }
  }
  int offset_minutes = 0;
  if (zone == "Z" || zone.empty()) {
  } else if ((zone.front() == '+' || zone.front() == '-') &&
             zone.size() == 6 && zone[3] == ':') {
    const int sign = zone.front() == '-' ? -1 : 1;
    offset_minutes = sign * (parse_int(zone.substr(1, 2), "zone hour") * 60 +
                             parse_int(zone.substr(4, 2), "zone minute"));
  } else {
    throw InputError("bad zone suffix in timestamp '" + std::string(text) +
                     "'");
  }
  const std::chrono::year_month_day ymd{std::chrono::year{y},
                                        std::chrono::month{unsigned(mo)},
                                        std::chrono::day{unsigned(d)}};
  if (!ymd.ok() || hh > 23 || mi > 59 || ss > 59) {
    throw InputError("timestamp out of range '" + std::string(text) + "'");
  }
  return std::chrono::sys_days{ymd} + hours(hh) + std::chrono::minutes(mi) +
         seconds(ss) - std::chrono::minutes(offset_minutes);
}

std::string format_timestamp(TimePoint t) {
  const auto day = std::chrono::floor<std::chrono::days>(t);
  const std::chrono::year_month_day ymd{day};
  const auto tod = std::chrono::hh_mm_ss{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                int(tod.hours().count()), int(tod.minutes().count()),
                int(tod.seconds().count()));
  return buf;
}

LoadedSignal load_signal(std::istream& in, SignalKind kind, std::string units,
                         std::string region) {
  utc_offset_hours(region);  // validates the label
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty signal file");
  {
    std::string header(trim(line));
    header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
    if (header != "timestamp,value") {
      throw InputError("signal CSV header must be 'timestamp,value'");
    }
  }
  std::vector<TimePoint> stamps;
  std::vector<double> raw;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos ||
        row.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) +
                       ": expected two columns");
    }
    try {
      stamps.push_back(parse_timestamp(row.substr(0, comma)));
      raw.push_back(parse_double(row.substr(comma + 1)));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (stamps.empty()) throw InputError("signal file has no rows");

  LoadedSignal out;
  std::vector<double> values{raw.front()};
  for (std::size_t i = 1; i < stamps.size(); ++i) {
    const auto step = stamps[i] - stamps[i - 1];
    if (step <= seconds(0)) {
      throw InputError("timestamps not strictly increasing at row " +
                       std::to_string(i + 1));
    }
    if (step % hours(1) != seconds(0)) {
      throw InputError("non-hourly spacing at row " + std::to_string(i + 1));
    }
    const auto gap = std::chrono::duration_cast<hours>(step).count();
    if (gap - 1 > kMaxInterpolatedHours) {
      throw InputError("gap of " + std::to_string(gap - 1) +
                       " missing hours at row " + std::to_string(i + 1));
    }
    for (long j = 1; j < gap; ++j) {
      const double w = double(j) / double(gap);
      out.interpolated.push_back(Eigen::Index(values.size()));
      values.push_back((1.0 - w) * raw[i - 1] + w * raw[i]);
    }
    values.push_back(raw[i]);
  }

  out.series.kind = kind;
  out.series.region = std::move(region);
  out.series.units =
      units.empty() ? std::string(default_units(kind)) : std::move(units);
  out.series.start = stamps.front();
  out.series.values =
      Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
  if (is_emissions(kind) && (out.series.values.array() < 0.0).any()) {
    throw InputError("negative emissions factor in signal");
  }
  return out;
}

LoadedSignal load_signal_file(const std::filesystem::path& path,
                              SignalKind kind, std::string units,
                              std::string region) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open signal file " + path.string());
  try {
    return load_signal(in, kind, std::move(units), std::move(region));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_signal_csv(std::ostream& out, const SignalSeries& series) {
  out << "timestamp,value\n";
  char buf[40];
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", series.values[i]);
    out << format_timestamp(series.timestamp(i)) << ',' << buf << '\n';
  }
}

nlohmann::json to_json(const SignalSeries& series) {
  nlohmann::json doc;
  doc["kind"] = std::string(to_string(series.kind));
  doc["region"] = series.region;
  doc["units"] = series.units;
  doc["start"] = format_timestamp(series.start);
  doc["values"] = std::vector<double>(series.values.data(),
                                      series.values.data() + series.size());
  return doc;
}

SignalSeries signal_from_json(const nlohmann::json& doc) {
  try {
    SignalSeries s;
    s.kind = signal_kind_from_string(doc.at("kind").get<std::string>());
    s.region = doc.value("region", std::string("UTC"));
    utc_offset_hours(s.region);
    s.units = doc.value("units", std::string(default_units(s.kind)));
    s.start = parse_timestamp(doc.at("start").get<std::string>());
    const auto v = doc.at("values").get<std::vector<double>>();
    s.values = Eigen::Map<const Eigen::VectorXd>(v.data(), Eigen::Index(v.size()));
    if (is_emissions(s.kind) && (s.values.array() < 0.0).any()) {
      throw InputError("negative emissions factor in signal");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("signal JSON: ") + e.what());
  }
}

HourlyProfile month_hour_average(const SignalSeries& series, int month) {
  if (month < 1 || month > 12) throw InputError("month must be in 1..12");
  const auto offset = hours(utc_offset_hours(series.region));
  HourlyProfile profile;
  profile.month = month;
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    const TimePoint local = series.timestamp(i) + offset;
    const auto day = std::chrono::floor<std::chrono::days>(local);
    const std::chrono::year_month_day ymd{day};
    if (unsigned(ymd.month()) != unsigned(month)) continue;
    const auto h = std::chrono::duration_cast<hours>(local - day).count();
    profile.values[h] += series.values[i];
    ++profile.count[std::size_t(h)];
  }
  for (int h = 0; h < 24; ++h) {
    if (profile.count[std::size_t(h)] == 0) {
      throw InputError("month " + std::to_string(month) +
                       " is not fully covered by the series (hour " +
                       std::to_string(h) + " missing)");
    }
    profile.values[h] /= profile.count[std::size_t(h)];
  }
  return profile;
}

Eigen::VectorXd broadcast(const HourlyProfile& profile, int days) {
  if (days < 1) throw InputError("broadcast needs at least one day");
  return profile.values.replicate(days, 1);
}

}  // namespace flexbound
