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

#include <gtest/gtest.h>

#include "flexbound/error.hpp"
#include "flexbound/flexmodel.hpp"

namespace flexbound {
namespace {

FlexSpec day_spec() {
  FlexSpec s = FlexSpec::flat(24);
  return s;
}

TEST(Feasible, FlatScheduleIsFeasible) {
  const FlexSpec s = day_spec();
  const auto r = feasible(Schedule::from_power(s.baseline), s);
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Feasible, HalfUptimeExact) {
  FlexSpec s = day_spec();
  s.uptime = 0.5;
  s.power_capacity = 1.0;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(24);
  p.head(12).setConstant(2.0);
  EXPECT_TRUE(feasible(Schedule::from_power(p), s).feasible);
  p.head(13).setConstant(24.0 / 13);
  const auto r = feasible(Schedule::from_power(p), s);
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.violations.front().constraint, "uptime");
}

TEST(Feasible, AllInOneStepFreeUptime) {
  FlexSpec s = day_spec();
  s.uptime_mode = UptimeMode::kFree;
  s.power_capacity = 1.0;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(24);
  p[5] = 24.0;
  EXPECT_TRUE(feasible(Schedule::from_power(p), s).feasible);
  s.power_capacity = 0.0;
  EXPECT_TRUE(feasible(Schedule::from_power(p), s).feasible);
}

TEST(Feasible, FlagsEnergyAndCapacity) {
  FlexSpec s = day_spec();
  Eigen::VectorXd p = Eigen::VectorXd::Constant(24, 0.5);
  const auto r = feasible(Schedule::from_power(p), s);
  EXPECT_FALSE(r.feasible);
  bool rte = false;
  for (const auto& v : r.violations) rte |= v.constraint == "rte";
  EXPECT_TRUE(rte);

  Eigen::VectorXd q = Eigen::VectorXd::Ones(24);
  q[0] = 1.5;
  q[1] = 0.5;
  const auto r2 = feasible(Schedule::from_power(q), s);
  ASSERT_FALSE(r2.feasible);
  EXPECT_EQ(r2.violations.front().constraint, "power_capacity");
  EXPECT_NEAR(r2.max_violation(), 0.5, 1e-12);
}

TEST(Feasible, EnergyCapCheck) {
  FlexSpec s = day_spec();
  s.uptime_mode = UptimeMode::kFree;
  s.power_capacity = 1.0;
  s.ec_cap = 0.5;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(24);
  p[0] = 24.0;
  const auto r = feasible(Schedule::from_power(p), s);
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.violations.back().constraint, "ec");
}

TEST(Feasible, LengthMismatchThrows) {
  EXPECT_THROW(feasible(Schedule::from_power(Eigen::VectorXd::Ones(3)),
                        day_spec()),
               InputError);
}

TEST(EnergyCapacity, Examples) {
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(24);
  EXPECT_EQ(energy_capacity(b, b), 0.0);
  Eigen::VectorXd one = Eigen::VectorXd::Zero(24);
  one[0] = 24.0;
  EXPECT_DOUBLE_EQ(energy_capacity(one, b), 23.0 / 24.0);
  EXPECT_DOUBLE_EQ(energy_capacity(Eigen::VectorXd(0.5 * b), b), 0.5);
  EXPECT_THROW(energy_capacity(b, Eigen::VectorXd::Zero(24)), InputError);
}

TEST(Realized, UptimeAndPowerCapacity) {
  const FlexSpec s = day_spec();
  const Schedule flat = Schedule::from_power(s.baseline);
  EXPECT_EQ(realized_uptime(flat), 1.0);
  EXPECT_EQ(realized_power_capacity(flat, s), 0.0);

  Eigen::VectorXd p = Eigen::VectorXd::Zero(24);
  p.head(6).setConstant(4.0);
  EXPECT_EQ(realized_uptime(Schedule::from_power(p)), 0.25);

  FlexSpec two = FlexSpec::flat(2);
  Eigen::VectorXd q(2);
  q << 0.5, 1.5;
  EXPECT_DOUBLE_EQ(realized_power_capacity(Schedule::from_power(q), two), 0.5);
  EXPECT_THROW(realized_power_capacity(
                   Schedule::from_power(Eigen::VectorXd::Zero(2)), two),
               InputError);
}

TEST(FlexSpec, ValidationAndOnCounts) {
  FlexSpec s = day_spec();
  s.uptime = 0.0;
  EXPECT_THROW(s.validate(), InputError);
  s.uptime = 0.5;
  s.rte = 1.2;
  EXPECT_THROW(s.validate(), InputError);
  s.rte = 1.0;
  s.baseline = Eigen::VectorXd::Zero(24);
  EXPECT_THROW(s.validate(), InputError);

  FlexSpec e = FlexSpec::flat(10);
  e.uptime = 0.34;
  EXPECT_EQ(e.admissible_on_counts(), std::vector<int>{3});
  e.uptime_mode = UptimeMode::kMinimum;
  EXPECT_EQ(e.admissible_on_counts().front(), 4);
  EXPECT_EQ(e.admissible_on_counts().back(), 10);
  e.uptime_mode = UptimeMode::kFree;
  EXPECT_EQ(e.admissible_on_counts().size(), 10u);
}

TEST(FlexSpec, JsonRoundTrip) {
  FlexSpec s = day_spec();
  s.uptime = 0.75;
  s.uptime_mode = UptimeMode::kMinimum;
  s.pc_reference = PcReference::kBaseline;
  s.rte = 0.85;
  s.ec_cap = 0.4;
  const FlexSpec back = flex_spec_from_json(to_json(s));
  EXPECT_EQ(to_json(back), to_json(s));
  const Schedule sch = Schedule::from_power(Eigen::VectorXd::LinSpaced(4, 0, 3));
  const Schedule sback = schedule_from_json(to_json(sch));
  EXPECT_TRUE(sback.power == sch.power);
  EXPECT_TRUE((sback.status == sch.status).all());
}

}  // namespace
}  // namespace flexbound
