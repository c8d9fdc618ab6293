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

#pragma once

#include <Eigen/Dense>

namespace flexbound::detail {

// min cost.x  s.t.  a_eq x = b_eq,  a_le x <= b_le,  lower <= x <= upper.
// Lower bounds must be finite; upper may be +inf.
struct LinearProgram {
  Eigen::VectorXd cost;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd a_le;
  Eigen::VectorXd b_le;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LpSolution {
  bool feasible = false;
  Eigen::VectorXd x;
  double value = 0.0;
};

// Dense two-phase tableau simplex with Bland's rule. Meant for the small
// programs of the enumeration oracle, not for production sizes.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace flexbound::detail
