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

#include "dense_lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace flexbound::detail {
namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  // Rows 0..m-1 are constraints, row m is the objective; column `cols` is
  // the right-hand side.
  Tableau(Eigen::MatrixXd t, std::vector<int> basis)
      : t_(std::move(t)), basis_(std::move(basis)) {}

  // Minimizes the objective row over the first `usable` columns. Returns
  // false when unbounded.
  bool optimize(int usable) {
    const int m = int(basis_.size());
    const int rhs = int(t_.cols()) - 1;
    for (int guard = 0; guard < 50000; ++guard) {
      int enter = -1;
      for (int j = 0; j < usable; ++j) {
        if (t_(m, j) < -1e-10) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t_(i, enter) > kPivotTol) {
          const double ratio = t_(i, rhs) / t_(i, enter);
          if (ratio < best - 1e-13 ||
              (ratio <= best + 1e-13 && leave >= 0 && basis_[std::size_t(i)] < basis_[std::size_t(leave)])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i == row) continue;
      const double f = t_(i, col);
      if (f != 0.0) t_.row(i) -= f * t_.row(row);
    }
    basis_[std::size_t(row)] = col;
  }

  Eigen::MatrixXd& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  const int n = int(lp.cost.size());
  const Eigen::VectorXd& lower = lp.lower;

  // Shift x = lower + y and collect rows of the form row.y (=|<=) rhs.
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  std::vector<bool> is_le;
  for (int i = 0; i < lp.a_eq.rows(); ++i) {
    rows.push_back(lp.a_eq.row(i).transpose());
    rhs.push_back(lp.b_eq[i] - lp.a_eq.row(i).dot(lower));
    is_le.push_back(false);
  }
  for (int i = 0; i < lp.a_le.rows(); ++i) {
    rows.push_back(lp.a_le.row(i).transpose());
    rhs.push_back(lp.b_le[i] - lp.a_le.row(i).dot(lower));
    is_le.push_back(true);
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
      r[j] = 1.0;
      rows.push_back(r);
      rhs.push_back(lp.upper[j] - lower[j]);
      is_le.push_back(true);
    }
  }
  const int m = int(rows.size());
  int slacks = 0;
  for (bool le : is_le) slacks += le;
  const int cols = n + slacks + m;  // structural, slack, artificial
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0, s = 0; i < m; ++i) {
    t.row(i).head(n) = rows[std::size_t(i)].transpose();
    if (is_le[std::size_t(i)]) t(i, n + s++) = 1.0;
    t(i, cols) = rhs[std::size_t(i)];
    if (t(i, cols) < 0.0) t.row(i) *= -1.0;
    t(i, n + slacks + i) = 1.0;
    basis[std::size_t(i)] = n + slacks + i;
  }
  // Phase one: minimize the sum of artificials.
  for (int i = 0; i < m; ++i) t.row(m) -= t.row(i);
  for (int i = 0; i < m; ++i) t(m, n + slacks + i) = 0.0;

  Tableau tab(std::move(t), std::move(basis));
  tab.optimize(n + slacks);
  Eigen::MatrixXd& d = tab.data();
  LpSolution out;
  const double scale = 1.0 + Eigen::Map<const Eigen::VectorXd>(rhs.data(), m)
                                 .cwiseAbs()
                                 .maxCoeff();
  if (m > 0 && -d(m, cols) > 1e-9 * scale) return out;

  // Drive artificials out of the basis.
  for (int i = 0; i < m; ++i) {
    if (tab.basis()[std::size_t(i)] < n + slacks) continue;
    for (int j = 0; j < n + slacks; ++j) {
      if (std::abs(d(i, j)) > kPivotTol) {
        tab.pivot(i, j);
        break;
      }
    }
  }
  // Phase two objective.
  d.row(m).setZero();
  d.row(m).head(n) = lp.cost.transpose();
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis()[std::size_t(i)];
    if (b < n + slacks && d(m, b) != 0.0) d.row(m) -= d(m, b) * d.row(i);
  }
  if (!tab.optimize(n + slacks)) return out;

  out.feasible = true;
  out.x = lower;
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis()[std::size_t(i)];
    if (b < n) out.x[b] += d(i, cols);
  }
  out.value = lp.cost.dot(out.x);
  return out;
}

}  // namespace flexbound::detail
