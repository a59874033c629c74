#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lreach::geom {

/// maximize c'x subject to A x <= b, x free.
struct LpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Eigen::VectorXd x;  // populated when status == kOptimal
  double value = 0.0;

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// Dense two-phase simplex: Dantzig pricing with a Harris ratio test,
/// falling back to Bland's rule for good once progress stalls.
///
/// The primal is solved through its dual, min b'y s.t. A'y = c, y >= 0, which
/// has one row per primal variable. The problems met here have few variables
/// and many constraints, so the dual tableau is small. The primal point is the
/// simplex multiplier vector of the optimal dual basis; dual optimality is
/// primal feasibility (A x <= b within kLpFeasibilityTol).
LpResult lp_solve(const LpProblem& problem);

inline constexpr double kLpFeasibilityTol = 1e-9;

namespace detail {

enum class StandardStatus { kOptimal, kInfeasible, kUnbounded };

struct StandardResult {
  StandardStatus status = StandardStatus::kInfeasible;
  Eigen::VectorXd y;     // primal of the standard-form problem
  Eigen::VectorXd duals; // multipliers pi, reduced costs = cost - M'pi >= 0
  double value = 0.0;
  std::vector<int> basis;  // basic column per row, -1 for redundant rows
};

/// minimize cost'y subject to M y = rhs, y >= 0.
StandardResult solve_standard_form(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& rhs,
                                   const Eigen::VectorXd& cost);

}  // namespace detail

}  // namespace lreach::geom
