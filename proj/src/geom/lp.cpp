#include "lreach/geom/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <fstream>
#include <iomanip>

namespace lreach::geom {
namespace detail {
namespace {

constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-9;

enum class RunStatus { kOptimal, kUnbounded };

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& M, const Eigen::VectorXd& rhs)
      : rows_(static_cast<int>(M.rows())),
        cols_(static_cast<int>(M.cols())),
        t_(Eigen::MatrixXd::Zero(rows_, cols_ + rows_ + 1)),
        sign_(rows_),
        basis_(rows_) {
    for (int i = 0; i < rows_; ++i) {
      sign_[i] = rhs[i] < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(cols_) = sign_[i] * M.row(i);
      t_(i, cols_ + i) = 1.0;
      t_(i, rhs_col()) = sign_[i] * rhs[i];
      basis_[i] = cols_ + i;
    }
  }

  int rhs_col() const { return cols_ + rows_; }

  // Dantzig pricing with a Harris ratio test. After a run of degenerate
  // pivots it switches to Bland's rule, which cannot cycle.
  RunStatus run(const Eigen::VectorXd& cost, int allowed_cols) {
    Eigen::RowVectorXd z = cost.transpose();
    for (int i = 0; i < rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb != 0.0) z -= cb * t_.row(i).head(cols_ + rows_);
    }
    const int max_iter = 100 * (rows_ + cols_) + 1000;
    // Pivots that fail to improve on the best objective so far count as
    // stalled; after enough of them Bland's rule stays on for the run.
    int degenerate = 0;
    double best_obj = objective(cost);
    bool bland = false;
    std::vector<char> rejected(allowed_cols, 0);
    for (int iter = 0; iter < max_iter; ++iter) {
      bland = bland || degenerate >= 25;
      int q = -1;
      for (int j = 0; j < allowed_cols; ++j) {
        if (rejected[j] || z[j] >= -kReducedCostTol) continue;
        if (q < 0 || (!bland && z[j] < z[q])) q = j;
        if (bland) break;
      }
      if (q < 0) return RunStatus::kOptimal;

      const int p = leaving_row(q, bland);
      if (p < 0) {
        // A genuine ray has every entry <= 0; tiny positive entries are
        // noise, so the column is set aside instead of trusted.
        if (t_.col(q).maxCoeff() <= 0.0) return RunStatus::kUnbounded;
        rejected[q] = 1;
        continue;
      }
      pivot(p, q);
      const double obj = objective(cost);
      if (obj < best_obj - 1e-12 * (1.0 + std::abs(best_obj))) {
        best_obj = obj;
        degenerate = 0;
      } else {
        ++degenerate;
      }
      std::fill(rejected.begin(), rejected.end(), 0);
      const double zq = z[q];
      z -= zq * t_.row(p).head(cols_ + rows_);
      z[q] = 0.0;
    }
    throw std::runtime_error("LP iteration limit exceeded");
  }

  double objective(const Eigen::VectorXd& cost) const {
    double v = 0.0;
    for (int i = 0; i < rows_; ++i) v += cost[basis_[i]] * t_(i, rhs_col());
    return v;
  }

  // Harris two-pass test: bound the step with rows relaxed by the pivot
  // tolerance, then take the largest pivot among rows within that bound.
  // Bland mode uses the exact minimum ratio with lowest-index ties.
  int leaving_row(int q, bool bland) const {
    int p = -1;
    if (bland) {
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < rows_; ++i) {
        const double a = t_(i, q);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(0.0, t_(i, rhs_col())) / a;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis_[i] < basis_[p])) {
          best = ratio;
          p = i;
        }
      }
      return p;
    }
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows_; ++i) {
      const double a = t_(i, q);
      if (a <= kPivotTol) continue;
      bound = std::min(bound, (std::max(0.0, t_(i, rhs_col())) + kPivotTol) / a);
    }
    if (!std::isfinite(bound)) return -1;
    for (int i = 0; i < rows_; ++i) {
      const double a = t_(i, q);
      if (a <= kPivotTol) continue;
      if (std::max(0.0, t_(i, rhs_col())) / a > bound) continue;
      if (p < 0 || a > t_(p, q)) p = i;
    }
    return p;
  }

  void pivot(int p, int q) {
    t_.row(p) /= t_(p, q);
    for (int i = 0; i < rows_; ++i) {
      if (i == p) continue;
      const double f = t_(i, q);
      if (f != 0.0) t_.row(i) -= f * t_.row(p);
    }
    basis_[p] = q;
  }

  // Pivots artificial variables out of the basis; rows where that is
  // impossible are linearly dependent and keep their artificial at zero.
  void drive_out_artificials() {
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < cols_) continue;
      int q = -1;
      double best = kPivotTol;
      for (int j = 0; j < cols_; ++j) {
        const double a = std::abs(t_(i, j));
        if (a > best) {
          best = a;
          q = j;
        }
      }
      if (q >= 0) {
        pivot(i, q);
      } else {
        t_.row(i).head(cols_).setZero();
      }
    }
  }

  double artificial_sum() const {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i)
      if (basis_[i] >= cols_) s += t_(i, rhs_col());
    return s;
  }

  StandardResult extract(const Eigen::VectorXd& cost) const {
    StandardResult r;
    r.status = StandardStatus::kOptimal;
    r.y = Eigen::VectorXd::Zero(cols_);
    r.duals = Eigen::VectorXd::Zero(rows_);
    r.basis.assign(rows_, -1);
    for (int i = 0; i < rows_; ++i) {
      const int b = basis_[i];
      if (b >= 0 && b < cols_) {
        r.y[b] = std::max(0.0, t_(i, rhs_col()));
        r.basis[i] = b;
        const double cb = cost[b];
        if (cb != 0.0)
          r.duals += cb * t_.row(i).segment(cols_, rows_).transpose();
      }
    }
    for (int i = 0; i < rows_; ++i) r.duals[i] *= sign_[i];
    r.value = cost.dot(r.y);
    return r;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  Eigen::MatrixXd t_;
  std::vector<double> sign_;
  std::vector<int> basis_;
};

}  // namespace

StandardResult solve_standard_form(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& rhs,
                                   const Eigen::VectorXd& cost) {
  if (M.rows() != rhs.size() || M.cols() != cost.size())
    throw std::invalid_argument("standard form: dimension mismatch");
  Tableau tab(M, rhs);
  const int n = tab.cols();
  const int rows = tab.rows();

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + rows);
  phase1.tail(rows).setOnes();
  tab.run(phase1, n + rows);
  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  if (rows > 0 && tab.artificial_sum() > 1e-9 * scale) {
    StandardResult r;
    r.status = StandardStatus::kInfeasible;
    return r;
  }
  tab.drive_out_artificials();

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + rows);
  phase2.head(n) = cost;
  if (tab.run(phase2, n) == RunStatus::kUnbounded) {
    StandardResult r;
    r.status = StandardStatus::kUnbounded;
    return r;
  }
  return tab.extract(phase2);
}

}  // namespace detail

namespace {

double max_violation(const LpProblem& p, const Eigen::VectorXd& x) {
  if (p.A.rows() == 0) return 0.0;
  return (p.A * x - p.b).maxCoeff();
}

}  // namespace

LpResult lp_solve(const LpProblem& p) {
  const Eigen::Index d = p.A.cols();
  const Eigen::Index m = p.A.rows();
  if (p.c.size() != d || p.b.size() != m)
    throw std::invalid_argument("lp_solve: dimension mismatch");
  if (!p.A.allFinite() || !p.b.allFinite() || !p.c.allFinite())
    throw std::invalid_argument("lp_solve: non-finite data");

  LpResult out;
  if (m == 0) {
    if (d == 0 || p.c.cwiseAbs().maxCoeff() == 0.0) {
      out.status = LpStatus::kOptimal;
      out.x = Eigen::VectorXd::Zero(d);
    } else {
      out.status = LpStatus::kUnbounded;
    }
    return out;
  }

  const Eigen::MatrixXd At = p.A.transpose();
  const auto dual = detail::solve_standard_form(At, p.c, p.b);

  if (dual.status == detail::StandardStatus::kOptimal) {
    Eigen::VectorXd x = dual.duals;
    // Re-solve the active system directly for a cleaner vertex.
    std::vector<int> active;
    for (int b : dual.basis)
      if (b >= 0) active.push_back(b);
    if (static_cast<Eigen::Index>(active.size()) == d) {
      Eigen::MatrixXd AB(d, d);
      Eigen::VectorXd bB(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        AB.row(i) = p.A.row(active[i]);
        bB[i] = p.b[active[i]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(AB);
      if (lu.isInvertible()) {
        Eigen::VectorXd xs = lu.solve(bB);
        if (xs.allFinite() && max_violation(p, xs) <= max_violation(p, x))
          x = xs;
      }
    }
    out.status = LpStatus::kOptimal;
    out.value = p.c.dot(x);
    out.x = std::move(x);
    return out;
  }
  if (dual.status == detail::StandardStatus::kUnbounded) {
    out.status = LpStatus::kInfeasible;
    return out;
  }

  // Dual infeasible: primal is infeasible or unbounded. Farkas certificate:
  // y >= 0, A'y = 0, sum(y) = 1, b'y < 0 exists iff the primal is infeasible.
  Eigen::MatrixXd M(d + 1, m);
  M.topRows(d) = At;
  M.row(d).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs[d] = 1.0;
  const auto farkas = detail::solve_standard_form(M, rhs, p.b);
  if (farkas.status == detail::StandardStatus::kOptimal &&
      farkas.value < -kLpFeasibilityTol) {
    out.status = LpStatus::kInfeasible;
  } else {
    out.status = LpStatus::kUnbounded;
  }
  return out;
}

}  // namespace lreach::geom
