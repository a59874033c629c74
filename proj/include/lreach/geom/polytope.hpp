#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lreach::geom {

/// Convex polyhedron {x : A x <= b}.
///
/// Rows are scaled to unit-norm normals on construction. Rows with a zero
/// normal are dropped when b >= 0 and mark the set empty when b < 0. The
/// dimension may be zero only for the result of slicing every coordinate.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b);

  static HPolytope empty(int dim);
  static HPolytope box(const Eigen::VectorXd& lower,
                       const Eigen::VectorXd& upper);
  /// Whole space (no constraints).
  static HPolytope universe(int dim);

  int dim() const { return dim_; }
  int num_facets() const { return static_cast<int>(b_.size()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::VectorXd& b() const { return b_; }

  /// True when construction met an infeasible zero-normal row. A set can
  /// still be empty without this flag; see is_empty().
  bool marked_empty() const { return marked_empty_; }

 private:
  int dim_ = 0;
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  bool marked_empty_ = false;
};

/// Convex hull of a finite point list. No points means the empty set.
class VPolytope {
 public:
  VPolytope() = default;
  explicit VPolytope(int dim) : dim_(dim) {}
  VPolytope(int dim, std::vector<Eigen::VectorXd> points);

  static VPolytope singleton(const Eigen::VectorXd& point);
  static VPolytope box(const Eigen::VectorXd& lower,
                       const Eigen::VectorXd& upper);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  bool empty() const { return points_.empty(); }
  const std::vector<Eigen::VectorXd>& points() const { return points_; }

 private:
  int dim_ = 0;
  std::vector<Eigen::VectorXd> points_;
};

}  // namespace lreach::geom
