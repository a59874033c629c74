#pragma once

#include <Eigen/Dense>

namespace lreach::geom {

/// {s : (s - center)' shape^{-1} (s - center) <= radius2}.
///
/// shape must be symmetric (within 1e-10) and positive definite; radius2 = 0
/// is the singleton {center}.
class Ellipsoid {
 public:
  Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape, double radius2);

  static Ellipsoid ball(const Eigen::VectorXd& center, double radius);

  int dim() const { return static_cast<int>(center_.size()); }
  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& shape() const { return shape_; }
  double radius2() const { return radius2_; }

  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
  /// Quadratic form (x - center)' shape^{-1} (x - center).
  double mahalanobis2(const Eigen::VectorXd& x) const;
  /// Lower-triangular Cholesky factor of shape.
  const Eigen::MatrixXd& shape_factor() const { return chol_; }

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd shape_;
  Eigen::MatrixXd chol_;
  double radius2_;
};

}  // namespace lreach::geom
