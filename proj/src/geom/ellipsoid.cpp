#include "lreach/geom/ellipsoid.hpp"

#include <cmath>
#include <stdexcept>

namespace lreach::geom {

Ellipsoid::Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape,
                     double radius2)
    : center_(std::move(center)), shape_(std::move(shape)), radius2_(radius2) {
  if (shape_.rows() != center_.size() || shape_.cols() != center_.size())
    throw std::invalid_argument("ellipsoid: dimension mismatch");
  if (!center_.allFinite() || !shape_.allFinite() || !std::isfinite(radius2_))
    throw std::invalid_argument("ellipsoid: non-finite data");
  if (radius2_ < 0.0) throw std::invalid_argument("ellipsoid: radius2 < 0");
  if ((shape_ - shape_.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("ellipsoid: shape matrix not symmetric");
  shape_ = 0.5 * (shape_ + shape_.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(shape_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("ellipsoid: shape matrix not positive definite");
  chol_ = llt.matrixL();
  if (chol_.diagonal().minCoeff() <= 0.0)
    throw std::invalid_argument("ellipsoid: shape matrix not positive definite");
}

Ellipsoid Ellipsoid::ball(const Eigen::VectorXd& center, double radius) {
  const auto n = center.size();
  return Ellipsoid(center, Eigen::MatrixXd::Identity(n, n), radius * radius);
}

double Ellipsoid::mahalanobis2(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd z =
      chol_.triangularView<Eigen::Lower>().solve(x - center_);
  return z.squaredNorm();
}

bool Ellipsoid::contains(const Eigen::VectorXd& x, double tol) const {
  return mahalanobis2(x) <= radius2_ + tol;
}

}  // namespace lreach::geom
