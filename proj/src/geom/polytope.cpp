#include "lreach/geom/polytope.hpp"

#include <cmath>
#include <stdexcept>

namespace lreach::geom {

HPolytope::HPolytope(Eigen::MatrixXd A, Eigen::VectorXd b)
    : dim_(static_cast<int>(A.cols())) {
  if (A.rows() != b.size())
    throw std::invalid_argument("HPolytope: A and b row counts differ");
  if (!A.allFinite() || !b.allFinite())
    throw std::invalid_argument("HPolytope: non-finite data");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double n = A.row(i).norm();
    if (n < 1e-12) {
      if (b[i] < 0.0) marked_empty_ = true;
      continue;
    }
    keep.push_back(i);
  }
  if (marked_empty_) {
    A_.resize(0, dim_);
    b_.resize(0);
    return;
  }
  A_.resize(static_cast<Eigen::Index>(keep.size()), dim_);
  b_.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const double n = A.row(keep[k]).norm();
    A_.row(k) = A.row(keep[k]) / n;
    b_[k] = b[keep[k]] / n;
  }
}

HPolytope HPolytope::empty(int dim) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, dim);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(1, -1.0);
  return HPolytope(std::move(A), std::move(b));
}

HPolytope HPolytope::universe(int dim) {
  return HPolytope(Eigen::MatrixXd::Zero(0, dim), Eigen::VectorXd::Zero(0));
}

HPolytope HPolytope::box(const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper) {
  const auto n = lower.size();
  if (upper.size() != n) throw std::invalid_argument("box: dimension mismatch");
  Eigen::MatrixXd A(2 * n, n);
  A << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b(2 * n);
  b << upper, -lower;
  return HPolytope(std::move(A), std::move(b));
}

VPolytope::VPolytope(int dim, std::vector<Eigen::VectorXd> points)
    : dim_(dim), points_(std::move(points)) {
  for (const auto& p : points_) {
    if (p.size() != dim_)
      throw std::invalid_argument("VPolytope: point dimension mismatch");
    if (!p.allFinite()) throw std::invalid_argument("VPolytope: non-finite point");
  }
}

VPolytope VPolytope::singleton(const Eigen::VectorXd& point) {
  return VPolytope(static_cast<int>(point.size()), {point});
}

VPolytope VPolytope::box(const Eigen::VectorXd& lower,
                         const Eigen::VectorXd& upper) {
  const int n = static_cast<int>(lower.size());
  if (upper.size() != n) throw std::invalid_argument("box: dimension mismatch");
  std::vector<Eigen::VectorXd> pts;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? upper[i] : lower[i];
    pts.push_back(std::move(p));
  }
  return VPolytope(n, std::move(pts));
}

}  // namespace lreach::geom
