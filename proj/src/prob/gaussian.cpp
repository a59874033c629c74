#include "lreach/prob/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lreach/prob/chi2.hpp"

namespace lreach::prob {

GaussianDisturbance::GaussianDisturbance(Eigen::VectorXd mean,
                                         Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size())
    throw std::invalid_argument("gaussian: dimension mismatch");
  if (!mean_.allFinite() || !cov_.allFinite())
    throw std::invalid_argument("gaussian: non-finite parameters");
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("gaussian: covariance not symmetric");
  cov_ = 0.5 * (cov_ + cov_.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("gaussian: covariance not positive definite");
  chol_ = llt.matrixL();
  if (chol_.diagonal().minCoeff() <= 0.0)
    throw std::invalid_argument("gaussian: covariance not positive definite");
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  Eigen::MatrixXd off = cov_;
  off.diagonal().setZero();
  diagonal_ = off.cwiseAbs().maxCoeff() == 0.0;
}

double gaussian_pdf(const GaussianDisturbance& d, const Eigen::VectorXd& s) {
  if (s.size() != d.dim()) throw std::invalid_argument("gaussian_pdf: dimension mismatch");
  if (!s.allFinite()) throw std::invalid_argument("gaussian_pdf: non-finite point");
  const Eigen::VectorXd z =
      d.chol_.triangularView<Eigen::Lower>().solve(s - d.mean_);
  const double n = d.dim();
  return std::exp(-0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * d.log_det_ -
                  0.5 * z.squaredNorm());
}

geom::Ellipsoid disturbance_level_set(const GaussianDisturbance& d, double p) {
  const double r2 = chi2_inv(d.dim(), p);
  return geom::Ellipsoid(d.mean(), d.covariance(), r2);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace lreach::prob
