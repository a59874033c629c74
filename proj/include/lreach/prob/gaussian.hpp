#pragma once

#include <Eigen/Dense>

#include "lreach/geom/ellipsoid.hpp"

namespace lreach::prob {

/// N(mean, covariance) on R^n; the covariance must admit a Cholesky factor.
class GaussianDisturbance {
 public:
  GaussianDisturbance(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  /// Lower Cholesky factor L with L L' = covariance.
  const Eigen::MatrixXd& factor() const { return chol_; }
  bool diagonal() const { return diagonal_; }

  /// mean + L z for a vector of standard normals z.
  Eigen::VectorXd transform(const Eigen::VectorXd& standard) const {
    return mean_ + chol_ * standard;
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  bool diagonal_ = false;

  friend double gaussian_pdf(const GaussianDisturbance&, const Eigen::VectorXd&);
};

/// (2 pi)^{-n/2} |Sigma|^{-1/2} exp(-(s - mu)' Sigma^{-1} (s - mu) / 2).
double gaussian_pdf(const GaussianDisturbance& d, const Eigen::VectorXd& s);

/// Ellipsoid {s : (s - mu)' Sigma^{-1} (s - mu) <= chi2_inv(n, p)} holding
/// Gaussian mass exactly p.
geom::Ellipsoid disturbance_level_set(const GaussianDisturbance& d, double p);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace lreach::prob
