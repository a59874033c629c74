#include "lreach/systems/expm.hpp"

#include <cmath>
#include <stdexcept>

namespace lreach::systems {

Eigen::MatrixXd expm(const Eigen::MatrixXd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("expm: matrix not square");
  if (!M.allFinite()) throw std::invalid_argument("expm: non-finite entries");
  const int n = static_cast<int>(M.rows());
  const double norm = M.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Eigen::MatrixXd X = M / std::ldexp(1.0, s);

  // ||X|| <= 0.5: the order-18 remainder is below 0.5^19 / 19! ~ 1e-23.
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 18; ++k) {
    term = term * X / k;
    E += term;
  }
  for (int i = 0; i < s; ++i) E = E * E;
  return E;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh(const Eigen::MatrixXd& Ac,
                                                const Eigen::MatrixXd& Bc,
                                                double Ts) {
  if (!(Ts > 0.0)) throw std::invalid_argument("zoh: sampling time must be positive");
  if (Ac.rows() != Ac.cols() || Bc.rows() != Ac.rows())
    throw std::invalid_argument("zoh: dimension mismatch");
  const int n = static_cast<int>(Ac.rows());
  const int m = static_cast<int>(Bc.cols());
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + m, n + m);
  aug.topLeftCorner(n, n) = Ac * Ts;
  aug.topRightCorner(n, m) = Bc * Ts;
  const Eigen::MatrixXd E = expm(aug);
  return {E.topLeftCorner(n, n), E.topRightCorner(n, m)};
}

}  // namespace lreach::systems
