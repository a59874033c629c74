#pragma once

#include <utility>

#include <Eigen/Dense>

namespace lreach::systems {

/// Matrix exponential by scaling and squaring with a Taylor kernel.
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

/// Exact zero-order-hold discretization of dx/dt = Ac x + Bc u over Ts,
/// read off exp([[Ac, Bc], [0, 0]] Ts). Returns (A, B).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> zoh(const Eigen::MatrixXd& Ac,
                                                const Eigen::MatrixXd& Bc,
                                                double Ts);

}  // namespace lreach::systems
