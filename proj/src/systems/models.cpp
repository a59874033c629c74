#include "lreach/systems/models.hpp"

#include <cmath>
#include <stdexcept>

#include "lreach/systems/expm.hpp"

namespace lreach::systems {

using geom::HPolytope;
using geom::VPolytope;

lagrangian::ReachProblem double_integrator(const DoubleIntegratorParams& p) {
  if (!(p.T > 0.0)) throw std::invalid_argument("double integrator: T must be positive");
  if (!(p.variance > 0.0) || !(p.state_bound > 0.0) || !(p.input_bound > 0.0))
    throw std::invalid_argument("double integrator: bad parameters");
  Eigen::Matrix2d A;
  A << 1.0, p.T, 0.0, 1.0;
  Eigen::Vector2d B(p.T * p.T / 2.0, p.T);
  prob::GaussianDisturbance w(Eigen::Vector2d::Zero(),
                              p.variance * Eigen::Matrix2d::Identity());
  const HPolytope box = HPolytope::box(Eigen::Vector2d::Constant(-p.state_bound),
                                       Eigen::Vector2d::Constant(p.state_bound));
  return {.system = lagrangian::LinearSystem(A, B, w),
          .safe = box,
          .target = box,
          .input = VPolytope::box(Eigen::VectorXd::Constant(1, -p.input_bound),
                                  Eigen::VectorXd::Constant(1, p.input_bound)),
          .beta = p.beta,
          .horizon = p.horizon};
}

double leo_orbital_rate() {
  const double mu = 398600.4418;
  const double r0 = 6871.0;
  return std::sqrt(mu / (r0 * r0 * r0));
}

lagrangian::ReachProblem cwh_rendezvous(const CwhParams& p) {
  if (!(p.omega > 0.0) || !(p.mass > 0.0) || !(p.Ts > 0.0) || !(p.z2_cap > 0.0))
    throw std::invalid_argument("cwh: parameters must be positive");
  const double w = p.omega;
  Eigen::Matrix4d Ac = Eigen::Matrix4d::Zero();
  Ac(0, 2) = 1.0;
  Ac(1, 3) = 1.0;
  Ac(2, 0) = 3.0 * w * w;
  Ac(2, 3) = 2.0 * w;
  Ac(3, 2) = -2.0 * w;
  Eigen::MatrixXd Bc = Eigen::MatrixXd::Zero(4, 2);
  Bc(2, 0) = 1.0 / p.mass;
  Bc(3, 1) = 1.0 / p.mass;
  auto [A, B] = zoh(Ac, Bc, p.Ts);

  Eigen::Vector4d var(1.0, 1.0, 0.0005, 0.0005);
  prob::GaussianDisturbance dist(Eigen::Vector4d::Zero(), Eigen::MatrixXd(1e-4 * var.asDiagonal()));

  const HPolytope target = HPolytope::box(Eigen::Vector4d(-0.1, -0.1, -0.01, -0.01),
                                          Eigen::Vector4d(0.1, 0.0, 0.01, 0.01));
  Eigen::MatrixXd Ak(7, 4);
  Eigen::VectorXd bk(7);
  Ak << 1, -1, 0, 0,    // z1 <= z2
      -1, -1, 0, 0,     // -z1 <= z2
      0, 0, 1, 0,
      0, 0, -1, 0,
      0, 0, 0, 1,
      0, 0, 0, -1,
      0, 1, 0, 0;
  bk << 0, 0, 0.05, 0.05, 0.05, 0.05, p.z2_cap;

  return {.system = lagrangian::LinearSystem(A, B, dist),
          .safe = HPolytope(Ak, bk),
          .target = target,
          .input = VPolytope::box(Eigen::Vector2d::Constant(-0.1), Eigen::Vector2d::Constant(0.1)),
          .beta = p.beta,
          .horizon = p.horizon};
}

lagrangian::ReachProblem model_by_name(const std::string& name) {
  if (name == "double-integrator") return double_integrator();
  if (name == "cwh") return cwh_rendezvous();
  throw std::invalid_argument("unknown model '" + name + "'");
}

}  // namespace lreach::systems
