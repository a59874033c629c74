#include "lreach/lagrangian/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "lreach/geom/operations.hpp"

namespace lreach::lagrangian {

LinearSystem::LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B,
                           prob::GaussianDisturbance disturbance)
    : A_(std::move(A)), B_(std::move(B)), dist_(std::move(disturbance)) {
  if (A_.rows() != A_.cols() || A_.rows() == 0)
    throw std::invalid_argument("system: A must be square");
  if (B_.rows() != A_.rows() || B_.cols() == 0)
    throw std::invalid_argument("system: B has wrong shape");
  if (dist_.dim() != A_.rows())
    throw std::invalid_argument("system: disturbance dimension mismatch");
  if (!A_.allFinite() || !B_.allFinite())
    throw std::invalid_argument("system: non-finite entries");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A_);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) <= 0.0 || s(0) / s(s.size() - 1) > 1e12)
    throw std::invalid_argument("system matrix singular");
}

namespace {

void check_set(const geom::HPolytope& S, int n, const char* name) {
  if (S.dim() != n)
    throw std::invalid_argument(std::string(name) + ": dimension mismatch");
  const auto ball = geom::chebyshev_center(S);
  if (std::isinf(ball.radius) && ball.radius > 0)
    throw std::invalid_argument(std::string(name) + ": set is unbounded");
  if (ball.radius < geom::kEmptyRadius)
    throw std::invalid_argument(std::string(name) + ": set is empty");
  // A finite Chebyshev radius does not rule out an unbounded slab.
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    if (!std::isfinite(geom::support(S, e)) || !std::isfinite(geom::support(S, -e)))
      throw std::invalid_argument(std::string(name) + ": set is unbounded");
  }
}

}  // namespace

void validate(const ReachProblem& p) {
  const int n = p.system.n();
  check_set(p.safe, n, "safe set");
  check_set(p.target, n, "target set");
  if (p.input.dim() != p.system.m())
    throw std::invalid_argument("input set: dimension mismatch");
  if (p.input.empty()) throw std::invalid_argument("input set: set is empty");
  if (!(p.beta >= 0.0 && p.beta <= 1.0))
    throw std::invalid_argument("beta must lie in [0, 1]");
  if (p.horizon < 1) throw std::invalid_argument("horizon must be positive");
}

}  // namespace lreach::lagrangian
