#include <stdexcept>
#include <variant>

#include "lreach/geom/operations.hpp"
#include "lreach/mcsim/simulate.hpp"

namespace lreach::mcsim {

namespace {

constexpr double kTubeTol = 1e-6;

}  // namespace

TubeController::TubeController(const lagrangian::ReachProblem& problem,
                               const lagrangian::ReachResult& result)
    : sys_(problem.system), tube_(result.sets) {
  if (tube_.size() < 2) throw std::invalid_argument("controller needs a horizon of at least 1");
  const int n = sys_.n();
  const auto& U = problem.input;
  const int nv = U.size();
  V_.resize(U.dim(), nv);
  for (int i = 0; i < nv; ++i) V_.col(i) = U.points()[static_cast<std::size_t>(i)];
  BV_ = sys_.B() * V_;

  for (std::size_t j = 0; j + 1 < tube_.size(); ++j) {
    geom::HPolytope S = std::visit(
        [&](const auto& E) { return geom::minkowski_diff(tube_[j], E); }, result.disturbance_set);
    Step st;
    st.G = S.A();
    st.h = S.b();
    st.feasible = !geom::is_empty(S);
    st.center = st.feasible ? geom::chebyshev_center(S).center : Eigen::VectorXd::Zero(n);
    // Variables (lambda, t): maximize -t.
    const int m = static_cast<int>(st.G.rows());
    auto& lp = st.lp;
    lp.c = Eigen::VectorXd::Zero(nv + 1);
    lp.c[nv] = -1.0;
    lp.A = Eigen::MatrixXd::Zero(m + 2 * n + nv + 2, nv + 1);
    lp.b = Eigen::VectorXd::Zero(lp.A.rows());
    lp.A.topLeftCorner(m, nv) = st.G * BV_;
    lp.A.block(m, 0, n, nv) = BV_;
    lp.A.block(m, nv, n, 1).setConstant(-1.0);
    lp.A.block(m + n, 0, n, nv) = -BV_;
    lp.A.block(m + n, nv, n, 1).setConstant(-1.0);
    const int r = m + 2 * n;
    lp.A.block(r, 0, nv, nv) = -Eigen::MatrixXd::Identity(nv, nv);
    lp.A.block(r + nv, 0, 1, nv).setOnes();
    lp.A.block(r + nv + 1, 0, 1, nv).setConstant(-1.0);
    lp.b[r + nv] = 1.0;
    lp.b[r + nv + 1] = -1.0;
    shrunk_.push_back(std::move(S));
    steps_.push_back(std::move(st));
  }
}

bool TubeController::in_tube(const Eigen::VectorXd& x, int k) const {
  if (k < 0 || k >= static_cast<int>(tube_.size())) throw std::invalid_argument("step out of range");
  return geom::contains(tube_[static_cast<std::size_t>(k)], x, kTubeTol);
}

Eigen::VectorXd TubeController::solve(const Eigen::VectorXd& x, int k, bool constrained) const {
  if (k < 1 || k > horizon()) throw std::invalid_argument("step out of range");
  const Step& st = steps_[static_cast<std::size_t>(k - 1)];
  const int n = sys_.n(), nv = static_cast<int>(V_.cols());
  const int m = static_cast<int>(st.G.rows());
  const Eigen::VectorXd drift = sys_.A() * x;
  geom::LpProblem lp = st.lp;
  lp.b.segment(m, n) = st.center - drift;
  lp.b.segment(m + n, n) = drift - st.center;
  if (!constrained) {
    // Drop the membership rows by making them vacuous.
    lp.A.topRows(m).setZero();
    lp.b.head(m).setOnes();
    const geom::LpResult r = geom::lp_solve(lp);
    if (!r.optimal()) throw std::runtime_error("fallback controller LP failed");
    return V_ * r.x.head(nv);
  }
  // Exact membership first; the relaxation only serves states on the
  // boundary of RA_k, where rounding can leave no exact solution.
  for (double relax : {0.0, kTubeTol}) {
    lp.b.head(m) = st.h - st.G * drift + Eigen::VectorXd::Constant(m, relax);
    const geom::LpResult r = geom::lp_solve(lp);
    if (r.optimal()) return V_ * r.x.head(nv);
  }
  throw std::runtime_error("tube infeasibility");
}

Eigen::VectorXd TubeController::control(const Eigen::VectorXd& x, int k) const {
  if (!in_tube(x, k)) throw std::invalid_argument("state is not in RA_k");
  if (!steps_[static_cast<std::size_t>(k - 1)].feasible) throw std::runtime_error("tube infeasibility");
  return solve(x, k, true);
}

Eigen::VectorXd TubeController::fallback(const Eigen::VectorXd& x, int k) const {
  return solve(x, k, false);
}

}  // namespace lreach::mcsim
