#include <cmath>
#include <stdexcept>

#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/operations.hpp"

namespace lreach::dpgrid {

StateGrid::StateGrid(Eigen::Vector2d lower, Eigen::Vector2d upper, int n0, int n1)
    : lower_(std::move(lower)), upper_(std::move(upper)), counts_{n0, n1} {
  if (!lower_.allFinite() || !upper_.allFinite())
    throw std::invalid_argument("grid: non-finite bounds");
  if (n0 < 2 || n1 < 2) throw std::invalid_argument("grid: need at least 2 points per dimension");
  if ((upper_.array() <= lower_.array()).any())
    throw std::invalid_argument("grid: upper bound must exceed lower bound");
  h_ = (upper_ - lower_).cwiseQuotient(Eigen::Vector2d(n0 - 1, n1 - 1));
}

StateGrid StateGrid::covering(const lagrangian::ReachProblem& problem, int n0, int n1) {
  if (problem.system.n() != 2)
    throw std::invalid_argument("DP oracle supports 2-D state only");
  Eigen::Vector2d lo, hi;
  for (int d = 0; d < 2; ++d) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(2);
    e[d] = 1.0;
    hi[d] = std::max(geom::support(problem.safe, e), geom::support(problem.target, e));
    lo[d] = -std::max(geom::support(problem.safe, -e), geom::support(problem.target, -e));
  }
  return StateGrid(lo, hi, n0, n1);
}

std::vector<Eigen::VectorXd> discretize_inputs(const geom::VPolytope& U, int input_count) {
  if (U.empty()) throw std::invalid_argument("input set is empty");
  if (input_count < 1) throw std::invalid_argument("input count must be positive");
  const int m = U.dim();
  Eigen::VectorXd lo = U.points().front(), hi = lo;
  for (const auto& p : U.points()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  std::vector<Eigen::VectorXd> out;
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    Eigen::VectorXd u(m);
    for (int d = 0; d < m; ++d) {
      const auto i = static_cast<std::size_t>(d);
      u[d] = (input_count == 1 || hi[d] == lo[d])
                 ? 0.5 * (lo[d] + hi[d])
                 : lo[d] + (hi[d] - lo[d]) * idx[i] / (input_count - 1);
    }
    if (U.size() == 1 || geom::contains(U, u, 1e-9)) {
      if (out.empty() || (out.back() - u).norm() > 0) out.push_back(u);
    }
    int d = 0;
    while (d < m && ++idx[static_cast<std::size_t>(d)] == input_count) idx[static_cast<std::size_t>(d++)] = 0;
    if (d == m) break;
  }
  if (out.empty()) throw std::invalid_argument("input discretization missed U");
  return out;
}

Mask level_set_mask(const ValueGrid& vg, int k, double beta) {
  const int N = vg.horizon();
  if (k < 0 || k > N) throw std::invalid_argument("level set step out of range");
  const Eigen::MatrixXd& V = vg.values[static_cast<std::size_t>(N - k)];
  return (V.array() >= beta) && (V.array() > 0.0);
}

}  // namespace lreach::dpgrid
