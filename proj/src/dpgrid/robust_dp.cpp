#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/operations.hpp"

namespace lreach::dpgrid {

namespace {

// Bilinear interpolation; anything off the grid gets `outside`.
double interpolate(const StateGrid& g, const Eigen::MatrixXd& J, const Eigen::Vector2d& z,
                   double outside) {
  double t[2];
  int i[2];
  for (int d = 0; d < 2; ++d) {
    const double s = (z[d] - g.lower()[d]) / g.spacing(d);
    if (s < -1e-9 || s > g.count(d) - 1 + 1e-9) return outside;
    i[d] = std::clamp(static_cast<int>(std::floor(s)), 0, g.count(d) - 2);
    t[d] = std::clamp(s - i[d], 0.0, 1.0);
  }
  return (1 - t[0]) * ((1 - t[1]) * J(i[0], i[1]) + t[1] * J(i[0], i[1] + 1)) +
         t[0] * ((1 - t[1]) * J(i[0] + 1, i[1]) + t[1] * J(i[0] + 1, i[1] + 1));
}

}  // namespace

RobustValueGrid robust_dp(const lagrangian::ReachProblem& problem, const geom::VPolytope& E,
                          const StateGrid& grid, int input_count, int t) {
  lagrangian::validate(problem);
  if (problem.system.n() != 2) throw std::invalid_argument("DP oracle supports 2-D state only");
  if (E.dim() != 2 || E.empty()) throw std::invalid_argument("robust DP: bad disturbance set");
  const auto& sys = problem.system;
  const auto inputs = discretize_inputs(problem.input, input_count);

  std::vector<Eigen::Vector2d> ws(E.points().begin(), E.points().end());
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& w : ws) centroid += w;
  ws.push_back(centroid / static_cast<double>(E.size()));

  const int n0 = grid.count(0), n1 = grid.count(1);
  Eigen::MatrixXi stage(n0, n1), terminal(n0, n1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const Eigen::VectorXd x = grid.point(i, j);
      stage(i, j) = geom::contains(problem.safe, x) ? 0 : 1;
      terminal(i, j) = geom::contains(problem.target, x) ? 0 : 1;
    }

  if (t < 0) t = problem.horizon;
  if (t > problem.horizon) throw std::invalid_argument("horizon t must lie in [0, N]");
  RobustValueGrid out{grid, std::vector<Eigen::MatrixXi>(static_cast<std::size_t>(t + 1))};
  out.J[static_cast<std::size_t>(t)] = terminal;
  for (int k = t - 1; k >= 0; --k) {
    const Eigen::MatrixXd next = out.J[static_cast<std::size_t>(k + 1)].cast<double>();
    const double worst = t - k;  // upper end of J_{k+1}
    Eigen::MatrixXi J(n0, n1);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        const Eigen::Vector2d drift = sys.A() * grid.point(i, j);
        double best = std::numeric_limits<double>::infinity();
        for (const auto& u : inputs) {
          const Eigen::Vector2d c = drift + sys.B() * u;
          double sup = 0.0;
          for (const auto& w : ws) {
            sup = std::max(sup, interpolate(grid, next, c + w, worst));
            if (sup >= best) break;
          }
          best = std::min(best, sup);
          if (best == 0.0) break;
        }
        J(i, j) = stage(i, j) + static_cast<int>(std::floor(best + 0.5));
      }
    out.J[static_cast<std::size_t>(k)] = std::move(J);
  }
  return out;
}

}  // namespace lreach::dpgrid
