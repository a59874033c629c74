#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/operations.hpp"
#include "lreach/prob/gaussian.hpp"

namespace lreach::dpgrid {

namespace {

constexpr double kCutoff = 6.0;

struct Window {
  int first = 0;
  Eigen::VectorXd w;
};

// Gaussian mass of each node's cell along one axis; cells clipped to the
// grid, kernel truncated at kCutoff sigma.
Window cell_masses(const StateGrid& g, int d, double c, double sigma) {
  const double h = g.spacing(d), lo = g.lower()[d], hi = g.upper()[d];
  const double a = std::max(c - kCutoff * sigma, lo), b = std::min(c + kCutoff * sigma, hi);
  Window out;
  if (a >= b) return out;
  const int first = std::max(0, static_cast<int>(std::floor((a - lo) / h + 0.5)));
  const int last = std::min(g.count(d) - 1, static_cast<int>(std::ceil((b - lo) / h - 0.5)));
  if (last < first) return out;
  out.first = first;
  out.w.resize(last - first + 1);
  for (int i = first; i <= last; ++i) {
    const double y = lo + i * h;
    const double l = std::max(a, y - 0.5 * h), r = std::min(b, y + 0.5 * h);
    out.w[i - first] = r > l ? prob::normal_cdf((r - c) / sigma) - prob::normal_cdf((l - c) / sigma)
                             : 0.0;
  }
  return out;
}

// Point-sampled density times cell area; used when Sigma is not diagonal.
double riemann_expectation(const StateGrid& g, const Eigen::MatrixXd& V,
                           const prob::GaussianDisturbance& dist, const Eigen::Vector2d& c) {
  const Eigen::MatrixXd& S = dist.covariance();
  int first[2], last[2];
  for (int d = 0; d < 2; ++d) {
    const double s = std::sqrt(S(d, d)), h = g.spacing(d), lo = g.lower()[d];
    first[d] = std::max(0, static_cast<int>(std::ceil((c[d] - kCutoff * s - lo) / h)));
    last[d] = std::min(g.count(d) - 1, static_cast<int>(std::floor((c[d] + kCutoff * s - lo) / h)));
  }
  const double area = g.spacing(0) * g.spacing(1);
  double sum = 0.0;
  for (int i = first[0]; i <= last[0]; ++i)
    for (int j = first[1]; j <= last[1]; ++j) {
      if (V(i, j) == 0.0) continue;
      const Eigen::Vector2d y = g.point(i, j);
      // Edge cells are clipped to the grid, as in cell_masses.
      double a = area;
      if (i == 0 || i == g.count(0) - 1) a *= 0.5;
      if (j == 0 || j == g.count(1) - 1) a *= 0.5;
      sum += V(i, j) * prob::gaussian_pdf(dist, y - c + dist.mean()) * a;
    }
  return sum;
}

}  // namespace

ValueGrid stochastic_dp(const lagrangian::ReachProblem& problem, const StateGrid& grid,
                        int input_count) {
  lagrangian::validate(problem);
  if (problem.system.n() != 2) throw std::invalid_argument("DP oracle supports 2-D state only");
  const auto& sys = problem.system;
  const auto& dist = sys.disturbance();
  const auto inputs = discretize_inputs(problem.input, input_count);
  std::vector<Eigen::Vector2d> pushes;
  for (const auto& u : inputs) pushes.push_back(sys.B() * u + dist.mean());
  const bool diagonal = dist.diagonal();
  const Eigen::Vector2d sigma = dist.covariance().diagonal().cwiseSqrt();

  const int n0 = grid.count(0), n1 = grid.count(1);
  Mask in_safe(n0, n1);
  Eigen::MatrixXd terminal(n0, n1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      const Eigen::VectorXd x = grid.point(i, j);
      in_safe(i, j) = geom::contains(problem.safe, x);
      terminal(i, j) = geom::contains(problem.target, x) ? 1.0 : 0.0;
    }

  const int N = problem.horizon;
  ValueGrid out{grid, std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(N + 1))};
  out.values[static_cast<std::size_t>(N)] = terminal;
  for (int k = N - 1; k >= 0; --k) {
    const Eigen::MatrixXd& next = out.values[static_cast<std::size_t>(k + 1)];
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n0, n1);
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j) {
        if (!in_safe(i, j)) continue;
        const Eigen::Vector2d drift = sys.A() * grid.point(i, j);
        double best = 0.0;
        for (const auto& p : pushes) {
          const Eigen::Vector2d c = drift + p;
          double v;
          if (diagonal) {
            const Window w0 = cell_masses(grid, 0, c[0], sigma[0]);
            const Window w1 = cell_masses(grid, 1, c[1], sigma[1]);
            if (w0.w.size() == 0 || w1.w.size() == 0) continue;
            v = w0.w.dot(next.block(w0.first, w1.first, w0.w.size(), w1.w.size()) * w1.w);
          } else {
            v = riemann_expectation(grid, next, dist, c);
          }
          best = std::max(best, v);
          if (best >= 1.0) break;
        }
        V(i, j) = std::clamp(best, 0.0, 1.0);
      }
    out.values[static_cast<std::size_t>(k)] = std::move(V);
  }
  return out;
}

}  // namespace lreach::dpgrid
