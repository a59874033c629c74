#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lreach/geom/polytope.hpp"
#include "lreach/lagrangian/problem.hpp"

namespace lreach::dpgrid {

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform node grid on [lower, upper] in 2-D. Node (i, j) sits at
/// lower + (i h_0, j h_1); values are stored as matrices indexed (i, j).
class StateGrid {
 public:
  StateGrid(Eigen::Vector2d lower, Eigen::Vector2d upper, int n0, int n1);

  /// Bounding box of K and T with the given node counts.
  static StateGrid covering(const lagrangian::ReachProblem& problem, int n0, int n1);

  const Eigen::Vector2d& lower() const { return lower_; }
  const Eigen::Vector2d& upper() const { return upper_; }
  int count(int d) const { return counts_[d]; }
  double spacing(int d) const { return h_[d]; }
  double cell_diagonal() const { return h_.norm(); }
  Eigen::Vector2d point(int i, int j) const {
    return lower_ + Eigen::Vector2d(i * h_[0], j * h_[1]);
  }

 private:
  Eigen::Vector2d lower_, upper_, h_;
  int counts_[2];
};

struct ValueGrid {
  StateGrid grid;
  /// values[k] holds V_k on the grid, k = 0 ... N, with V_N = 1_T.
  std::vector<Eigen::MatrixXd> values;
  int horizon() const { return static_cast<int>(values.size()) - 1; }
};

struct RobustValueGrid {
  StateGrid grid;
  /// J[k] for k = 0 ... t, J_t = 1 - 1_T; integer valued.
  std::vector<Eigen::MatrixXi> J;
  int horizon() const { return static_cast<int>(J.size()) - 1; }
};

/// Input samples: input_count points per dimension over the bounding box of
/// U, kept if inside U.
std::vector<Eigen::VectorXd> discretize_inputs(const geom::VPolytope& U, int input_count);

/// Bellman recursion V_k = 1_K max_u E[V_{k+1}(Ax + Bu + w)]; successor
/// mass falling outside the grid counts as failure.
ValueGrid stochastic_dp(const lagrangian::ReachProblem& problem, const StateGrid& grid,
                        int input_count = 21);

/// {x : V_{N-k}(x) >= beta}, restricted to V > 0 so that beta = 0 yields
/// the support of the value function.
Mask level_set_mask(const ValueGrid& vg, int k, double beta);

/// Minmax recursion J_k = (1 - 1_K) + min_u max_w J_{k+1}(Ax + Bu + w), the
/// max taken over the points of E plus their centroid, J_{k+1} bilinearly
/// interpolated; rounded to integers. {J_0 = 0} approximates RA_t.
/// t < 0 means the problem horizon.
RobustValueGrid robust_dp(const lagrangian::ReachProblem& problem,
                          const geom::VPolytope& E, const StateGrid& grid,
                          int input_count = 21, int t = -1);

struct ContainmentReport {
  long interior = 0;    // grid points deeper than `margin` inside the set
  long violations = 0;  // of those, points with V < beta - tol
  double smallest = 1.0;
  std::vector<Eigen::Vector2d> offenders;
};

/// Checks V >= beta - tol at every node of `grid` whose distance to the
/// boundary of `set` exceeds margin (margin < 0: one cell diagonal). An empty
/// set passes vacuously.
ContainmentReport check_containment(const geom::HPolytope& set, const StateGrid& grid,
                                    const Eigen::MatrixXd& V, double beta, double tol,
                                    double margin = -1.0);

}  // namespace lreach::dpgrid
