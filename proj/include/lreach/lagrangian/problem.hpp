#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "lreach/geom/ellipsoid.hpp"
#include "lreach/geom/polytope.hpp"
#include "lreach/prob/gaussian.hpp"

namespace lreach::lagrangian {

/// x+ = A x + B u + w, w ~ disturbance. A must be invertible.
class LinearSystem {
 public:
  LinearSystem(Eigen::MatrixXd A, Eigen::MatrixXd B,
               prob::GaussianDisturbance disturbance);

  int n() const { return static_cast<int>(A_.rows()); }
  int m() const { return static_cast<int>(B_.cols()); }
  const Eigen::MatrixXd& A() const { return A_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const prob::GaussianDisturbance& disturbance() const { return dist_; }

 private:
  Eigen::MatrixXd A_;
  Eigen::MatrixXd B_;
  prob::GaussianDisturbance dist_;
};

struct ReachProblem {
  LinearSystem system;
  geom::HPolytope safe;    // K
  geom::HPolytope target;  // T
  geom::VPolytope input;   // U
  double beta = 0.0;
  int horizon = 1;
};

/// Throws std::invalid_argument on inconsistent dimensions, empty or
/// unbounded K, T, U, beta outside [0, 1] or a non-positive horizon.
void validate(const ReachProblem& problem);

using DisturbanceSet = std::variant<geom::Ellipsoid, geom::VPolytope>;

struct StepDiagnostics {
  int facets = 0;
  int vertices = 0;
};

struct ReachResult {
  /// RA_0 ... RA_t. Sets after the first empty one are empty as well.
  std::vector<geom::HPolytope> sets;
  DisturbanceSet disturbance_set;
  std::vector<StepDiagnostics> steps;
  std::optional<int> empty_step;
  std::vector<std::string> warnings;

  const geom::HPolytope& final_set() const { return sets.back(); }
};

}  // namespace lreach::lagrangian
