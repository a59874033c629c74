#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "lreach/geom/lp.hpp"
#include "lreach/geom/polytope.hpp"
#include "lreach/lagrangian/problem.hpp"

namespace lreach::mcsim {

/// Set-membership feedback law from the tube RA_0 ... RA_N: with k steps
/// remaining, steer into S_{k-1} = RA_{k-1} - E, as close as possible (in
/// the infinity norm) to its Chebyshev center.
class TubeController {
 public:
  TubeController(const lagrangian::ReachProblem& problem, const lagrangian::ReachResult& result);

  int horizon() const { return static_cast<int>(shrunk_.size()); }
  const geom::HPolytope& shrunk(int j) const { return shrunk_[static_cast<std::size_t>(j)]; }

  /// Requires x in RA_k within 1e-6; throws "tube infeasibility" if the LP
  /// has no solution.
  Eigen::VectorXd control(const Eigen::VectorXd& x, int k) const;

  /// Same objective without the membership constraint; always feasible.
  /// Used once noise has pushed the state out of the tube.
  Eigen::VectorXd fallback(const Eigen::VectorXd& x, int k) const;

  bool in_tube(const Eigen::VectorXd& x, int k) const;

 private:
  struct Step {
    geom::LpProblem lp;       // rows: S_{j} membership, then the |.|_inf bounds, then simplex
    Eigen::MatrixXd G;        // S_j normals
    Eigen::VectorXd h;        // S_j offsets
    Eigen::VectorXd center;
    bool feasible = false;
  };
  Eigen::VectorXd solve(const Eigen::VectorXd& x, int k, bool constrained) const;

  lagrangian::LinearSystem sys_;
  std::vector<geom::HPolytope> tube_;    // RA_0 ... RA_N
  std::vector<geom::HPolytope> shrunk_;  // S_0 ... S_{N-1}
  std::vector<Step> steps_;
  Eigen::MatrixXd BV_;                   // B times the input vertices
  Eigen::MatrixXd V_;                    // input vertices as columns
};

enum class NoiseMode {
  kGaussian,     // w ~ N(mu, Sigma)
  kZero,         // w = 0
  kConditional,  // N(mu, Sigma) conditioned on w in E (rejection)
};

struct SimOptions {
  std::uint64_t seed = 1;
  long trials = 100000;
  NoiseMode noise = NoiseMode::kGaussian;
  int threads = 0;  // 0: LREACH_THREADS or hardware concurrency
};

struct SimReport {
  long samples = 0;
  long successes = 0;
  double probability = 0.0;
  double lower_bound = 0.0;  // one-sided 95% Clopper-Pearson
  std::uint64_t seed = 0;
  long tube_exits = 0;       // trajectories that left RA_{N-k} at some step
  long fallback_steps = 0;
};

/// One-sided exact binomial lower bound at the given confidence.
double clopper_pearson_lower(long successes, long trials, double confidence = 0.95);

/// Closed-loop runs from x0 (must lie in RA_N). Success iff x_k in K for
/// k < N and x_N in T. Trial i draws from Philox stream (seed, i), so the
/// report does not depend on the thread count.
SimReport simulate(const lagrangian::ReachProblem& problem, const lagrangian::ReachResult& result,
                   const Eigen::VectorXd& x0, const SimOptions& options);

/// Hit-and-run samples from a bounded full-dimensional polytope, started at
/// the Chebyshev center: burn_in steps, then one sample every thin steps.
std::vector<Eigen::VectorXd> hit_and_run(const geom::HPolytope& P, int count, std::uint64_t seed,
                                         int burn_in = 50, int thin = 10);

/// Thread count from LREACH_THREADS, else hardware concurrency (at least 1).
int default_threads();

}  // namespace lreach::mcsim
