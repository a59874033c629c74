#pragma once

#include "lreach/lagrangian/problem.hpp"

namespace lreach::lagrangian {

/// One-step backward reachable set A^{-1}(S + (-B U)).
/// Throws geom::NotFullDimensionalError for flat S.
geom::HPolytope backward_reach(const LinearSystem& sys, const geom::VPolytope& U,
                               const geom::HPolytope& S);

/// RA_0 = T, RA_k = K n Reach(RA_{k-1} - E) for k = 1..t, with t <= N.
ReachResult robust_reach_avoid(const ReachProblem& problem,
                               const DisturbanceSet& E, int t);

/// Viab_k(K), computed as robust_reach_avoid with T := K and E := {0}.
ReachResult viability(const ReachProblem& problem, int t);

/// RA_N with E the Gaussian level set of mass beta^{1/N}. The result is an
/// inner approximation of the stochastic reach-avoid beta-level set.
ReachResult underapproximate_level_set(const ReachProblem& problem);

}  // namespace lreach::lagrangian
