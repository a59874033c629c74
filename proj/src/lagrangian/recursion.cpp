#include "lreach/lagrangian/recursion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "lreach/geom/operations.hpp"
#include "lreach/prob/gaussian.hpp"

namespace lreach::lagrangian {

using geom::HPolytope;
using geom::VPolytope;

HPolytope backward_reach(const LinearSystem& sys, const VPolytope& U,
                         const HPolytope& S) {
  if (S.dim() != sys.n() || U.dim() != sys.m())
    throw std::invalid_argument("backward_reach: dimension mismatch");
  const VPolytope V = geom::vertices(S);
  if (V.empty()) return HPolytope::empty(sys.n());
  // Hull of the raw pairwise sums; reducing them first would build the same hull twice.
  const VPolytope W = geom::linear_map(U, -sys.B());
  std::vector<Eigen::VectorXd> sums;
  sums.reserve(static_cast<std::size_t>(V.size()) * static_cast<std::size_t>(W.size()));
  for (const auto& v : V.points())
    for (const auto& w : W.points()) sums.push_back(v + w);
  return geom::affine_preimage(geom::facets(VPolytope(sys.n(), std::move(sums))),
                               sys.A());
}

namespace {

HPolytope subtract(const HPolytope& S, const DisturbanceSet& E) {
  return std::visit([&](const auto& e) { return geom::minkowski_diff(S, e); }, E);
}

int set_dim(const DisturbanceSet& E) {
  return std::visit([](const auto& e) { return e.dim(); }, E);
}

}  // namespace

ReachResult robust_reach_avoid(const ReachProblem& problem,
                               const DisturbanceSet& E, int t) {
  validate(problem);
  if (t < 0 || t > problem.horizon)
    throw std::invalid_argument("horizon t must lie in [0, N]");
  const int n = problem.system.n();
  if (set_dim(E) != n)
    throw std::invalid_argument("disturbance set: dimension mismatch");

  ReachResult out{.sets = {}, .disturbance_set = E, .steps = {},
                  .empty_step = std::nullopt, .warnings = {}};
  auto record = [&](const HPolytope& S) {
    StepDiagnostics d;
    d.facets = S.num_facets();
    if (!geom::is_empty(S)) d.vertices = geom::vertices(S).size();
    out.sets.push_back(S);
    out.steps.push_back(d);
  };
  record(geom::reduce(problem.target));

  for (int k = 1; k <= t; ++k) {
    const HPolytope& prev = out.sets.back();
    HPolytope shrunk = subtract(prev, E);
    HPolytope next = HPolytope::empty(n);
    const auto ext = geom::extent(shrunk);
    if (ext == geom::Extent::kFlat) {
      out.warnings.push_back("step " + std::to_string(k) +
                             ": RA_" + std::to_string(k - 1) +
                             " minus E is flat, treated as empty");
    } else if (ext == geom::Extent::kFullDimensional) {
      const HPolytope reach = backward_reach(problem.system, problem.input, shrunk);
      const HPolytope cut = geom::intersect(problem.safe, reach);
      const auto cut_ext = geom::extent(cut);
      if (cut_ext == geom::Extent::kFlat)
        out.warnings.push_back("step " + std::to_string(k) +
                               ": RA_" + std::to_string(k) +
                               " is flat, treated as empty");
      if (cut_ext == geom::Extent::kFullDimensional) next = geom::reduce(cut);
    }
    record(next);
    if (geom::is_empty(next)) {
      out.empty_step = k;
      for (int j = k + 1; j <= t; ++j) record(HPolytope::empty(n));
      break;
    }
  }
  return out;
}

ReachResult viability(const ReachProblem& problem, int t) {
  ReachProblem p = problem;
  p.target = problem.safe;
  return robust_reach_avoid(p, VPolytope::singleton(Eigen::VectorXd::Zero(problem.system.n())), t);
}

ReachResult underapproximate_level_set(const ReachProblem& problem) {
  validate(problem);
  const auto& d = problem.system.disturbance();
  const double p = std::pow(problem.beta, 1.0 / problem.horizon);
  const geom::Ellipsoid E = prob::disturbance_level_set(d, p);
  ReachResult out = robust_reach_avoid(problem, E, problem.horizon);
  if (!E.contains(Eigen::VectorXd::Zero(d.dim()), 0.0))
    out.warnings.insert(out.warnings.begin(),
                        "disturbance set does not contain the origin (nonzero mean)");
  return out;
}

}  // namespace lreach::lagrangian
