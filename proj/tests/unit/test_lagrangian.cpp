#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "lreach/geom/operations.hpp"
#include "lreach/lagrangian/recursion.hpp"
#include "lreach/systems/models.hpp"

using namespace lreach;
using geom::HPolytope;
using geom::VPolytope;
using lagrangian::LinearSystem;
using lagrangian::ReachProblem;

namespace {

prob::GaussianDisturbance white(int n, double var) {
  return prob::GaussianDisturbance(Eigen::VectorXd::Zero(n),
                                   var * Eigen::MatrixXd::Identity(n, n));
}

HPolytope square(double h) {
  return HPolytope::box(Eigen::Vector2d(-h, -h), Eigen::Vector2d(h, h));
}

bool same_set(const HPolytope& P, const HPolytope& Q, double tol = 1e-7) {
  return geom::subset(P, Q, tol) && geom::subset(Q, P, tol);
}

// Scalar input: {u in [lo, hi] : G (A x + B u) <= h} is an interval.
bool steerable(const Eigen::MatrixXd& A, const Eigen::VectorXd& B, double lo,
               double hi, const HPolytope& S, const Eigen::VectorXd& x,
               double tol) {
  const Eigen::VectorXd drift = S.A() * (A * x);
  const Eigen::VectorXd gain = S.A() * B;
  for (int i = 0; i < S.num_facets(); ++i) {
    const double rhs = S.b()[i] + tol - drift[i];
    if (std::abs(gain[i]) < 1e-15) {
      if (rhs < 0) return false;
    } else if (gain[i] > 0) {
      hi = std::min(hi, rhs / gain[i]);
    } else {
      lo = std::max(lo, rhs / gain[i]);
    }
  }
  return lo <= hi;
}

}  // namespace

TEST_CASE("backward reach of trivial systems") {
  const VPolytope zero_input = VPolytope::singleton(Eigen::VectorXd::Zero(1));
  const LinearSystem identity(Eigen::Matrix2d::Identity(), Eigen::Vector2d(1, 0), white(2, 1));
  const HPolytope S = square(0.7);
  CHECK(same_set(lagrangian::backward_reach(identity, zero_input, S), S));

  const LinearSystem doubling(2 * Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero(), white(2, 1));
  const VPolytope U = VPolytope::box(Eigen::VectorXd::Constant(1, -1), Eigen::VectorXd::Constant(1, 1));
  CHECK(same_set(lagrangian::backward_reach(doubling, U, square(2)), square(1)));

  CHECK(geom::is_empty(lagrangian::backward_reach(identity, U, HPolytope::empty(2))));
}

TEST_CASE("backward reach of the double integrator matches an interval oracle") {
  const auto problem = systems::double_integrator();
  const auto& sys = problem.system;
  const HPolytope S = square(0.1);
  const HPolytope R = lagrangian::backward_reach(sys, problem.input, S);
  REQUIRE_FALSE(geom::is_empty(R));

  std::mt19937_64 rng(11);
  const VPolytope V = geom::vertices(R);
  Eigen::Vector2d lo = V.points().front(), hi = lo;
  for (const auto& v : V.points()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Eigen::Vector2d pad = 0.2 * (hi - lo);
  std::uniform_real_distribution<double> ux(lo[0] - pad[0], hi[0] + pad[0]);
  std::uniform_real_distribution<double> uy(lo[1] - pad[1], hi[1] + pad[1]);
  int inside = 0, outside = 0;
  while (inside < 1000 || outside < 1000) {
    const Eigen::Vector2d x(ux(rng), uy(rng));
    const Eigen::VectorXd Bu = sys.B().col(0);
    if (geom::contains(R, x, 0.0)) {
      if (inside >= 1000) continue;
      ++inside;
      REQUIRE(steerable(sys.A(), Bu, -1, 1, S, x, 1e-9));
    } else if ((R.A() * x - R.b()).maxCoeff() > 1e-6) {
      if (outside >= 1000) continue;
      ++outside;
      REQUIRE_FALSE(steerable(sys.A(), Bu, -1, 1, S, x, 0.0));
    }
  }
}

TEST_CASE("robust reach-avoid basic cases") {
  const auto problem = systems::double_integrator();
  const geom::Ellipsoid point(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 0.0);

  const auto r0 = lagrangian::robust_reach_avoid(problem, point, 0);
  REQUIRE(r0.sets.size() == 1);
  CHECK(same_set(r0.sets[0], problem.target));
  CHECK_FALSE(r0.empty_step);

  // T - E is empty when E is wider than T.
  const geom::Ellipsoid huge(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), 4.0);
  const auto r = lagrangian::robust_reach_avoid(problem, huge, 3);
  REQUIRE(r.sets.size() == 4);
  REQUIRE(r.empty_step);
  CHECK(*r.empty_step == 1);
  for (int k = 1; k <= 3; ++k) CHECK(geom::is_empty(r.sets[static_cast<std::size_t>(k)]));

  CHECK_THROWS(lagrangian::robust_reach_avoid(problem, point, 6));
  CHECK_THROWS(lagrangian::robust_reach_avoid(problem, point, -1));
}

TEST_CASE("flat intermediate set is reported and treated as empty") {
  const auto problem = systems::double_integrator();
  // Support in x1 equals the half-width of T, so T - E is a segment.
  const geom::Ellipsoid E(Eigen::Vector2d::Zero(),
                          (Eigen::Matrix2d() << 1, 0, 0, 0.01).finished(), 1.0);
  const auto r = lagrangian::robust_reach_avoid(problem, E, 2);
  REQUIRE(r.empty_step);
  CHECK(*r.empty_step == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("viability equals the direct recursion") {
  const auto problem = systems::double_integrator();
  const auto viab = lagrangian::viability(problem, 5);
  const auto ra = lagrangian::robust_reach_avoid(
      [&] {
        ReachProblem p = problem;
        p.target = problem.safe;
        return p;
      }(),
      VPolytope::singleton(Eigen::Vector2d::Zero()), 5);
  REQUIRE(viab.sets.size() == 6);
  REQUIRE(ra.sets.size() == 6);

  // Direct evaluation of Viab_k = K n Reach(Viab_{k-1}).
  HPolytope direct = problem.safe;
  CHECK(same_set(viab.sets[0], direct));
  for (std::size_t k = 1; k <= 5; ++k) {
    direct = geom::intersect(problem.safe,
                             lagrangian::backward_reach(problem.system, problem.input, direct));
    CHECK(same_set(viab.sets[k], direct));
    CHECK(same_set(ra.sets[k], viab.sets[k]));
    CHECK(geom::subset(viab.sets[k], viab.sets[k - 1], 1e-9));
  }
  // Nontrivial: the corners of K cannot be held.
  CHECK_FALSE(geom::contains(viab.sets[5], Eigen::Vector2d(1, 1), 1e-9));
}

TEST_CASE("viability of an invariant set is a fixed point") {
  ReachProblem p = systems::double_integrator();
  p.system = LinearSystem(Eigen::Matrix2d::Identity(), Eigen::Vector2d(0.5, 0.5), white(2, 0.01));
  const auto viab = lagrangian::viability(p, 4);
  for (const auto& S : viab.sets) CHECK(same_set(S, p.safe));
}

TEST_CASE("recursion properties on the double integrator") {
  const auto problem = systems::double_integrator();
  auto with_radius = [&](double r2) {
    return geom::Ellipsoid(Eigen::Vector2d::Zero(), 0.005 * Eigen::Matrix2d::Identity(), r2);
  };
  const auto small = lagrangian::robust_reach_avoid(problem, with_radius(1.0), 5);
  const auto large = lagrangian::robust_reach_avoid(problem, with_radius(2.0), 5);
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(geom::subset(small.sets[k], problem.safe, 1e-9));
    CHECK(geom::subset(large.sets[k], small.sets[k], 1e-9));
  }

  // Larger beta, smaller set.
  ReachProblem lo = problem, hi = problem;
  lo.beta = 0.5;
  hi.beta = 0.9;
  const auto rlo = lagrangian::underapproximate_level_set(lo);
  const auto rhi = lagrangian::underapproximate_level_set(hi);
  CHECK(geom::subset(rhi.final_set(), rlo.final_set(), 1e-9));

  // Longer horizon, larger disturbance set.
  ReachProblem shortp = problem;
  shortp.horizon = 2;
  const auto e2 = std::get<geom::Ellipsoid>(lagrangian::underapproximate_level_set(shortp).disturbance_set);
  const auto e5 = std::get<geom::Ellipsoid>(lagrangian::underapproximate_level_set(problem).disturbance_set);
  CHECK(e2.radius2() < e5.radius2());
}

TEST_CASE("underapproximation with beta zero is the deterministic recursion") {
  ReachProblem p = systems::double_integrator();
  p.beta = 0.0;
  const auto r = lagrangian::underapproximate_level_set(p);
  const auto det = lagrangian::robust_reach_avoid(p, VPolytope::singleton(Eigen::Vector2d::Zero()), 5);
  CHECK(std::get<geom::Ellipsoid>(r.disturbance_set).radius2() == 0.0);
  for (std::size_t k = 0; k <= 5; ++k) CHECK(same_set(r.sets[k], det.sets[k]));
}

TEST_CASE("underapproximation input validation") {
  ReachProblem p = systems::double_integrator();
  p.beta = 1.0;
  CHECK_THROWS(lagrangian::underapproximate_level_set(p));
  p.beta = 1.5;
  CHECK_THROWS(lagrangian::underapproximate_level_set(p));
  p.beta = -0.1;
  CHECK_THROWS(lagrangian::underapproximate_level_set(p));
  p.beta = 0.8;
  p.horizon = 0;
  CHECK_THROWS(lagrangian::underapproximate_level_set(p));
  p.horizon = 5;
  p.safe = HPolytope(Eigen::RowVector2d(1, 0), Eigen::VectorXd::Ones(1));
  CHECK_THROWS(lagrangian::underapproximate_level_set(p));

  CHECK_THROWS(LinearSystem(Eigen::Matrix2d::Zero(), Eigen::Vector2d(1, 0), white(2, 1)));
  CHECK_THROWS(LinearSystem(Eigen::Matrix3d::Identity(), Eigen::Vector2d(1, 0), white(2, 1)));
}

TEST_CASE("nonzero-mean disturbance outside the level set warns") {
  ReachProblem p = systems::double_integrator();
  p.system = LinearSystem(p.system.A(), p.system.B(),
                          prob::GaussianDisturbance(Eigen::Vector2d(0.5, 0),
                                                    1e-4 * Eigen::Matrix2d::Identity()));
  const auto r = lagrangian::underapproximate_level_set(p);
  REQUIRE_FALSE(r.warnings.empty());
}
