#include <cmath>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "lreach/geom/operations.hpp"
#include "oracles.hpp"

using namespace lreach::geom;
using lreach::testing::set_equal;

namespace {

HPolytope box2(double lo, double hi) {
  return HPolytope::box(Eigen::Vector2d(lo, lo), Eigen::Vector2d(hi, hi));
}

HPolytope box_n(int n, double lo, double hi) {
  return HPolytope::box(Eigen::VectorXd::Constant(n, lo),
                        Eigen::VectorXd::Constant(n, hi));
}

bool has_point(const VPolytope& V, const Eigen::VectorXd& p) {
  for (const auto& v : V.points())
    if ((v - p).norm() < 1e-9) return true;
  return false;
}

}  // namespace

TEST_CASE("construction normalizes and drops trivial rows") {
  Eigen::MatrixXd A(3, 2);
  A << 2, 0, 0, 0, 0, -3;
  const HPolytope P(A, Eigen::Vector3d(4, 1, 3));
  CHECK(P.num_facets() == 2);
  CHECK(P.A().row(0).norm() == doctest::Approx(1.0));
  CHECK(P.b()[0] == doctest::Approx(2.0));
  CHECK_FALSE(P.marked_empty());

  const HPolytope E(A, Eigen::Vector3d(4, -1, 3));
  CHECK(E.marked_empty());
  CHECK(is_empty(E));
}

TEST_CASE("support function") {
  CHECK(support(box2(-1, 1), Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
  CHECK(support(Ellipsoid::ball(Eigen::Vector2d::Zero(), 2.0),
                Eigen::Vector2d(0, 1)) == doctest::Approx(2.0));
  const VPolytope seg(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(2, 1)});
  CHECK(support(seg, Eigen::Vector2d(1, 1)) == doctest::Approx(3.0));
  CHECK(std::isinf(support(HPolytope::empty(2), Eigen::Vector2d(1, 0))));
  CHECK(support(HPolytope::empty(2), Eigen::Vector2d(1, 0)) < 0);
  const HPolytope half(Eigen::RowVector2d(1, 0), Eigen::VectorXd::Constant(1, 1.0));
  CHECK(support(half, Eigen::Vector2d(0, 1)) == std::numeric_limits<double>::infinity());
  CHECK_THROWS_WITH(support(box2(-1, 1), Eigen::Vector2d(0, 0)), "degenerate direction");
}

TEST_CASE("Pontryagin difference") {
  const auto S = box2(-1, 1);
  const auto D = minkowski_diff(S, Ellipsoid::ball(Eigen::Vector2d::Zero(), 0.1));
  CHECK(set_equal(D, box2(-0.9, 0.9), 1e-9));
  CHECK(is_empty(minkowski_diff(S, Ellipsoid::ball(Eigen::Vector2d::Zero(), 2.0))));
  CHECK(set_equal(minkowski_diff(S, VPolytope::singleton(Eigen::Vector2d::Zero())), S, 1e-12));
  CHECK(set_equal(minkowski_diff(S, Ellipsoid::ball(Eigen::Vector2d::Zero(), 0.0)), S, 1e-12));
}

TEST_CASE("Minkowski sum") {
  const auto a = VPolytope::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  const auto b = VPolytope::box(Eigen::Vector2d(-0.5, -0.5), Eigen::Vector2d(0.5, 0.5));
  const auto s = minkowski_sum(a, b);
  CHECK(s.size() == 4);
  CHECK(has_point(s, Eigen::Vector2d(1.5, 1.5)));
  CHECK(has_point(s, Eigen::Vector2d(-1.5, 1.5)));

  const auto id = minkowski_sum(a, VPolytope::singleton(Eigen::Vector2d::Zero()));
  CHECK(id.size() == 4);
  for (const auto& p : a.points()) CHECK(has_point(id, p));

  // All four pairwise sums of two orthogonal segments are extreme.
  const VPolytope s1(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)});
  const VPolytope s2(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1)});
  const auto sq = minkowski_sum(s1, s2);
  CHECK(sq.size() == 4);
  CHECK(has_point(sq, Eigen::Vector2d(1, 1)));
  CHECK_THROWS(minkowski_sum(s1, VPolytope::singleton(Eigen::Vector3d::Zero())));
}

TEST_CASE("intersection") {
  CHECK(set_equal(intersect(box2(-1, 1), box2(0, 2)), box2(0, 1), 1e-12));
  CHECK(set_equal(intersect(box2(-1, 1), box2(-1, 1)), box2(-1, 1), 1e-12));
  CHECK(intersect(box2(-1, 1), box2(-1, 1)).num_facets() == 4);
  CHECK(is_empty(intersect(box2(-1, 0), box2(1, 2))));
  CHECK_THROWS(intersect(box2(-1, 1), box_n(3, -1, 1)));
}

TEST_CASE("affine preimage") {
  CHECK(set_equal(affine_preimage(box2(-2, 2), 2.0 * Eigen::Matrix2d::Identity()),
                  box2(-1, 1), 1e-12));
  CHECK(set_equal(affine_preimage(box2(-2, 2), Eigen::Matrix2d::Identity()), box2(-2, 2),
                  1e-12));
  Eigen::Matrix2d M;
  M << 1, 0.25, 0, 1;
  const auto P = affine_preimage(box2(-1, 1), M);
  const auto V = vertices(P);
  CHECK(V.size() == 4);
  for (const auto& v : V.points()) {
    const Eigen::Vector2d y = M * v;
    CHECK(contains(box2(-1, 1), y));
    // Every preimage vertex maps onto a corner of the square.
    CHECK(std::abs(std::abs(y[0]) - 1.0) < 1e-9);
    CHECK(std::abs(std::abs(y[1]) - 1.0) < 1e-9);
  }
  Eigen::Matrix2d sing;
  sing << 1, 1, 1, 1;
  CHECK_THROWS_WITH(affine_preimage(box2(-1, 1), sing), "system matrix singular");
}

TEST_CASE("vertex enumeration") {
  const auto V = vertices(box2(-1, 1));
  CHECK(V.size() == 4);
  for (double x : {-1.0, 1.0})
    for (double y : {-1.0, 1.0}) CHECK(has_point(V, Eigen::Vector2d(x, y)));

  Eigen::MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  const auto T = vertices(HPolytope(A, Eigen::Vector3d(0, 0, 1)));
  CHECK(T.size() == 3);
  CHECK(has_point(T, Eigen::Vector2d(0, 0)));
  CHECK(has_point(T, Eigen::Vector2d(1, 0)));
  CHECK(has_point(T, Eigen::Vector2d(0, 1)));

  const auto cube = box_n(4, -1, 1);
  const auto oracle = lreach::testing::basic_feasible_points(cube.A(), cube.b());
  CHECK(oracle.size() == 16);
  const auto V4 = vertices(cube);
  CHECK(V4.size() == 16);
  for (const auto& p : oracle) CHECK(has_point(V4, p));

  CHECK(vertices(HPolytope::empty(2)).empty());
  CHECK(vertices(intersect(box2(-1, 0), box2(1, 2))).empty());
}

TEST_CASE("vertex enumeration matches brute force on random polytopes") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 3;
    const auto P = lreach::testing::random_hpolytope(rng, d, 10);
    const auto oracle = lreach::testing::basic_feasible_points(P.A(), P.b());
    const auto V = vertices(P);
    CHECK(V.size() == static_cast<int>(oracle.size()));
    for (const auto& p : oracle) CHECK(has_point(V, p));
  }
}

TEST_CASE("vertex enumeration errors") {
  const HPolytope half(Eigen::RowVector2d(1, 0), Eigen::VectorXd::Constant(1, 1.0));
  CHECK_THROWS_AS(vertices(half), UnboundedError);
  Eigen::MatrixXd A(3, 2);
  A << 1, 0, -1, 0, 0, 1;
  // strip -1 <= x <= 1, y <= 1: finite inradius but unbounded
  CHECK_THROWS_WITH_AS(vertices(HPolytope(A, Eigen::Vector3d(1, 1, 1))),
                       "vertex enumeration requires bounded polytope", UnboundedError);
  const auto flat = HPolytope::box(Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 0));
  CHECK_THROWS_WITH_AS(vertices(flat), "not full-dimensional", NotFullDimensionalError);
  CHECK(extent(flat) == Extent::kFlat);
  CHECK(extent(reduce(flat)) == Extent::kFlat);
  CHECK(extent(intersect(box2(-1, 0), box2(1, 2))) == Extent::kEmpty);
  CHECK(extent(box2(0, 1)) == Extent::kFullDimensional);
}

TEST_CASE("facet enumeration") {
  const auto V = VPolytope::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  const auto H = facets(V);
  CHECK(H.num_facets() == 4);
  CHECK(set_equal(H, box2(-1, 1), 1e-9));
  CHECK(set_equal(facets(vertices(box2(0, 1))), box2(0, 1), 1e-9));

  // Non-extreme input points are harmless.
  auto pts = V.points();
  pts.push_back(Eigen::Vector2d(0.2, 0.3));
  pts.push_back(Eigen::Vector2d(1, 0));
  CHECK(facets(VPolytope(2, pts)).num_facets() == 4);

  const VPolytope s1(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)});
  const VPolytope s2(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1)});
  const auto sum = minkowski_sum(s1, s2);
  const auto SH = facets(sum);
  CHECK(SH.num_facets() == 4);
  std::mt19937_64 rng(5);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::VectorXd x = lreach::testing::random_point(rng, 2, 1.5);
    if (contains(SH, x) != contains(sum, x)) ++mismatches;
  }
  CHECK(mismatches == 0);

  CHECK_THROWS_AS(facets(s1), NotFullDimensionalError);
  CHECK_THROWS_WITH(facets(VPolytope(3, {Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0),
                                         Eigen::Vector3d(0, 1, 0), Eigen::Vector3d(1, 1, 0)})),
                    "not full-dimensional");
  CHECK(facets(VPolytope(2)).marked_empty());
}

TEST_CASE("membership and subset") {
  CHECK(contains(box2(-1, 1), Eigen::Vector2d::Zero()));
  CHECK_FALSE(contains(box2(-1, 1), Eigen::Vector2d(1.1, 0)));
  CHECK(subset(box2(0, 1), box2(-1, 2)));
  CHECK_FALSE(subset(box2(-1, 1), box2(0, 2)));
  CHECK(subset(HPolytope::empty(2), box2(0, 1)));
  const HPolytope half(Eigen::RowVector2d(1, 0), Eigen::VectorXd::Constant(1, 1.0));
  CHECK_FALSE(subset(half, box2(-5, 5)));
  const auto V = VPolytope::box(Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1));
  CHECK(contains(V, Eigen::Vector2d(0.5, -0.5)));
  CHECK_FALSE(contains(V, Eigen::Vector2d(1.5, 0)));
}

TEST_CASE("Chebyshev center") {
  const auto c = chebyshev_center(box2(-1, 1));
  CHECK(c.radius == doctest::Approx(1.0));
  CHECK(c.center.norm() < 1e-9);
  Eigen::MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  const auto t = chebyshev_center(HPolytope(A, Eigen::Vector3d(0, 0, 2)));
  CHECK(t.radius == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(chebyshev_center(intersect(box2(-1, 0), box2(1, 2))).radius < 0);
  CHECK(chebyshev_center(HPolytope::empty(2)).radius < 0);
  Eigen::MatrixXd B(2, 2);
  B << -1, 0, 0, -1;
  CHECK(chebyshev_center(HPolytope(B, Eigen::Vector2d(0, 0))).radius ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("slicing") {
  const auto s = slice(box_n(4, -1, 1), {{2, 0.0}, {3, 0.0}});
  CHECK(s.dim() == 2);
  CHECK(set_equal(s, box2(-1, 1), 1e-12));
  CHECK(is_empty(slice(box2(-1, 1), {{1, 5.0}})));

  // Line-of-sight cone |z1| <= z2, |z3|,|z4| <= 0.05, capped at z2 <= 1.
  Eigen::MatrixXd A(7, 4);
  A << 1, -1, 0, 0,
      -1, -1, 0, 0,
       0, 0, 1, 0,
       0, 0, -1, 0,
       0, 0, 0, 1,
       0, 0, 0, -1,
       0, 1, 0, 0;
  Eigen::VectorXd b(7);
  b << 0, 0, 0.05, 0.05, 0.05, 0.05, 1;
  const auto K = slice(HPolytope(A, b), {{2, 0.0}, {3, 0.0}});
  Eigen::MatrixXd T(3, 2);
  T << 1, -1, -1, -1, 0, 1;
  CHECK(set_equal(K, HPolytope(T, Eigen::Vector3d(0, 0, 1)), 1e-12));

  const auto all_in = slice(box2(-1, 1), {{0, 0.0}, {1, 0.5}});
  CHECK(all_in.dim() == 0);
  CHECK_FALSE(is_empty(all_in));
  CHECK(is_empty(slice(box2(-1, 1), {{0, 0.0}, {1, 1.5}})));
  CHECK_THROWS(slice(box2(-1, 1), {{2, 0.0}}));
}

TEST_CASE("outer polygon circumscribes the ellipse") {
  const Ellipsoid E(Eigen::Vector2d(0.1, -0.2), (Eigen::Matrix2d() << 2, 0.3, 0.3, 1).finished(),
                    0.5);
  const auto P = outer_polygon(E, 16);
  const auto H = facets(P);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    const Eigen::VectorXd a = lreach::testing::random_direction(rng, 2);
    CHECK(support(P, a) >= support(E, a) - 1e-12);
    const double mu = a.dot(E.center());
    CHECK(support(H, a) - mu <= (support(E, a) - mu) / std::cos(M_PI / 16) + 1e-9);
  }
}

TEST_CASE("ellipsoid validation") {
  CHECK_THROWS(Ellipsoid(Eigen::Vector2d::Zero(), (Eigen::Matrix2d() << 1, 0.5, 0, 1).finished(), 1));
  CHECK_THROWS(Ellipsoid(Eigen::Vector2d::Zero(), (Eigen::Matrix2d() << 1, 0, 0, -1).finished(), 1));
  CHECK_THROWS(Ellipsoid(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity(), -1));
  const Ellipsoid point(Eigen::Vector2d(1, 2), Eigen::Matrix2d::Identity(), 0.0);
  CHECK(support(point, Eigen::Vector2d(1, 0)) == doctest::Approx(1.0));
}

TEST_CASE("set algebra properties on random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    const auto S = lreach::testing::random_hpolytope(rng, d, 12);
    // H <-> V round trip.
    CHECK(set_equal(facets(vertices(S)), S, 1e-7));
    // Support consistency between representations.
    const auto V = vertices(S);
    for (int k = 0; k < 10; ++k) {
      const Eigen::VectorXd a = lreach::testing::random_direction(rng, d);
      CHECK(std::abs(support(V, a) - support(S, a)) <= 1e-8);
    }
    // (S - E) + E is inside S.
    const Ellipsoid E(Eigen::VectorXd::Zero(d), lreach::testing::random_spd(rng, d, 0.01, 0.05),
                      1.0);
    const auto D = minkowski_diff(S, E);
    if (!is_empty(D)) {
      const auto Evert = vertices(reduce(HPolytope::box(Eigen::VectorXd::Constant(d, -0.05),
                                                        Eigen::VectorXd::Constant(d, 0.05))));
      const auto DV = minkowski_diff(S, Evert);
      if (!is_empty(DV)) CHECK(subset(facets(minkowski_sum(vertices(DV), Evert)), S, 1e-7));
    }
    // Reduction leaves membership unchanged.
    const auto R = reduce(S);
    int mismatches = 0;
    for (int k = 0; k < 200; ++k) {
      const Eigen::VectorXd x = lreach::testing::random_point(rng, d, 2.0);
      if (contains(S, x) != contains(R, x)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}
