#pragma once

#include <limits>
#include <map>

#include <Eigen/Dense>

#include "lreach/geom/ellipsoid.hpp"
#include "lreach/geom/errors.hpp"
#include "lreach/geom/polytope.hpp"

namespace lreach::geom {

/// Chebyshev radius below this value means the set is empty (or flat).
inline constexpr double kEmptyRadius = 1e-10;
inline constexpr double kContainsTol = 1e-9;
inline constexpr double kVertexMergeTol = 1e-7;

// Support function sup{a'x : x in S}. +inf if unbounded along a, -inf for an
// empty set. A zero direction is rejected with "degenerate direction".
double support(const HPolytope& S, const Eigen::VectorXd& a);
double support(const VPolytope& S, const Eigen::VectorXd& a);
double support(const Ellipsoid& S, const Eigen::VectorXd& a);

struct ChebyshevBall {
  Eigen::VectorXd center;
  double radius = -std::numeric_limits<double>::infinity();
};

/// Largest inscribed ball. radius < 0 for empty sets, +inf when the set
/// contains arbitrarily large balls.
ChebyshevBall chebyshev_center(const HPolytope& S);

bool is_empty(const HPolytope& S);

enum class Extent { kEmpty, kFlat, kFullDimensional };
/// Distinguishes infeasible sets from nonempty sets with no interior.
Extent extent(const HPolytope& S);

/// Removes redundant halfspaces and sorts rows lexicographically. Sets with
/// Chebyshev radius below kEmptyRadius come back as HPolytope::empty.
HPolytope reduce(const HPolytope& S);
/// Keeps only extreme points, sorted lexicographically.
VPolytope reduce(const VPolytope& S);

HPolytope intersect(const HPolytope& S1, const HPolytope& S2);

/// Pontryagin difference {x : x + e in S for all e in E}.
HPolytope minkowski_diff(const HPolytope& S, const Ellipsoid& E);
HPolytope minkowski_diff(const HPolytope& S, const VPolytope& E);

VPolytope minkowski_sum(const VPolytope& S, const VPolytope& P);

/// {x : M x in S}; M must be square with condition number <= 1e12.
HPolytope affine_preimage(const HPolytope& S, const Eigen::MatrixXd& M);

/// Image {M x : x in S} of a vertex list.
VPolytope linear_map(const VPolytope& S, const Eigen::MatrixXd& M);

/// H -> V. Empty input gives an empty VPolytope.
VPolytope vertices(const HPolytope& S);
/// V -> H through the polar dual of the centred point set.
HPolytope facets(const VPolytope& S);

bool contains(const HPolytope& S, const Eigen::VectorXd& x,
              double tol = kContainsTol);
/// Hull membership by a separating-hyperplane LP.
bool contains(const VPolytope& S, const Eigen::VectorXd& x,
              double tol = kContainsTol);
/// inner subset of outer, checked facet by facet with support LPs.
bool subset(const HPolytope& inner, const HPolytope& outer,
            double tol = kContainsTol);

/// Fixes the coordinates in `fixed` (index -> value) and returns the set in
/// the remaining coordinates, in increasing index order.
HPolytope slice(const HPolytope& S, const std::map<int, double>& fixed);

/// Regular polygon circumscribing a 2-D ellipsoid.
VPolytope outer_polygon(const Ellipsoid& E, int sides);

}  // namespace lreach::geom
