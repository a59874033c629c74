#pragma once

#include <vector>

#include <Eigen/Dense>

namespace lreach::geom {

/// Extreme points of {x : A x <= b} by the double description method on the
/// homogenized cone {(x, t) : A x - b t <= 0, t >= 0}.
///
/// Signs are decided exactly (GMP integers behind a floating-point filter),
/// so degenerate and nearly degenerate inputs give the exact vertex set of
/// the double-precision data. Throws UnboundedError if the cone has an
/// extreme ray with t = 0 or a nontrivial lineality space. Points closer
/// than 1e-7 are merged. An infeasible system yields no points.
std::vector<Eigen::VectorXd> enumerate_vertices(const Eigen::MatrixXd& A,
                                                const Eigen::VectorXd& b);

struct HullFacets {
  Eigen::MatrixXd A;  // unit-norm rows
  Eigen::VectorXd b;
};

/// Candidate facets of the hull of full-dimensional points from a
/// floating-point double description of the polar. Fast, but on nearly
/// degenerate clouds rows can be missing or slightly off, so the result
/// must be certified by the caller. Throws NotFullDimensionalError for
/// flat point sets.
HullFacets approximate_hull_facets(const std::vector<Eigen::VectorXd>& points);

/// Removes points closer than tol to an earlier point.
std::vector<Eigen::VectorXd> dedup_points(std::vector<Eigen::VectorXd> points,
                                          double tol);

}  // namespace lreach::geom
