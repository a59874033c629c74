#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/operations.hpp"

namespace lreach::dpgrid {

ContainmentReport check_containment(const geom::HPolytope& set, const StateGrid& grid,
                                    const Eigen::MatrixXd& V, double beta, double tol,
                                    double margin) {
  if (set.dim() != 2) throw std::invalid_argument("check_containment: set must be 2-D");
  if (V.rows() != grid.count(0) || V.cols() != grid.count(1))
    throw std::invalid_argument("check_containment: value grid shape mismatch");
  if (margin < 0) margin = grid.cell_diagonal();
  ContainmentReport rep;
  if (geom::is_empty(set)) return rep;
  const Eigen::VectorXd norms = set.A().rowwise().norm();
  for (int i = 0; i < grid.count(0); ++i)
    for (int j = 0; j < grid.count(1); ++j) {
      const Eigen::Vector2d x = grid.point(i, j);
      const double depth = ((set.b() - set.A() * x).array() / norms.array()).minCoeff();
      if (depth <= margin) continue;
      ++rep.interior;
      rep.smallest = std::min(rep.smallest, V(i, j));
      if (V(i, j) < beta - tol) {
        ++rep.violations;
        rep.offenders.push_back(x);
      }
    }
  return rep;
}

}  // namespace lreach::dpgrid
