#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/ellipsoid.hpp"
#include "lreach/geom/polytope.hpp"
#include "lreach/lagrangian/problem.hpp"
#include "lreach/mcsim/simulate.hpp"

namespace lreach::io {

namespace fs = std::filesystem;

/// Malformed input file; the message names the file and the line or field.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes text to path.tmp, then renames it over path.
void write_atomic(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Shortest form with 17 significant digits ("%.17g").
std::string format_number(double x);

// Polytope documents: {"dim": d, "H": [[a_1, ..., a_d, b], ...], "V": [[...], ...]}.
std::string polytope_json(const geom::HPolytope& P);
std::string polytope_json(const geom::VPolytope& P);
std::string ellipsoid_json(const geom::Ellipsoid& E);
std::string disturbance_json(const lagrangian::DisturbanceSet& E);

struct PolytopeDoc {
  int dim = 0;
  std::optional<geom::HPolytope> H;
  std::optional<geom::VPolytope> V;
  /// H if present, otherwise facets of V.
  geom::HPolytope as_h() const;
  /// V if present, otherwise vertices of H.
  geom::VPolytope as_v() const;
};

/// `where` names the source in diagnostics (file name or field path).
PolytopeDoc parse_polytope(const std::string& text, const std::string& where);
PolytopeDoc read_polytope(const fs::path& path);
geom::Ellipsoid parse_ellipsoid(const std::string& text, const std::string& where);

/// Problem file, see README. Either "system": {"A", "B"} with the sets and
/// disturbance spelled out, or "system": {"model": name, ...params}, in which
/// case any explicitly given field overrides the model's.
lagrangian::ReachProblem parse_problem(const std::string& text, const std::string& where);
lagrangian::ReachProblem read_problem(const fs::path& path);
/// Fully explicit problem document (no model shorthand).
std::string problem_json(const lagrangian::ReachProblem& problem);

/// Sets ra_0.json ... ra_N.json and disturbance.json from a solve directory.
lagrangian::ReachResult read_reach_sets(const fs::path& dir);

/// Header x1,x2,V; one row per grid point, first coordinate varying slowest.
std::string value_grid_csv(const dpgrid::StateGrid& grid, const Eigen::MatrixXd& values);
/// Header x1,x2,in with 0/1 entries.
std::string mask_csv(const dpgrid::StateGrid& grid, const dpgrid::Mask& mask);
/// Rebuilds grid and values from value_grid_csv output.
std::pair<dpgrid::StateGrid, Eigen::MatrixXd> parse_value_grid_csv(const std::string& text,
                                                                  const std::string& where);

/// Single polygon for a bounded 2-D set: vertices counterclockwise, viewBox
/// fitted with a 5% margin, 1px stroke. Empty set gives an empty drawing.
std::string polygon_svg(const geom::HPolytope& P);

std::string sim_report_json(const mcsim::SimReport& r, const Eigen::VectorXd& x0);

}  // namespace lreach::io
