#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "lreach/io/io.hpp"

namespace lreach::io {

std::string value_grid_csv(const dpgrid::StateGrid& grid, const Eigen::MatrixXd& values) {
  std::string s = "x1,x2,V\n";
  for (int i = 0; i < grid.count(0); ++i)
    for (int j = 0; j < grid.count(1); ++j) {
      const Eigen::Vector2d x = grid.point(i, j);
      s += format_number(x[0]) + "," + format_number(x[1]) + "," + format_number(values(i, j)) + "\n";
    }
  return s;
}

std::string mask_csv(const dpgrid::StateGrid& grid, const dpgrid::Mask& mask) {
  std::string s = "x1,x2,in\n";
  for (int i = 0; i < grid.count(0); ++i)
    for (int j = 0; j < grid.count(1); ++j) {
      const Eigen::Vector2d x = grid.point(i, j);
      s += format_number(x[0]) + "," + format_number(x[1]) + (mask(i, j) ? ",1\n" : ",0\n");
    }
  return s;
}

std::pair<dpgrid::StateGrid, Eigen::MatrixXd> parse_value_grid_csv(const std::string& text,
                                                                  const std::string& where) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x1,x2,V")
    throw ParseError(where + ":1: expected header x1,x2,V");
  std::vector<std::array<double, 3>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 3> r{};
    std::istringstream ls(line);
    std::string cell;
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ls, cell, ',')) throw ParseError(where + ":" + std::to_string(lineno) + ": expected 3 columns");
      try {
        std::size_t used = 0;
        r[static_cast<std::size_t>(c)] = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError(where + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (std::getline(ls, cell, ',')) throw ParseError(where + ":" + std::to_string(lineno) + ": expected 3 columns");
    rows.push_back(r);
  }
  if (rows.size() < 4) throw ParseError(where + ": too few grid points");
  // Rows run over x2 fastest: the first block shares x1.
  std::size_t n1 = 1;
  while (n1 < rows.size() && rows[n1][0] == rows[0][0]) ++n1;
  if (n1 < 2 || rows.size() % n1 != 0) throw ParseError(where + ": rows do not form a grid");
  const std::size_t n0 = rows.size() / n1;
  const dpgrid::StateGrid grid(Eigen::Vector2d(rows.front()[0], rows.front()[1]),
                               Eigen::Vector2d(rows.back()[0], rows.back()[1]), static_cast<int>(n0),
                               static_cast<int>(n1));
  Eigen::MatrixXd V(static_cast<Eigen::Index>(n0), static_cast<Eigen::Index>(n1));
  for (std::size_t i = 0; i < n0; ++i)
    for (std::size_t j = 0; j < n1; ++j) {
      const auto& r = rows[i * n1 + j];
      const Eigen::Vector2d x = grid.point(static_cast<int>(i), static_cast<int>(j));
      if (std::abs(r[0] - x[0]) > 1e-9 * (1 + std::abs(x[0])) ||
          std::abs(r[1] - x[1]) > 1e-9 * (1 + std::abs(x[1])))
        throw ParseError(where + ":" + std::to_string(i * n1 + j + 2) + ": point off the uniform grid");
      V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[2];
    }
  return {grid, V};
}

}  // namespace lreach::io
