#include <algorithm>
#include <cmath>

#include "lreach/geom/operations.hpp"
#include "lreach/io/io.hpp"

namespace lreach::io {

std::string polygon_svg(const geom::HPolytope& P) {
  if (P.dim() != 2) throw std::invalid_argument("SVG output needs a 2-D set");
  const std::string head = "<svg xmlns=\"http://www.w3.org/2000/svg\"";
  if (geom::is_empty(P)) return head + " viewBox=\"0 0 1 1\"></svg>\n";
  auto pts = geom::vertices(P).points();
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
  });
  Eigen::Vector2d lo = pts.front(), hi = lo;
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d margin = 0.05 * (hi - lo);
  lo -= margin;
  hi += margin;
  // SVG y grows downward; plot (x, -y) so the picture keeps its orientation.
  std::string s = head + " viewBox=\"" + format_number(lo[0]) + " " + format_number(-hi[1]) + " " +
                  format_number(hi[0] - lo[0]) + " " + format_number(hi[1] - lo[1]) + "\">\n";
  s += "  <polygon points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += " ";
    s += format_number(pts[i][0]) + "," + format_number(-pts[i][1]);
  }
  s += "\" fill=\"none\" stroke=\"black\" stroke-width=\"1px\" vector-effect=\"non-scaling-stroke\"/>\n";
  return s + "</svg>\n";
}

}  // namespace lreach::io
