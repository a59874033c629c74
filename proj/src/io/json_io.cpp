#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "lreach/geom/operations.hpp"
#include "lreach/io/io.hpp"

namespace lreach::io {

using detail::json;

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_number(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot serialize non-finite number");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string row(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_number(v[i]);
  }
  return s + "]";
}

std::string rows(const std::vector<Eigen::VectorXd>& rs, const std::string& indent) {
  if (rs.empty()) return "[]";
  std::string s = "[\n";
  for (std::size_t i = 0; i < rs.size(); ++i)
    s += indent + "  " + row(rs[i]) + (i + 1 < rs.size() ? ",\n" : "\n");
  return s + indent + "]";
}

std::string matrix(const Eigen::MatrixXd& M, const std::string& indent) {
  std::vector<Eigen::VectorXd> rs;
  for (Eigen::Index i = 0; i < M.rows(); ++i) rs.push_back(M.row(i).transpose());
  return rows(rs, indent);
}

}  // namespace

std::string polytope_json(const geom::HPolytope& P) {
  std::vector<Eigen::VectorXd> rs;
  const int d = P.dim();
  if (P.marked_empty()) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(d + 1);
    r[d] = -1.0;
    rs.push_back(r);
  } else {
    for (int i = 0; i < P.num_facets(); ++i) {
      Eigen::VectorXd r(d + 1);
      r << P.A().row(i).transpose(), P.b()[i];
      rs.push_back(std::move(r));
    }
  }
  return "{\n  \"dim\": " + std::to_string(d) + ",\n  \"H\": " + rows(rs, "  ") + "\n}\n";
}

std::string polytope_json(const geom::VPolytope& P) {
  return "{\n  \"dim\": " + std::to_string(P.dim()) + ",\n  \"V\": " + rows(P.points(), "  ") +
         "\n}\n";
}

std::string ellipsoid_json(const geom::Ellipsoid& E) {
  return "{\n  \"type\": \"ellipsoid\",\n  \"dim\": " + std::to_string(E.dim()) +
         ",\n  \"center\": " + row(E.center()) + ",\n  \"shape\": " + matrix(E.shape(), "  ") +
         ",\n  \"radius2\": " + format_number(E.radius2()) + "\n}\n";
}

std::string disturbance_json(const lagrangian::DisturbanceSet& E) {
  if (const auto* e = std::get_if<geom::Ellipsoid>(&E)) return ellipsoid_json(*e);
  return polytope_json(std::get<geom::VPolytope>(E));
}

geom::HPolytope PolytopeDoc::as_h() const {
  if (H) return *H;
  return geom::facets(*V);
}

geom::VPolytope PolytopeDoc::as_v() const {
  if (V) return *V;
  return geom::vertices(*H);
}

namespace detail {

json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line number.
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ParseError(where + ":" + std::to_string(line) + ": invalid JSON (" + e.what() + ")");
  }
}

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ParseError(where + ": non-finite number");
  return x;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

Eigen::VectorXd vector(const json& j, const std::string& where, int expect) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of numbers");
  if (expect >= 0 && static_cast<int>(j.size()) != expect)
    throw ParseError(where + ": expected " + std::to_string(expect) + " numbers, got " +
                     std::to_string(j.size()));
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& where, int cols) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a non-empty array of rows");
  const auto first = vector(j[0], where + "[0]", cols);
  Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    M.row(static_cast<Eigen::Index>(i)) =
        vector(j[i], where + "[" + std::to_string(i) + "]", static_cast<int>(first.size())).transpose();
  return M;
}

PolytopeDoc polytope(const json& j, const std::string& where) {
  PolytopeDoc doc;
  doc.dim = integer(field(j, "dim", where), where + ".dim");
  if (doc.dim < 1) throw ParseError(where + ".dim: must be positive");
  if (!j.contains("H") && !j.contains("V")) throw ParseError(where + ": needs 'H' or 'V'");
  try {
    if (j.contains("H")) {
      const auto M = matrix(j["H"], where + ".H", doc.dim + 1);
      doc.H = geom::HPolytope(M.leftCols(doc.dim), M.col(doc.dim));
    }
    if (j.contains("V")) {
      const json& V = j["V"];
      if (!V.is_array()) throw ParseError(where + ".V: expected an array of points");
      std::vector<Eigen::VectorXd> pts;
      for (std::size_t i = 0; i < V.size(); ++i)
        pts.push_back(vector(V[i], where + ".V[" + std::to_string(i) + "]", doc.dim));
      doc.V = geom::VPolytope(doc.dim, std::move(pts));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  return doc;
}

geom::Ellipsoid ellipsoid(const json& j, const std::string& where) {
  const auto c = vector(field(j, "center", where), where + ".center", -1);
  const int d = static_cast<int>(c.size());
  const auto S = matrix(field(j, "shape", where), where + ".shape", d);
  if (S.rows() != d) throw ParseError(where + ".shape: expected " + std::to_string(d) + " rows");
  const double r2 = number(field(j, "radius2", where), where + ".radius2");
  try {
    return geom::Ellipsoid(c, S, r2);
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
}

}  // namespace detail

PolytopeDoc parse_polytope(const std::string& text, const std::string& where) {
  return detail::polytope(detail::parse_json(text, where), where);
}

PolytopeDoc read_polytope(const fs::path& path) {
  return parse_polytope(read_text(path), path.string());
}

geom::Ellipsoid parse_ellipsoid(const std::string& text, const std::string& where) {
  return detail::ellipsoid(detail::parse_json(text, where), where);
}

lagrangian::ReachResult read_reach_sets(const fs::path& dir) {
  lagrangian::ReachResult r{.sets = {}, .disturbance_set = geom::VPolytope(1), .steps = {},
                            .empty_step = std::nullopt, .warnings = {}};
  for (int k = 0;; ++k) {
    const fs::path f = dir / ("ra_" + std::to_string(k) + ".json");
    if (!fs::exists(f)) break;
    const auto doc = read_polytope(f);
    r.sets.push_back(doc.as_h());
    if (!r.empty_step && k > 0 && geom::is_empty(r.sets.back())) r.empty_step = k;
  }
  if (r.sets.empty()) throw ParseError((dir / "ra_0.json").string() + ": cannot open");
  const fs::path df = dir / "disturbance.json";
  const std::string text = read_text(df);
  const json j = detail::parse_json(text, df.string());
  if (j.is_object() && j.contains("type") && j["type"] == "ellipsoid")
    r.disturbance_set = detail::ellipsoid(j, df.string());
  else
    r.disturbance_set = detail::polytope(j, df.string()).as_v();
  return r;
}

std::string sim_report_json(const mcsim::SimReport& r, const Eigen::VectorXd& x0) {
  return "{\n  \"x0\": " + row(x0) + ",\n  \"samples\": " + std::to_string(r.samples) +
         ",\n  \"successes\": " + std::to_string(r.successes) +
         ",\n  \"probability\": " + format_number(r.probability) +
         ",\n  \"lower_bound_95\": " + format_number(r.lower_bound) +
         ",\n  \"seed\": " + std::to_string(r.seed) +
         ",\n  \"tube_exits\": " + std::to_string(r.tube_exits) +
         ",\n  \"fallback_steps\": " + std::to_string(r.fallback_steps) + "\n}\n";
}

}  // namespace lreach::io
