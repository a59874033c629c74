#include <filesystem>
#include <fstream>
#include <random>
#include <regex>

#include "doctest.h"
#include "generators.hpp"
#include "lreach/geom/operations.hpp"
#include "lreach/io/io.hpp"
#include "lreach/lagrangian/recursion.hpp"
#include "lreach/systems/models.hpp"

using namespace lreach;
using io::ParseError;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("lreach_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("polytope documents round-trip to the same set") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 3;
    const auto P = testing::random_hpolytope(rng, d, 8 + trial % 5);
    const auto H = io::parse_polytope(io::polytope_json(P), "mem").as_h();
    CHECK(testing::set_equal(P, H, 1e-7));
    const auto V = io::parse_polytope(io::polytope_json(geom::vertices(P)), "mem");
    REQUIRE(V.V);
    CHECK(testing::set_equal(P, V.as_h(), 1e-7));
  }
}

TEST_CASE("empty polytope is written as an infeasible row") {
  const auto E = geom::HPolytope::empty(3);
  const auto back = io::parse_polytope(io::polytope_json(E), "mem").as_h();
  CHECK(back.dim() == 3);
  CHECK(geom::is_empty(back));
}

TEST_CASE("numbers keep full precision") {
  CHECK(io::format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(io::format_number(M_PI)) == M_PI);
  CHECK_THROWS(io::format_number(std::nan("")));
}

TEST_CASE("parse errors name the line or the field") {
  const std::string bad = "{\n  \"dim\": 2,\n  \"H\": [[1, 0, 1],,\n}";
  CHECK(error_of([&] { io::parse_polytope(bad, "p.json"); }).rfind("p.json:3:", 0) == 0);
  CHECK(error_of([&] { io::parse_polytope("{\"dim\": 2}", "p.json") ; }).find("'H' or 'V'") !=
        std::string::npos);
  CHECK(error_of([&] { io::parse_polytope("{\"dim\": 2, \"H\": [[1, 0]]}", "p.json"); })
            .find("p.json.H[0]") != std::string::npos);
  CHECK(error_of([&] { io::parse_polytope("{\"dim\": 2, \"V\": [[1, \"x\"]]}", "p.json"); })
            .find("p.json.V[0][1]") != std::string::npos);
  CHECK(error_of([&] { io::parse_polytope("{\"H\": []}", "p.json"); }).find("'dim'") !=
        std::string::npos);
  CHECK(error_of([&] { io::read_polytope("/nonexistent/x.json"); }).find("cannot open") !=
        std::string::npos);
}

TEST_CASE("ellipsoid documents round-trip") {
  Eigen::Matrix2d S;
  S << 2, 0.3, 0.3, 1;
  const geom::Ellipsoid E(Eigen::Vector2d(0.5, -1), S, 3.2);
  const auto back = io::parse_ellipsoid(io::ellipsoid_json(E), "e");
  CHECK((back.center() - E.center()).norm() == 0.0);
  CHECK((back.shape() - E.shape()).norm() == 0.0);
  CHECK(back.radius2() == E.radius2());
  CHECK(error_of([&] { io::parse_ellipsoid("{\"center\": [0, 0], \"shape\": [[1, 0]], \"radius2\": 1}", "e"); })
            .find("e.shape") != std::string::npos);
}

TEST_CASE("problem files: model shorthand and explicit form agree") {
  const auto model = io::parse_problem("{\"system\": {\"model\": \"double-integrator\"}}", "m");
  const auto builtin = systems::double_integrator();
  CHECK((model.system.A() - builtin.system.A()).norm() == 0.0);
  CHECK(model.beta == builtin.beta);
  CHECK(model.horizon == builtin.horizon);

  const auto explicit_form = io::parse_problem(io::problem_json(builtin), "x");
  CHECK((explicit_form.system.A() - builtin.system.A()).norm() == 0.0);
  CHECK((explicit_form.system.B() - builtin.system.B()).norm() == 0.0);
  CHECK((explicit_form.system.disturbance().covariance() - builtin.system.disturbance().covariance())
            .norm() == 0.0);
  CHECK(testing::set_equal(explicit_form.safe, builtin.safe, 1e-12));
  CHECK(testing::set_equal(explicit_form.target, builtin.target, 1e-12));
  CHECK(explicit_form.input.size() == builtin.input.size());

  const auto over = io::parse_problem(
      "{\"system\": {\"model\": \"double-integrator\", \"variance\": 0.01}, \"beta\": 0.9, \"horizon\": 3}",
      "o");
  CHECK(over.system.disturbance().covariance()(0, 0) == doctest::Approx(0.01));
  CHECK(over.beta == 0.9);
  CHECK(over.horizon == 3);

  const auto cwh = io::parse_problem("{\"system\": {\"model\": \"cwh\"}}", "c");
  CHECK(cwh.system.n() == 4);
}

TEST_CASE("problem file diagnostics") {
  CHECK(error_of([] { io::parse_problem("{\"system\": {\"model\": \"rocket\"}}", "f"); })
            .find("unknown model 'rocket'") != std::string::npos);
  CHECK(error_of([] { io::parse_problem("{\"system\": {\"model\": \"cwh\"}, \"colour\": 1}", "f"); })
            .find("unknown field 'colour'") != std::string::npos);
  CHECK(error_of([] { io::parse_problem("{\"system\": {\"A\": [[1]], \"B\": [[1]]}}", "f"); })
            .find("missing field 'disturbance'") != std::string::npos);
  CHECK(error_of([] { io::parse_problem("{\"system\": {\"model\": \"cwh\"}, \"beta\": 1.5}", "f"); })
            .find("f:") == 0);
  CHECK(error_of([] { io::parse_problem("{\"system\": {\"model\": \"cwh\"}, \"horizon\": 2.5}", "f"); })
            .find("f: horizon") != std::string::npos);
  CHECK(error_of([] { io::parse_problem("[1, 2]", "f"); }).find("expected an object") !=
        std::string::npos);
}

TEST_CASE("solve output re-parses to the in-memory sets") {
  const auto p = systems::double_integrator();
  const auto r = lagrangian::underapproximate_level_set(p);
  TempDir dir;
  for (std::size_t k = 0; k < r.sets.size(); ++k)
    io::write_atomic(dir.path / ("ra_" + std::to_string(k) + ".json"), io::polytope_json(r.sets[k]));
  io::write_atomic(dir.path / "disturbance.json", io::disturbance_json(r.disturbance_set));
  const auto back = io::read_reach_sets(dir.path);
  REQUIRE(back.sets.size() == r.sets.size());
  for (std::size_t k = 0; k < r.sets.size(); ++k) CHECK(testing::set_equal(back.sets[k], r.sets[k], 1e-7));
  const auto& E0 = std::get<geom::Ellipsoid>(r.disturbance_set);
  const auto& E1 = std::get<geom::Ellipsoid>(back.disturbance_set);
  CHECK(E1.radius2() == E0.radius2());
  CHECK_FALSE(back.empty_step);
}

TEST_CASE("value grid CSV round-trip") {
  const dpgrid::StateGrid g(Eigen::Vector2d(-1, -2), Eigen::Vector2d(1, 2), 5, 7);
  Eigen::MatrixXd V(5, 7);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 7; ++j) V(i, j) = std::sin(0.3 * i + 0.7 * j) / 3.0;
  const std::string csv = io::value_grid_csv(g, V);
  CHECK(csv.rfind("x1,x2,V\n", 0) == 0);
  const auto [g2, V2] = io::parse_value_grid_csv(csv, "v.csv");
  CHECK(g2.count(0) == 5);
  CHECK(g2.count(1) == 7);
  CHECK((V2 - V).norm() == 0.0);
  CHECK((g2.lower() - g.lower()).norm() < 1e-15);

  CHECK(error_of([] { io::parse_value_grid_csv("x,y,z\n", "v.csv"); }).rfind("v.csv:1:", 0) == 0);
  std::string broken = csv;
  broken.replace(broken.find('\n', 10) + 1, 2, "q,");
  CHECK(error_of([&] { io::parse_value_grid_csv(broken, "v.csv"); }).rfind("v.csv:3:", 0) == 0);

  dpgrid::Mask M = dpgrid::Mask::Zero(5, 7);
  M(2, 3) = true;
  const std::string mcsv = io::mask_csv(g, M);
  CHECK(std::count(mcsv.begin(), mcsv.end(), '\n') == 36);
  CHECK(mcsv.find(",1\n") != std::string::npos);
}

TEST_CASE("SVG polygon: counterclockwise vertices and fitted view box") {
  Eigen::MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  const geom::HPolytope tri(A, Eigen::Vector3d(0, 0, 2));  // (0,0), (2,0), (0,2)
  const std::string svg = io::polygon_svg(tri);
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("viewBox=\"([^\"]+)\"")));
  std::istringstream vb(m[1].str());
  double x, y, w, h;
  vb >> x >> y >> w >> h;
  CHECK(x == doctest::Approx(-0.1));
  CHECK(y == doctest::Approx(-2.1));
  CHECK(w == doctest::Approx(2.2));
  CHECK(h == doctest::Approx(2.2));
  CHECK(svg.find("stroke-width=\"1px\"") != std::string::npos);
  REQUIRE(std::regex_search(svg, m, std::regex("points=\"([^\"]+)\"")));
  std::vector<Eigen::Vector2d> pts;
  std::istringstream ps(m[1].str());
  std::string tok;
  while (ps >> tok) {
    const auto c = tok.find(',');
    pts.emplace_back(std::stod(tok.substr(0, c)), -std::stod(tok.substr(c + 1)));
  }
  REQUIRE(pts.size() == 3);
  double area2 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    area2 += p.x() * q.y() - q.x() * p.y();
  }
  CHECK(area2 == doctest::Approx(4.0));
  CHECK(io::polygon_svg(geom::HPolytope::empty(2)).find("<polygon") == std::string::npos);
}

TEST_CASE("atomic write replaces the file and leaves no temporary") {
  TempDir dir;
  const auto f = dir.path / "sub" / "out.txt";
  io::write_atomic(f, "first");
  io::write_atomic(f, "second");
  CHECK(io::read_text(f) == "second");
  CHECK_FALSE(fs::exists(dir.path / "sub" / "out.txt.tmp"));
}

TEST_CASE("simulation report document") {
  mcsim::SimReport r;
  r.samples = 10;
  r.successes = 9;
  r.probability = 0.9;
  r.lower_bound = 0.6058;
  r.seed = 4;
  const auto doc = io::sim_report_json(r, Eigen::Vector2d(0.25, -0.5));
  CHECK(doc.find("\"x0\": [0.25, -0.5]") != std::string::npos);
  CHECK(doc.find("\"successes\": 9") != std::string::npos);
}
