// lreach: command-line front end.
//   solve     Lagrangian reach-avoid (or viability) sets
//   dp        grid dynamic programming on a 2-D problem
//   check     grid value function vs. Lagrangian set
//   simulate  closed-loop Monte Carlo from sampled initial states
//   slice     fix coordinates of a saved polytope
// Exit status: 0 success, 2 empty result or failed check, 1 bad input.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lreach/dpgrid/dp.hpp"
#include "lreach/geom/errors.hpp"
#include "lreach/geom/operations.hpp"
#include "lreach/io/io.hpp"
#include "lreach/lagrangian/recursion.hpp"
#include "lreach/mcsim/simulate.hpp"
#include "lreach/prob/gaussian.hpp"
#include "lreach/systems/models.hpp"

namespace fs = std::filesystem;
using namespace lreach;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitNegative = 2;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct ProblemSource {
  std::string file;
  std::string model;
  lagrangian::ReachProblem load() const {
    if (!file.empty()) return io::read_problem(file);
    try {
      return systems::model_by_name(model);
    } catch (const std::invalid_argument& e) {
      throw io::ParseError(std::string("--model: ") + e.what());
    }
  }
};

void add_problem_options(CLI::App* cmd, ProblemSource& src) {
  auto* f = cmd->add_option("--problem", src.file, "problem file (JSON)");
  auto* m = cmd->add_option("--model", src.model, "built-in model: double-integrator | cwh");
  f->excludes(m);
  m->excludes(f);
}

void require_one(const ProblemSource& src) {
  if (src.file.empty() && src.model.empty()) throw io::ParseError("one of --problem or --model is required");
}

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

std::string string_list(const std::vector<std::string>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + json_string(xs[i]);
  return s + "]";
}

// ---- solve -------------------------------------------------------------

struct SolveArgs {
  ProblemSource src;
  std::string out;
  bool viability = false;
  double e_scale = 1.0;
};

int run_solve(const SolveArgs& a) {
  require_one(a.src);
  const auto problem = a.src.load();
  if (!(a.e_scale >= 0.0)) throw io::ParseError("--e-scale: must be non-negative");

  const auto t0 = Clock::now();
  lagrangian::ReachResult r = [&] {
    if (a.viability) return lagrangian::viability(problem, problem.horizon);
    if (a.e_scale == 1.0) return lagrangian::underapproximate_level_set(problem);
    const double p = std::pow(problem.beta, 1.0 / problem.horizon);
    const auto E = prob::disturbance_level_set(problem.system.disturbance(), p);
    const geom::Ellipsoid scaled(E.center(), E.shape(), E.radius2() * a.e_scale * a.e_scale);
    return lagrangian::robust_reach_avoid(problem, scaled, problem.horizon);
  }();
  const double elapsed = seconds_since(t0);

  const fs::path out(a.out);
  fs::create_directories(out);
  for (std::size_t k = 0; k < r.sets.size(); ++k)
    io::write_atomic(out / ("ra_" + std::to_string(k) + ".json"), io::polytope_json(r.sets[k]));
  io::write_atomic(out / "disturbance.json", io::disturbance_json(r.disturbance_set));
  io::write_atomic(out / "problem.json", io::problem_json(problem));

  std::string steps = "[";
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    steps += (k ? ", " : "") + std::string("{\"facets\": ") + std::to_string(r.steps[k].facets) +
             ", \"vertices\": " + std::to_string(r.steps[k].vertices) + "}";
  steps += "]";
  const std::string summary =
      "{\n  \"mode\": " + json_string(a.viability ? "viability" : "reach-avoid") +
      ",\n  \"horizon\": " + std::to_string(problem.horizon) +
      ",\n  \"beta\": " + io::format_number(problem.beta) +
      ",\n  \"e_scale\": " + io::format_number(a.e_scale) +
      ",\n  \"seconds\": " + io::format_number(elapsed) + ",\n  \"steps\": " + steps +
      ",\n  \"empty_step\": " + (r.empty_step ? std::to_string(*r.empty_step) : "null") +
      ",\n  \"warnings\": " + string_list(r.warnings) + "\n}\n";
  io::write_atomic(out / "summary.json", summary);

  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::printf("solved %d steps in %.3f s\n", static_cast<int>(r.sets.size()) - 1, elapsed);
  for (std::size_t k = 0; k < r.steps.size(); ++k)
    std::printf("  RA_%zu: %d facets, %d vertices\n", k, r.steps[k].facets, r.steps[k].vertices);
  if (r.empty_step) {
    std::printf("set is empty from step %d\n", *r.empty_step);
    return kExitNegative;
  }
  return kExitOk;
}

// ---- dp ----------------------------------------------------------------

struct DpArgs {
  ProblemSource src;
  std::string out;
  int grid = 41;
  int inputs = 21;
  std::optional<double> beta;
  bool robust = false;
};

int run_dp(const DpArgs& a) {
  require_one(a.src);
  const auto problem = a.src.load();
  if (problem.system.n() != 2) throw io::ParseError("dp: only 2-D state spaces are supported");
  if (a.grid < 2) throw io::ParseError("--grid: need at least 2 nodes per axis");
  if (a.inputs < 1) throw io::ParseError("--inputs: must be positive");
  const double beta = a.beta.value_or(problem.beta);
  if (!(beta >= 0.0 && beta <= 1.0)) throw io::ParseError("--beta: must lie in [0, 1]");

  const auto grid = dpgrid::StateGrid::covering(problem, a.grid, a.grid);
  const auto t0 = Clock::now();
  const auto vg = dpgrid::stochastic_dp(problem, grid, a.inputs);
  const double elapsed = seconds_since(t0);

  const fs::path out(a.out);
  fs::create_directories(out);
  for (int k = 0; k <= vg.horizon(); ++k)
    io::write_atomic(out / ("value_" + std::to_string(k) + ".csv"),
                     io::value_grid_csv(grid, vg.values[static_cast<std::size_t>(k)]));
  const auto mask = dpgrid::level_set_mask(vg, vg.horizon(), beta);
  io::write_atomic(out / "mask.csv", io::mask_csv(grid, mask));

  double robust_seconds = 0.0;
  if (a.robust) {
    const double p = std::pow(problem.beta, 1.0 / problem.horizon);
    const auto E = prob::disturbance_level_set(problem.system.disturbance(), p);
    const auto t1 = Clock::now();
    const auto rg = dpgrid::robust_dp(problem, geom::outer_polygon(E, 32), grid, a.inputs);
    robust_seconds = seconds_since(t1);
    io::write_atomic(out / "robust_0.csv", io::value_grid_csv(grid, rg.J[0].cast<double>()));
  }

  const std::string summary =
      "{\n  \"grid\": " + std::to_string(a.grid) + ",\n  \"inputs\": " + std::to_string(a.inputs) +
      ",\n  \"beta\": " + io::format_number(beta) + ",\n  \"horizon\": " + std::to_string(vg.horizon()) +
      ",\n  \"seconds\": " + io::format_number(elapsed) +
      ",\n  \"mask_points\": " + std::to_string(mask.count()) +
      (a.robust ? ",\n  \"robust_seconds\": " + io::format_number(robust_seconds) : std::string()) +
      "\n}\n";
  io::write_atomic(out / "summary.json", summary);
  std::printf("dp on %dx%d grid, %d inputs: %.3f s, %ld points with V0 >= %g\n", a.grid, a.grid,
              a.inputs, elapsed, static_cast<long>(mask.count()), beta);
  return kExitOk;
}

// ---- check -------------------------------------------------------------

struct CheckArgs {
  std::string lagrangian;
  std::string dp;
  std::optional<double> beta;
  double tol = 0.02;
};

std::optional<double> summary_number(const fs::path& file, const char* key) {
  if (!fs::exists(file)) return std::nullopt;
  const auto j = nlohmann::json::parse(io::read_text(file), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains(key) || !j[key].is_number()) return std::nullopt;
  return j[key].get<double>();
}

int run_check(const CheckArgs& a) {
  const fs::path ldir(a.lagrangian), ddir(a.dp);
  const auto sets = io::read_reach_sets(ldir);
  const auto& ra = sets.final_set();
  const auto beta = a.beta ? a.beta : summary_number(ldir / "summary.json", "beta");
  if (!beta) throw io::ParseError("--beta not given and not found in " + (ldir / "summary.json").string());
  if (ra.dim() != 2) throw io::ParseError("check: Lagrangian set is not 2-D");

  const fs::path vfile = ddir / "value_0.csv";
  const auto [grid, V] = io::parse_value_grid_csv(io::read_text(vfile), vfile.string());
  const auto rep = dpgrid::check_containment(ra, grid, V, *beta, a.tol);
  for (std::size_t i = 0; i < rep.offenders.size() && i < 10; ++i) {
    const auto& x = rep.offenders[i];
    std::printf("  violation at (%.6g, %.6g)\n", x[0], x[1]);
  }
  std::printf("interior grid points: %ld, violations: %ld (beta %g, tol %g)\n", rep.interior,
              rep.violations, *beta, a.tol);
  if (rep.interior) std::printf("smallest V0 inside: %.6g\n", rep.smallest);
  const auto tl = summary_number(ldir / "summary.json", "seconds");
  const auto td = summary_number(ddir / "summary.json", "seconds");
  if (tl && td && *tl > 0) std::printf("dp / lagrangian time: %.1f\n", *td / *tl);
  return rep.violations == 0 ? kExitOk : kExitNegative;
}

// ---- simulate ----------------------------------------------------------

struct SimArgs {
  ProblemSource src;
  std::string sets;
  long samples = 100000;
  std::uint64_t seed = 1;
  int states = 20;
  std::string noise = "gaussian";
  std::string out;
};

int run_simulate(const SimArgs& a) {
  const fs::path dir(a.sets);
  const auto problem = (a.src.file.empty() && a.src.model.empty())
                           ? io::read_problem(dir / "problem.json")
                           : a.src.load();
  const auto result = io::read_reach_sets(dir);
  if (static_cast<int>(result.sets.size()) != problem.horizon + 1)
    throw io::ParseError(dir.string() + ": expected " + std::to_string(problem.horizon + 1) + " sets");
  if (a.samples < 1) throw io::ParseError("--samples: must be positive");
  if (a.states < 1) throw io::ParseError("--states: must be positive");

  mcsim::SimOptions opt;
  opt.seed = a.seed;
  opt.trials = a.samples;
  if (a.noise == "gaussian") opt.noise = mcsim::NoiseMode::kGaussian;
  else if (a.noise == "zero") opt.noise = mcsim::NoiseMode::kZero;
  else if (a.noise == "conditional") opt.noise = mcsim::NoiseMode::kConditional;
  else throw io::ParseError("--noise: expected gaussian, zero or conditional");

  if (geom::is_empty(result.final_set())) {
    std::printf("initial set is empty, nothing to simulate\n");
    return kExitNegative;
  }
  const auto starts = mcsim::hit_and_run(result.final_set(), a.states, a.seed);
  const double need = problem.beta - 0.01;
  bool ok = true;
  std::string reports = "[";
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const auto r = mcsim::simulate(problem, result, starts[i], opt);
    ok = ok && r.lower_bound >= need;
    std::ostringstream x;
    for (Eigen::Index c = 0; c < starts[i].size(); ++c) x << (c ? ", " : "") << starts[i][c];
    std::printf("state %2zu [%s]: %ld/%ld, p = %.5f, lower 95%% = %.5f%s\n", i + 1, x.str().c_str(),
                r.successes, r.samples, r.probability, r.lower_bound, r.lower_bound >= need ? "" : "  LOW");
    std::string doc = io::sim_report_json(r, starts[i]);
    while (!doc.empty() && doc.back() == '\n') doc.pop_back();
    reports += (i ? ",\n" : "\n") + doc;
  }
  reports += "\n]\n";
  if (!a.out.empty()) io::write_atomic(a.out, reports);
  std::printf("%s: every lower bound %s %.4f\n", ok ? "pass" : "fail", ok ? ">=" : "not >=", need);
  return ok ? kExitOk : kExitNegative;
}

// ---- slice -------------------------------------------------------------

struct SliceArgs {
  std::string set;
  std::string fix;
  std::string out;
  std::string svg;
};

std::map<int, double> parse_fix(const std::string& text, int dim) {
  std::map<int, double> fixed;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw io::ParseError("--fix: expected i=v, got '" + item + "'");
    try {
      std::size_t used = 0;
      const int idx = std::stoi(item.substr(0, eq), &used);
      if (used != eq) throw std::invalid_argument(item);
      const std::string vs = item.substr(eq + 1);
      const double v = std::stod(vs, &used);
      if (used != vs.size() || !std::isfinite(v)) throw std::invalid_argument(item);
      if (idx < 1 || idx > dim) throw io::ParseError("--fix: index " + std::to_string(idx) + " out of range 1.." + std::to_string(dim));
      if (!fixed.emplace(idx - 1, v).second) throw io::ParseError("--fix: index " + std::to_string(idx) + " given twice");
    } catch (const io::ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw io::ParseError("--fix: cannot read '" + item + "'");
    }
  }
  if (fixed.empty()) throw io::ParseError("--fix: nothing to fix");
  if (static_cast<int>(fixed.size()) >= dim) throw io::ParseError("--fix: at least one coordinate must stay free");
  return fixed;
}

int run_slice(const SliceArgs& a) {
  const auto P = io::read_polytope(a.set).as_h();
  const auto S = geom::slice(P, parse_fix(a.fix, P.dim()));
  if (geom::is_empty(S)) {
    std::cerr << "warning: slice is empty\n";
    io::write_atomic(a.out, "");
    if (!a.svg.empty() && S.dim() == 2) io::write_atomic(a.svg, io::polygon_svg(S));
    return kExitOk;
  }
  const auto R = geom::reduce(S);
  io::write_atomic(a.out, io::polytope_json(R));
  if (!a.svg.empty()) {
    if (R.dim() != 2) throw io::ParseError("--svg: slice is " + std::to_string(R.dim()) + "-D, need 2-D");
    io::write_atomic(a.svg, io::polygon_svg(R));
  }
  std::printf("slice: %d-D, %d facets\n", R.dim(), R.num_facets());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic reach-avoid sets by Lagrangian methods"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "Lagrangian reach-avoid or viability sets");
  add_problem_options(c_solve, solve.src);
  c_solve->add_option("--out", solve.out, "output directory")->required();
  c_solve->add_flag("--viability", solve.viability, "viability kernel of the safe set (E = {0})");
  c_solve->add_option("--e-scale", solve.e_scale, "scale the disturbance set (1 = exact level set)");

  DpArgs dp;
  auto* c_dp = app.add_subcommand("dp", "grid dynamic programming (2-D only)");
  add_problem_options(c_dp, dp.src);
  c_dp->add_option("--out", dp.out, "output directory")->required();
  c_dp->add_option("--grid", dp.grid, "nodes per axis")->capture_default_str();
  c_dp->add_option("--inputs", dp.inputs, "input samples per axis")->capture_default_str();
  c_dp->add_option("--beta", dp.beta, "level for mask.csv (default: problem beta)");
  c_dp->add_flag("--robust", dp.robust, "also run the minmax recursion");

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "compare a dp value function with a Lagrangian set");
  c_check->add_option("--lagrangian", check.lagrangian, "solve output directory")->required();
  c_check->add_option("--dp", check.dp, "dp output directory")->required();
  c_check->add_option("--beta", check.beta, "level (default: from the solve summary)");
  c_check->add_option("--tol", check.tol, "allowed shortfall below beta")->capture_default_str();

  SimArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "closed-loop Monte Carlo");
  add_problem_options(c_sim, sim.src);
  c_sim->add_option("--sets", sim.sets, "solve output directory")->required();
  c_sim->add_option("--samples", sim.samples, "trials per initial state")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "random seed")->capture_default_str();
  c_sim->add_option("--states", sim.states, "initial states drawn from the final set")->capture_default_str();
  c_sim->add_option("--noise", sim.noise, "gaussian | zero | conditional")->capture_default_str();
  c_sim->add_option("--out", sim.out, "JSON report file");

  SliceArgs sl;
  auto* c_slice = app.add_subcommand("slice", "fix coordinates of a polytope");
  c_slice->add_option("--set", sl.set, "polytope file")->required();
  c_slice->add_option("--fix", sl.fix, "comma-separated i=v, 1-based")->required();
  c_slice->add_option("--out", sl.out, "output polytope file")->required();
  c_slice->add_option("--svg", sl.svg, "also draw the slice (2-D)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  try {
    if (*c_solve) return run_solve(solve);
    if (*c_dp) return run_dp(dp);
    if (*c_check) return run_check(check);
    if (*c_sim) return run_simulate(sim);
    if (*c_slice) return run_slice(sl);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
