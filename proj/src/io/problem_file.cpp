#include <set>

#include "json_util.hpp"
#include "lreach/io/io.hpp"
#include "lreach/systems/models.hpp"

namespace lreach::io {

using detail::json;

namespace {

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ParseError(where + ": unknown field '" + key + "'");
}

double param(const json& sys, const char* key, double fallback, const std::string& where) {
  return sys.contains(key) ? detail::number(sys[key], where + "." + key) : fallback;
}

lagrangian::ReachProblem from_model(const json& sys, const std::string& where) {
  const json& name_j = detail::field(sys, "model", where);
  if (!name_j.is_string()) throw ParseError(where + ".model: expected a string");
  const std::string name = name_j.get<std::string>();
  try {
    if (name == "double-integrator") {
      only_keys(sys, {"model", "T", "variance", "state_bound", "input_bound"}, where);
      systems::DoubleIntegratorParams p;
      p.T = param(sys, "T", p.T, where);
      p.variance = param(sys, "variance", p.variance, where);
      p.state_bound = param(sys, "state_bound", p.state_bound, where);
      p.input_bound = param(sys, "input_bound", p.input_bound, where);
      return systems::double_integrator(p);
    }
    if (name == "cwh") {
      only_keys(sys, {"model", "omega", "mass", "Ts", "z2_cap"}, where);
      systems::CwhParams p;
      p.omega = param(sys, "omega", p.omega, where);
      p.mass = param(sys, "mass", p.mass, where);
      p.Ts = param(sys, "Ts", p.Ts, where);
      p.z2_cap = param(sys, "z2_cap", p.z2_cap, where);
      return systems::cwh_rendezvous(p);
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ".model: unknown model '" + name + "'");
}

}  // namespace

lagrangian::ReachProblem parse_problem(const std::string& text, const std::string& where) {
  const json doc = detail::parse_json(text, where);
  if (!doc.is_object()) throw ParseError(where + ": expected an object");
  only_keys(doc, {"system", "disturbance", "safe_set", "target_set", "input_set", "beta", "horizon"},
            where);
  const json& sys = detail::field(doc, "system", where);
  const std::string ws = where + ": system";

  std::optional<lagrangian::ReachProblem> base;
  Eigen::MatrixXd A, B;
  if (sys.contains("model")) {
    base = from_model(sys, ws);
    A = base->system.A();
    B = base->system.B();
  } else {
    only_keys(sys, {"A", "B"}, ws);
    A = detail::matrix(detail::field(sys, "A", ws), ws + ".A", -1);
    B = detail::matrix(detail::field(sys, "B", ws), ws + ".B", -1);
  }
  const int n = static_cast<int>(A.rows());

  auto polytope_field = [&](const char* key) -> std::optional<PolytopeDoc> {
    if (!doc.contains(key)) return std::nullopt;
    return detail::polytope(doc[key], where + ": " + key);
  };
  auto require = [&](const char* key) {
    if (!base && !doc.contains(key)) throw ParseError(where + ": missing field '" + std::string(key) + "'");
  };
  for (const char* key : {"disturbance", "safe_set", "target_set", "input_set", "beta", "horizon"})
    require(key);

  try {
    std::optional<prob::GaussianDisturbance> dist;
    if (doc.contains("disturbance")) {
      const json& d = doc["disturbance"];
      const std::string wd = where + ": disturbance";
      only_keys(d, {"mean", "covariance"}, wd);
      const auto mean = d.contains("mean") ? detail::vector(d["mean"], wd + ".mean", n)
                                           : Eigen::VectorXd(Eigen::VectorXd::Zero(n));
      const auto cov = detail::matrix(detail::field(d, "covariance", wd), wd + ".covariance", n);
      if (cov.rows() != n) throw ParseError(wd + ".covariance: expected " + std::to_string(n) + " rows");
      dist.emplace(mean, cov);
    } else {
      dist.emplace(base->system.disturbance());
    }
    lagrangian::LinearSystem system(A, B, *dist);

    auto safe = polytope_field("safe_set");
    auto target = polytope_field("target_set");
    auto input = polytope_field("input_set");
    lagrangian::ReachProblem p{
        .system = system,
        .safe = safe ? safe->as_h() : base->safe,
        .target = target ? target->as_h() : base->target,
        .input = input ? input->as_v() : base->input,
        .beta = doc.contains("beta") ? detail::number(doc["beta"], where + ": beta") : base->beta,
        .horizon = doc.contains("horizon") ? detail::integer(doc["horizon"], where + ": horizon")
                                           : base->horizon};
    lagrangian::validate(p);
    return p;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
}

namespace {

std::string indent_doc(std::string doc) {
  // Nest a top-level document two spaces deeper.
  while (!doc.empty() && doc.back() == '\n') doc.pop_back();
  std::string out;
  for (char c : doc) {
    out += c;
    if (c == '\n') out += "  ";
  }
  return out;
}

std::string row(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_number(v[i]);
  return s + "]";
}

std::string matrix(const Eigen::MatrixXd& M) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < M.rows(); ++i) s += (i ? ", " : "") + row(M.row(i).transpose());
  return s + "]";
}

}  // namespace

std::string problem_json(const lagrangian::ReachProblem& p) {
  const auto& d = p.system.disturbance();
  return "{\n  \"system\": {\"A\": " + matrix(p.system.A()) + ", \"B\": " + matrix(p.system.B()) +
         "},\n  \"disturbance\": {\"mean\": " + row(d.mean()) + ", \"covariance\": " +
         matrix(d.covariance()) + "},\n  \"safe_set\": " + indent_doc(polytope_json(p.safe)) +
         ",\n  \"target_set\": " + indent_doc(polytope_json(p.target)) +
         ",\n  \"input_set\": " + indent_doc(polytope_json(p.input)) +
         ",\n  \"beta\": " + format_number(p.beta) + ",\n  \"horizon\": " +
         std::to_string(p.horizon) + "\n}\n";
}

lagrangian::ReachProblem read_problem(const fs::path& path) {
  return parse_problem(read_text(path), path.string());
}

}  // namespace lreach::io
