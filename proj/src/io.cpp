#include "apfix/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "apfix/errors.hpp"

namespace apfix {

using nlohmann::json;

APExpr expr_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1)
    throw DomainError("expression node must be a single-key object: " + j.dump());
  const auto it = j.begin();
  const std::string& kind = it.key();
  const json& body = it.value();

  if (kind == "const") return APExpr::constant(body.get<double>());
  if (kind == "ramp") return APExpr::ramp(body.get<double>());
  if (kind == "cos" || kind == "sin") {
    const double amp = body.at("amp").get<double>();
    const double freq = body.at("freq").get<double>();
    const double phase = body.value("phase", 0.0);
    return kind == "cos" ? APExpr::cosine(amp, freq, phase) : APExpr::sine(amp, freq, phase);
  }
  if (kind == "abs") return APExpr::abs_of(expr_from_json(body));
  if (kind == "exp") return APExpr::exp_of(expr_from_json(body));
  if (kind == "scale")
    return APExpr::scale(body.at("by").get<double>(), expr_from_json(body.at("of")));
  if (kind == "sum" || kind == "product") {
    if (!body.is_array() || body.empty())
      throw DomainError("'" + kind + "' needs a nonempty array of children");
    std::vector<APExpr> children;
    children.reserve(body.size());
    for (const auto& c : body) children.push_back(expr_from_json(c));
    return kind == "sum" ? APExpr::sum(std::move(children))
                         : APExpr::product(std::move(children));
  }
  throw DomainError("unknown expression node kind '" + kind + "'");
}

json expr_to_json(const APExpr& e) {
  struct Visitor {
    json operator()(const APExpr::Constant& n) const { return json{{"const", n.value}}; }
    json operator()(const APExpr::Ramp& n) const { return json{{"ramp", n.slope}}; }
    json operator()(const APExpr::Sinusoid& n) const {
      json body{{"amp", n.amp}, {"freq", n.freq}, {"phase", n.phase}};
      return json{{n.is_sin ? "sin" : "cos", body}};
    }
    json operator()(const APExpr::Abs& n) const { return json{{"abs", expr_to_json(*n.child)}}; }
    json operator()(const APExpr::ExpOf& n) const { return json{{"exp", expr_to_json(*n.child)}}; }
    json operator()(const APExpr::Scale& n) const {
      return json{{"scale", json{{"by", n.factor}, {"of", expr_to_json(*n.child)}}}};
    }
    json operator()(const APExpr::Sum& n) const {
      json arr = json::array();
      for (const auto& c : n.children) arr.push_back(expr_to_json(c));
      return json{{"sum", arr}};
    }
    json operator()(const APExpr::Product& n) const {
      json arr = json::array();
      for (const auto& c : n.children) arr.push_back(expr_to_json(c));
      return json{{"product", arr}};
    }
  };
  return std::visit(Visitor{}, e.node());
}

ModelParams model_from_json(const json& j) {
  const double m = j.at("m").get<double>();
  const double n = j.at("n").get<double>();
  APExpr b = expr_from_json(j.at("b"));
  std::vector<ModelTerm> terms;
  for (const auto& t : j.at("terms")) {
    ModelTerm term{t.value("lambda", 1.0), expr_from_json(t.at("r")), expr_from_json(t.at("tau")),
                   {}, {}};
    terms.push_back(std::move(term));
  }
  return ModelParams::create(m, n, std::move(terms), std::move(b));
}

ModelParams model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model config '" + path + "'");
  json j;
  in >> j;
  return model_from_json(j);
}

std::string theorem_name(TheoremId id) {
  switch (id) {
    case TheoremId::T1: return "T1";
    case TheoremId::T2: return "T2";
    default: return "none";
  }
}

namespace {

json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

json theorem_report_to_json(const TheoremReport& rep) {
  json chain = json::array();
  for (const auto& e : rep.chain) {
    chain.push_back(json{{"name", e.name},
                         {"lhs", e.lhs},
                         {"relation", e.relation},
                         {"rhs", e.rhs},
                         {"pass", e.pass}});
  }
  return json{{"theorem", theorem_name(rep.theorem)},
              {"A", rep.A},
              {"B", number_or_null(rep.B)},
              {"V", number_or_null(rep.V)},
              {"threshold", number_or_null(rep.threshold)},
              {"applicable", rep.applicable},
              {"chain", chain},
              {"uncertified_bounds", rep.uncertified_bounds}};
}

json trace_to_json(const IterationTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    steps.push_back(json{{"n", s.n},
                         {"lambda", s.lambda},
                         {"gap", s.gap},
                         {"sup_u", s.sup_u},
                         {"inf_u", s.inf_u}});
  }
  const char* reason = trace.reason == StopReason::GapTol      ? "gap_tol"
                       : trace.reason == StopReason::LambdaTol ? "lambda_tol"
                                                               : "max_iter";
  return json{{"converged", trace.converged},
              {"reason", reason},
              {"steps", steps},
              {"warnings", trace.warnings}};
}

std::string trace_to_csv(const IterationTrace& trace) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "n,lambda,gap\n";
  for (const auto& s : trace.steps) os << s.n << "," << s.lambda << "," << s.gap << "\n";
  return os.str();
}

json residual_report_to_json(const ResidualReport& rep) {
  return json{{"sup_ode_residual", rep.sup_ode_residual},
              {"sup_voc_residual", rep.sup_voc_residual},
              {"drift_horizon", rep.drift_horizon},
              {"sup_drift", rep.sup_drift},
              {"sample_count", rep.sample_count}};
}

void write_solution_csv(const std::string& path, const GridFunction& x) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error("cannot write solution file '" + path + "'");
  out << std::setprecision(17);
  out << "t,value\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << x.node_time(i) << "," << x[i] << "\n";
}

GridFunction read_solution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open solution file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error("solution file '" + path + "' is empty");
  std::vector<double> times, values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error("bad solution line: " + line);
    times.push_back(std::stod(line.substr(0, comma)));
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  if (times.size() < 2) throw Error("solution file '" + path + "' has fewer than two nodes");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  return GridFunction(times.front(), dt, std::move(values));
}

}  // namespace apfix
