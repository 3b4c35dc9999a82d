#pragma once

#include <string>

#include <json.hpp>

#include "apfix/fixedpoint.hpp"
#include "apfix/grid.hpp"
#include "apfix/model.hpp"
#include "apfix/verify.hpp"

namespace apfix {

/// Expression nodes in config files:
///   {"const": c}
///   {"cos": {"amp": a, "freq": w, "phase": p}}   (phase optional)
///   {"sin": {"amp": a, "freq": w, "phase": p}}
///   {"abs": <expr>}       {"exp": <expr>}
///   {"scale": {"by": k, "of": <expr>}}
///   {"sum": [<expr>...]}  {"product": [<expr>...]}
///   {"ramp": slope}       (antiderivative output only)
APExpr expr_from_json(const nlohmann::json& j);
nlohmann::json expr_to_json(const APExpr& e);

/// Model config: {"m":..., "n":..., "b": <expr>,
///                "terms": [{"lambda":..., "r": <expr>, "tau": <expr>}...]}
ModelParams model_from_json(const nlohmann::json& j);
ModelParams model_from_file(const std::string& path);

nlohmann::json theorem_report_to_json(const TheoremReport& rep);
nlohmann::json trace_to_json(const IterationTrace& trace);
std::string trace_to_csv(const IterationTrace& trace);
nlohmann::json residual_report_to_json(const ResidualReport& rep);

/// Solution files: CSV with header `t,value`, one node per line, full
/// double precision.
void write_solution_csv(const std::string& path, const GridFunction& x);
GridFunction read_solution_csv(const std::string& path);

std::string theorem_name(TheoremId id);

}  // namespace apfix
