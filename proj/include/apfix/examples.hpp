#pragma once

#include <string>
#include <vector>

#include "apfix/model.hpp"

namespace apfix {

/// One row of the reproduction table: a published value next to ours.
struct ReferenceValue {
  std::string name;
  double reference = 0.0;
  double tolerance = 0.0;  ///< admissible |computed - reference|
};

/// Bundled demonstration models. Both share the coefficients
///   r_1(t) = (5 + |cos(sqrt(2) t)|) / 2,   tau_1(t) = 2 e^{cos t},
///   r_2(t) = (13 + 0.6 |sin(sqrt(3) t)|) / 4, tau_2(t) = 2 e^{sin t},
///   b(t)   = 1 + 1.2 cos(400 t),
/// and differ in the exponents:
///   example 1: m = 1.1, n = 0.5 (capped regime does not apply),
///   example 2: m = 1.1, n = 1.2 (capped regime applies).
ModelParams builtin_example(int id);

/// Default bracket base for the bundled examples (4 and 1.3).
double builtin_example_A(int id);

/// Published constants the reproduction command compares against.
std::vector<ReferenceValue> builtin_reference_values(int id);

}  // namespace apfix
