#include "apfix/examples.hpp"

#include <cmath>

#include "apfix/errors.hpp"

namespace apfix {

namespace {

ModelParams make_example(double m, double n) {
  const double sqrt2 = std::sqrt(2.0);
  const double sqrt3 = std::sqrt(3.0);

  APExpr r1 = APExpr::scale(
      0.5, APExpr::sum({APExpr::constant(5.0), APExpr::abs_of(APExpr::cosine(1.0, sqrt2))}));
  APExpr tau1 = APExpr::scale(2.0, APExpr::exp_of(APExpr::cosine(1.0, 1.0)));

  APExpr r2 = APExpr::scale(
      0.25, APExpr::sum({APExpr::constant(13.0),
                         APExpr::scale(0.6, APExpr::abs_of(APExpr::sine(1.0, sqrt3)))}));
  APExpr tau2 = APExpr::scale(2.0, APExpr::exp_of(APExpr::sine(1.0, 1.0)));

  APExpr b = APExpr::sum({APExpr::constant(1.0), APExpr::cosine(1.2, 400.0)});

  std::vector<ModelTerm> terms;
  terms.push_back(ModelTerm{1.0, std::move(r1), std::move(tau1), {}, {}});
  terms.push_back(ModelTerm{1.0, std::move(r2), std::move(tau2), {}, {}});
  return ModelParams::create(m, n, std::move(terms), std::move(b));
}

}  // namespace

ModelParams builtin_example(int id) {
  switch (id) {
    case 1: return make_example(1.1, 0.5);
    case 2: return make_example(1.1, 1.2);
    default: throw DomainError("unknown example id " + std::to_string(id) + "; use 1 or 2");
  }
}

double builtin_example_A(int id) {
  switch (id) {
    case 1: return 4.0;
    case 2: return 1.3;
    default: throw DomainError("unknown example id " + std::to_string(id) + "; use 1 or 2");
  }
}

std::vector<ReferenceValue> builtin_reference_values(int id) {
  const double fs = std::exp(1.2 / 200.0);
  if (id == 1) {
    return {
        {"B", 81.14408, 5e-5},
        {"threshold_A", 0.0625, 1e-12},
        {"F_s", fs, 1e-12},
        {"(1+A^n)/A^(m-1)", 2.6116, 5e-4},
        {"sum lambda r^-", 5.75, 1e-12},
        {"sum lambda r^- / b^+", 5.75 / 2.2, 5e-4},
        {"F_s sum lambda r^+ / (b*)^-", fs * 6.4, 5e-4},
        {"(1+B^n)/B^(m-1)", 6.4479, 5e-4},
        {"M[b]", 1.0, 1e-12},
        {"b^+", 2.2, 1e-12},
    };
  }
  if (id == 2) {
    return {
        {"B", 7.56193, 5e-5},
        {"threshold_A", 0.13557, 5e-5},
        {"F_s", fs, 1e-12},
        {"(1+A^n)/A^(m-1)", 2.30866, 5e-5},
        {"sum lambda r^-", 5.75, 1e-12},
        {"F_s sum lambda r^+ / (b*)^-", 6.4385, 5e-4},
        {"M[b]", 1.0, 1e-12},
        {"b^+", 2.2, 1e-12},
    };
  }
  throw DomainError("unknown example id " + std::to_string(id) + "; use 1 or 2");
}

}  // namespace apfix
