#pragma once

#include <string>

namespace apfix {

/// Exit codes shared by every subcommand:
///   0 success, 1 hypothesis/validation failure, 2 solve refused,
///   3 missing artifact, 4 internal numeric failure.
struct RunConfig {
  std::string model_path;  ///< config file; empty = use example_id
  int example_id = 0;      ///< 1 or 2; 0 = none
  double A = 0.0;          ///< bracket base; 0 = example default
  double gap_tol = 1e-6;
  double tail_tol = 1e-10;
  double quad_dt = 0.0;    ///< 0 = auto
  double refine_dt = 0.0;  ///< 0 = auto, negative = off
  double dde_step = 1e-3;
  double window_w = 40.0;
  double horizon = 20.0;
  double residual_tol = 1e-3;
  std::string out_dir = "out";
  std::string solution_path;  ///< verify input; empty = <out_dir>/solution.csv
  bool force = false;
};

int cmd_check(const RunConfig& cfg);
int cmd_solve(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_reproduce(const RunConfig& cfg);

}  // namespace apfix
