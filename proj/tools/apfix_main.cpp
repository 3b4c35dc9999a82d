#include <CLI11.hpp>

#include "apfix/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"almost-periodic fixed-point solver for the delayed hematopoiesis model"};
  app.require_subcommand(1);

  apfix::RunConfig cfg;

  const auto add_common = [&](CLI::App* sub, bool needs_model) {
    if (needs_model) {
      sub->add_option("--model", cfg.model_path, "model config (JSON)");
      sub->add_option("--example", cfg.example_id, "built-in example id (1 or 2)");
    } else {
      sub->add_option("--example", cfg.example_id, "built-in example id (1 or 2)")->required();
    }
    sub->add_option("--A", cfg.A, "bracket base A (default: example's value)");
    sub->add_option("--out", cfg.out_dir, "output directory (default: out)");
  };
  const auto add_tolerances = [&](CLI::App* sub) {
    sub->add_option("--gap-tol", cfg.gap_tol, "iteration gap tolerance");
    sub->add_option("--tail-tol", cfg.tail_tol, "admissible truncated tail mass");
    sub->add_option("--quad-dt", cfg.quad_dt, "quadrature step (0 = auto)");
    sub->add_option("--refine-dt", cfg.refine_dt,
                    "verification lattice step (0 = auto, negative = off)");
    sub->add_option("--window", cfg.window_w, "solve window length W");
  };

  CLI::App* check = app.add_subcommand("check", "evaluate the hypothesis chains");
  add_common(check, true);

  CLI::App* solve = app.add_subcommand("solve", "run the sandwich iteration");
  add_common(solve, true);
  add_tolerances(solve);
  solve->add_flag("--force", cfg.force, "iterate even if no hypothesis chain passes");

  CLI::App* verify = app.add_subcommand("verify", "cross-validate a solved trajectory");
  add_common(verify, true);
  verify->add_option("--solution", cfg.solution_path, "solution CSV (default: <out>/solution.csv)");
  verify->add_option("--dde-step", cfg.dde_step, "step for the forward integration");
  verify->add_option("--horizon", cfg.horizon, "drift horizon");
  verify->add_option("--residual-tol", cfg.residual_tol, "pass/fail residual threshold");
  verify->add_option("--window", cfg.window_w, "window the solution was solved on");

  CLI::App* reproduce =
      app.add_subcommand("reproduce", "re-derive an example end to end at pinned tolerances");
  add_common(reproduce, false);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) return apfix::cmd_check(cfg);
  if (solve->parsed()) return apfix::cmd_solve(cfg);
  if (verify->parsed()) return apfix::cmd_verify(cfg);
  if (reproduce->parsed()) return apfix::cmd_reproduce(cfg);
  return 0;
}
