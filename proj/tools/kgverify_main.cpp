#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include "CLI11.hpp"

#include "kg/solver.hpp"
#include "kg/suite.hpp"

namespace {

int print_report(const kg::SuiteReport& rep, const std::string& out_dir) {
  for (const auto& r : rep.records) {
    std::printf("[%s] %-28s measured %-13.6g threshold %-13.6g %s\n", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.measured, r.threshold, r.note.c_str());
  }
  std::printf("%s: %d passed, %d failed, %.1f s\n", rep.suite.c_str(), rep.passed(), rep.failed(),
              rep.wall_seconds);
  if (!out_dir.empty()) {
    kg::write_report(rep, out_dir);
    std::printf("report written under %s\n", out_dir.c_str());
  }
  return rep.failed() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for kinetic self-improvement estimates"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, pin_path;
  std::uint64_t seed = 0;
  bool have_seed = false, update_pins = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "override the experiment seed")->each([&](const std::string&) {
    have_seed = true;
  });
  app.add_option("--out", out_dir, "output directory for reports and fields");
  app.add_option("--pin", pin_path, "pinned-regression values file");
  app.add_flag("--update-pins", update_pins, "recalibrate pinned values instead of checking");

  auto* c_const = app.add_subcommand("constants", "print the exact constants pipeline as JSON");
  auto* c_verify = app.add_subcommand("verify", "run one verification suite");
  std::string suite;
  c_verify->add_option("suite", suite,
                       "geometry | covering | localization | layercake | constants | solver | "
                       "gehring | all (default: config value or all)");
  auto* c_solve = app.add_subcommand("solve", "run the spike benchmark and store the field");
  auto* c_report = app.add_subcommand("report", "run every suite and write reports");

  CLI11_PARSE(app, argc, argv);

  try {
    kg::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = kg::load_config(config_path);
    if (have_seed) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!pin_path.empty()) cfg.pins_path = pin_path;
    if (update_pins) cfg.update_pins = true;

    if (*c_const) {
      const kg::ConstantsReport rep = kg::compute_constants_midpoint(cfg.params);
      std::printf("%s\n", kg::constants_json(rep).c_str());
      return 0;
    }
    if (*c_verify) {
      if (!suite.empty()) cfg.suite = suite;
      return print_report(kg::run_suite(cfg), cfg.out_dir);
    }
    if (*c_solve) {
      const kg::SolverProblem prob =
          kg::kolmogorov_spike_problem(cfg.kolmogorov_resolution, cfg.kolmogorov_time);
      kg::SolveStats st;
      const kg::GridField f = kg::solve_kfp(prob, kg::make_constant_coefficients(1.0), &st);
      const std::string dir = cfg.out_dir.empty() ? "out" : cfg.out_dir;
      std::filesystem::create_directories(dir);
      f.write_binary(dir + "/solution.kgf");
      std::printf("{\"mass_initial\": %.12g, \"mass_final\": %.12g, \"max_step_mass_drift\": "
                  "%.3e, \"cfl\": %.4f, \"steps\": %d, \"field\": \"%s/solution.kgf\"}\n",
                  st.mass_initial, st.mass_final, st.max_step_mass_drift, st.cfl, st.steps,
                  dir.c_str());
      return 0;
    }
    if (*c_report) {
      cfg.suite = "all";
      if (cfg.out_dir.empty()) cfg.out_dir = "out";
      return print_report(kg::run_suite(cfg), cfg.out_dir);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
