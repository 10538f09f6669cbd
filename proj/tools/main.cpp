#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fvinf/io/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"False-vacuum to chaotic-inflation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fvinf::io::tool_version));

  std::string config, out_dir, grid, run_dir;
  double target_gap = 0.373;
  unsigned threads = 0;

  auto* vacuum = app.add_subcommand("vacuum", "Locate vacua of V1 and print the vacuum report as JSON");
  vacuum->add_option("config", config, "Scenario file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write its outputs");
  simulate->add_option("config", config, "Scenario file")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("config", config, "Base scenario file")->required();
  sweep->add_option("--grid", grid, "Axes 'key=v1,v2;key=lo:hi:n'")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* report = app.add_subcommand("report", "Verify a run directory and summarize it");
  report->add_option("run-dir", run_dir, "Run directory")->required();

  auto* calibrate = app.add_subcommand("calibrate", "Find masses m reproducing a vacuum energy gap");
  calibrate->add_option("config", config, "Scenario file")->required();
  calibrate->add_option("--target-gap", target_gap, "Target gap V1(phi_F) - V1(phi_T)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  using namespace fvinf::io;
  if (*vacuum) return cmd_vacuum(config, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(config, out_dir, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(config, grid, out_dir, std::cout, std::cerr, threads);
  if (*report) return cmd_report(run_dir, std::cout, std::cerr);
  if (*calibrate) return cmd_calibrate(config, target_gap, std::cout, std::cerr);
  return 1;
}
