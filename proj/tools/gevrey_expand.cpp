#include <CLI11.hpp>

#include <iostream>

#include "gevrey/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic expansions for forced Navier-Stokes flows: build, verify and report"};
  std::string sub;
  std::string config, out;
  std::uint64_t seed = 1;
  int max_n = -1;
  std::vector<double> rho;
  bool quiet = false;
  app.add_option("command", sub, "lattice | build | defect | simulate | fode | convert | verify-identities | report")
      ->required()
      ->check(CLI::IsMember({"lattice", "build", "defect", "simulate", "fode", "convert", "verify-identities", "report"}));
  app.add_option("--config", config, "run configuration (JSON or key = value)");
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--seed", seed, "seed for random inputs");
  app.add_option("--max-n", max_n, "number of expansion terms to build")->check(CLI::NonNegativeNumber);
  app.add_option("--rho", rho, "regularity loss rho in (0, 1); repeatable")->take_all();
  app.add_flag("--quiet", quiet, "suppress progress lines");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  gevrey::PipelineOptions opt;
  if (!out.empty()) opt.out_dir = out;
  opt.seed = seed;
  if (max_n >= 0) opt.max_n = max_n;
  opt.rho = rho;
  opt.quiet = quiet;
  std::optional<std::string> cfg;
  if (!config.empty()) cfg = config;
  return gevrey::run_command(sub, cfg, opt);
}
