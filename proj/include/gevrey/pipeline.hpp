#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/config.hpp"
#include "gevrey/experiments.hpp"
#include "gevrey/real_form.hpp"

namespace gevrey {

struct PipelineOptions {
  std::optional<std::string> out_dir;
  std::uint64_t seed = 1;
  std::optional<int> max_n;
  std::vector<double> rho;  ///< overrides the config list when not empty
  bool quiet = false;
  int threads = 0;          ///< 0: GEVREY_EXPAND_THREADS or hardware concurrency
};

struct StepResult {
  std::string name;
  bool pass = true;
  json summary;
};

/// Applies command-line overrides to a loaded config.
void apply_overrides(RunConfig& cfg, const PipelineOptions& opt);

/// Worker count from the options, the environment and the hardware.
int worker_count(const PipelineOptions& opt);

/// Runs f(0..n−1) on up to `workers` threads; rethrows the first exception by index.
void parallel_for(int n, int workers, const std::function<void(int)>& f);

ExponentLattice config_lattice(const RunConfig& cfg);
ExpansionManifest config_manifest(const RunConfig& cfg);

json real_sum_to_json(const RealFieldSum& r);

StepResult run_lattice(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_build(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_defect(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_simulate(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_fode(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_convert(const RunConfig& cfg, const PipelineOptions& opt);
StepResult run_identities(const PipelineOptions& opt);
/// Aggregates the step summaries and CSV fit lines found in `dir`.
StepResult run_report(const std::string& dir, const PipelineOptions& opt);

/// Full subcommand dispatch; returns the process exit code (0 pass, 2 assertion failure, 1 config error).
int run_command(const std::string& sub, const std::optional<std::string>& config_path, const PipelineOptions& opt);

}  // namespace gevrey
