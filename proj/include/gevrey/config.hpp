#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/expansion.hpp"
#include "gevrey/fit.hpp"
#include "gevrey/solver.hpp"

namespace gevrey {

inline constexpr const char* kConfigSchema = "gevrey-expand/1";

struct DefectBlock {
  bool enabled = false;
  int level = 0;                 ///< grid is log-spaced in L_level(t)
  double lo = 1e3, hi = 1e6;
  int samples = 32;
  std::vector<int> N;            ///< empty: 1..build.N
  double margin = 0.3;
  FitOptions fit;
};

struct SimulateBlock {
  bool enabled = false;
  SolverConfig solver;
  int samples = 32;
  int trajectories = 3;
  double u0_amplitude = 0.1;
  std::vector<int> N;
  double margin = 0.1;
  FitOptions fit;
};

struct FodeRun {
  std::string name;
  FieldSum p, g;
  double delta0 = 0.5;
};

struct FodeBlock {
  bool enabled = false;
  SolverConfig solver;
  int samples = 32;
  double epsilon = 0.25;         ///< norm index α + 1 − ε
  FitOptions fit;
  std::vector<FodeRun> runs;
};

struct RunConfig {
  std::string source;            ///< path or label used in messages
  json normalized;               ///< the config as JSON
  DomainConfig domain;
  GevreyIndex gevrey;
  std::vector<double> rho{0.5};
  std::map<std::string, SpectralField> fields;
  SubordinateSystem sys;
  int m_star = 0;
  std::vector<Rational> generators;
  std::vector<ForceTerm> forces;
  Rational cutoff{5};
  BuildOptions build;
  DefectBlock defect;
  SimulateBlock simulate;
  FodeBlock fode;
  std::string output;
};

/// Parses "a.b[0].c = value" lines into nested JSON. Values that are not JSON are strings.
json parse_key_value(const std::string& text);

/// JSON when the first significant character is '{', the key-value dialect otherwise.
json parse_config_text(const std::string& text);

RunConfig config_from_json(const json& j, const std::string& source);
RunConfig load_config(const std::string& path);

}  // namespace gevrey
