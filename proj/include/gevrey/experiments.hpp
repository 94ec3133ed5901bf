#pragma once

#include <string>
#include <vector>

#include "gevrey/expansion.hpp"
#include "gevrey/fit.hpp"
#include "gevrey/solver.hpp"

namespace gevrey {

struct NormSamples {
  std::vector<double> t;      ///< t itself (+∞ when not representable)
  std::vector<double> ln_L;   ///< ln L_{m_*}(t)
  std::vector<double> L;      ///< L_{m_*}(t)
  std::vector<double> norm;
};

/// Log-spaced times in L_level: L_level(t) runs from a to b over n points.
std::vector<LevelTime> level_grid(int level, double a, double b, int n);

/// |r_N(t)|_{α,σ} on the grid with r_N evaluated symbolically.
NormSamples defect_of_expansion(const ExpansionManifest& m, int N, const SubordinateSystem& sys,
                                const std::vector<LevelTime>& grid, const GevreyIndex& g);

/// Forcing t ↦ P_N eval(p, t) on a Galerkin box, with the coefficients stored densely.
DenseForcing dense_forcing(const FieldSum& p, const SubordinateSystem& sys, const GalerkinBox& box);

/// |u(t_i) − U_N(t_i)|_{g} along a trajectory.
NormSamples remainder_norms(const Trajectory& tr, const ExpansionManifest& m, int N, const SubordinateSystem& sys,
                            const GevreyIndex& g);

struct FodeConfig {
  SolverConfig solver;     ///< nonlinear is forced off
  GevreyIndex norm;        ///< (α + 1 − ε, σ)
  FitOptions fit;
  double delta0 = 0.5;
};

struct FodeResult {
  DecayFit fit;
  double mu = 0.0;         ///< −(class exponent) of p
  double threshold = 0.0;  ///< μ + 0.8·min(δ₀, 0.5)
  bool pass = false;
  NormSamples samples;
  double energy_drift = 0.0;
};

/// Integrates w' = −Aw + p + g from w(t₀) = 0 and fits |w − 𝓩_A p|.
FodeResult fode_experiment(const FieldSum& p, const FieldSum& g, const SubordinateSystem& sys, const FodeConfig& cfg);

struct CsvContext {
  GevreyIndex g;
  double rho = 0.0;
  int N = 0;
  int m_star = 0;
  std::string quantity;  ///< "defect_norm" or "remainder_norm"
};

/// CSV body with header and '#' fit summary lines.
std::string samples_csv(const NormSamples& s, const CsvContext& ctx, const std::vector<std::string>& summary);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace gevrey
