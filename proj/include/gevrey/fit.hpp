#pragma once

#include <optional>
#include <vector>

namespace gevrey {

struct FitOptions {
  /// Fraction of leading samples treated as transient when no window is set.
  double discard_fraction = 0.3;
  std::optional<double> window_lo, window_hi;
  /// Norms at or below this value count as zero.
  double floor = 0.0;
};

struct DecayFit {
  int m_star = 0;
  std::vector<double> t, norm;  ///< samples used in the fit
  double slope = 0.0;           ///< μ̂ with norm ≈ C L_{m_*}(t)^{−μ̂}
  double intercept = 0.0;
  double residual = 0.0;        ///< RMS of the log residuals
  bool unbounded = false;       ///< every sample at the floor: slope is +∞
};

/// Least-squares slope of ln(norm) against ln L_{m_*}(t). Times may be given
/// directly as ln L_{m_*}(t) via `log_levels`.
DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& norms, int m_star,
                            const FitOptions& opt = {});
DecayFit fit_decay_log(const std::vector<double>& t, const std::vector<double>& ln_L, const std::vector<double>& norms,
                       int m_star, const FitOptions& opt = {});

}  // namespace gevrey
