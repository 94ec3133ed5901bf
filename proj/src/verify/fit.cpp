#include "gevrey/fit.hpp"

#include <cmath>
#include <limits>

#include "gevrey/error.hpp"
#include "gevrey/subordinate.hpp"

namespace gevrey {

DecayFit fit_decay_log(const std::vector<double>& t, const std::vector<double>& ln_L, const std::vector<double>& norms,
                       int m_star, const FitOptions& opt) {
  if (t.size() != norms.size() || ln_L.size() != norms.size()) throw InvalidInput("fit: sample arrays differ in length");
  DecayFit fit;
  fit.m_star = m_star;
  std::vector<double> x;
  std::size_t start = 0;
  if (!opt.window_lo && !opt.window_hi)
    start = static_cast<std::size_t>(std::floor(opt.discard_fraction * static_cast<double>(t.size())));
  for (std::size_t i = start; i < t.size(); ++i) {
    if (opt.window_lo && t[i] < *opt.window_lo) continue;
    if (opt.window_hi && t[i] > *opt.window_hi) continue;
    if (!(norms[i] >= 0.0)) throw InvalidInput("fit: negative or NaN norm sample");
    fit.t.push_back(t[i]);
    fit.norm.push_back(norms[i]);
    x.push_back(ln_L[i]);
  }
  if (fit.t.size() < 8) throw InvalidInput("fit: at least 8 samples are required in the fit window");
  for (double v : fit.norm)
    if (v <= opt.floor) {
      fit.unbounded = true;
      fit.slope = std::numeric_limits<double>::infinity();
      return fit;
    }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double y = std::log(fit.norm[i]);
    sx += x[i];
    sy += y;
    sxx += x[i] * x[i];
    sxy += x[i] * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(den > 0.0)) throw InvalidInput("fit: sample times do not spread in ln L");
  const double b = (n * sxy - sx * sy) / den;
  fit.slope = -b;
  fit.intercept = (sy - b * sx) / n;
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = std::log(fit.norm[i]) - (fit.intercept + b * x[i]);
    r2 += e * e;
  }
  fit.residual = std::sqrt(r2 / n);
  return fit;
}

DecayFit fit_decay_exponent(const std::vector<double>& t, const std::vector<double>& norms, int m_star,
                            const FitOptions& opt) {
  std::vector<double> x(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) x[i] = std::log(iterated_log(m_star, t[i]));
  return fit_decay_log(t, x, norms, m_star, opt);
}

}  // namespace gevrey
