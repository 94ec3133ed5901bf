#include <algorithm>
#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/spectral.hpp"

namespace gevrey {

DomainConfig DomainConfig::make(const Vec3d& lengths, int N, bool rescale) {
  for (double l : lengths)
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidInput("domain lengths must be positive and finite");
  if (N < 1) throw InvalidInput("truncation bound N must be at least 1");
  double lmax = std::max({lengths[0], lengths[1], lengths[2]});
  DomainConfig d;
  d.N = N;
  d.lengths = lengths;
  if (std::abs(lmax - kTwoPi) > 1e-12 * kTwoPi) {
    if (!rescale) throw InvalidInput("domain: max side length must equal 2*pi (got " + std::to_string(lmax) + ")");
    for (auto& l : d.lengths) l *= kTwoPi / lmax;
  }
  return d;
}

Vec3d DomainConfig::k_L(const WaveVector& k) const {
  return {kTwoPi * k[0] / lengths[0], kTwoPi * k[1] / lengths[1], kTwoPi * k[2] / lengths[2]};
}

double stokes_eigenvalue(const WaveVector& k, const DomainConfig& d) {
  if (k[0] == 0 && k[1] == 0 && k[2] == 0) throw InvalidInput("stokes_eigenvalue: zero wavevector");
  Vec3d kl = d.k_L(k);
  return kl[0] * kl[0] + kl[1] * kl[1] + kl[2] * kl[2];
}

GevreyIndex::GevreyIndex(double a, double s) : alpha(a), sigma(s) {
  if (!(a >= 0.0) || !(s >= 0.0)) throw InvalidInput("Gevrey index requires alpha >= 0 and sigma >= 0");
}

double GevreyIndex::log_weight(double lambda) const {
  double lw = (alpha == 0.0 ? 0.0 : alpha * std::log(lambda)) + (sigma == 0.0 ? 0.0 : sigma * std::sqrt(lambda));
  if (lw > 700.0) throw OverflowError("Gevrey weight exceeds exp(700) at lambda = " + std::to_string(lambda));
  return lw;
}

double GevreyIndex::weight(double lambda) const { return std::exp(log_weight(lambda)); }

}  // namespace gevrey
