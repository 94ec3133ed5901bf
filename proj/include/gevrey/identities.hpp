#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gevrey/field_io.hpp"
#include "gevrey/subordinate.hpp"

namespace gevrey {

using Rng = std::mt19937_64;

/// Seeded generators for the identity suite. Ranges are reported by `ranges()`.
struct RandomInputs {
  static std::vector<std::string> ranges();

  static Rational rational(Rng& rng, int lo, int hi, int max_den = 6);
  /// Real solenoidal field: sum of `modes` real modes with extent ≤ max_extent.
  static SpectralField real_field(Rng& rng, const DomainConfig& d, int max_extent, int modes);
  /// Complex solenoidal field with `modes` modes.
  static SpectralField complex_field(Rng& rng, const DomainConfig& d, int max_extent, int modes);
  /// Field sum with Re β₋₁ = 0 in dims up to (2, 2).
  static FieldSum field_sum(Rng& rng, const DomainConfig& d);
  /// Plus-class system with 1..max_K entries, s_k ≤ 3, T_min ≤ t_min.
  static SubordinateSystem system(Rng& rng, int max_K, double t_min);
  /// Scalar sum over the z and ζ variables of `sys`.
  static ScalarSum scalar_sum(Rng& rng, const SubordinateSystem& sys);
};

struct IdentityResult {
  std::string name;
  bool pass = false;
  int trials = 0;
  int failures = 0;
  double worst = 0.0;      ///< worst measured error or ratio
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

IdentityResult check_zam(std::uint64_t seed, int trials);
IdentityResult check_chain_rule(std::uint64_t seed, int trials);
IdentityResult check_resolvent_bound(std::uint64_t seed, int trials);
IdentityResult check_bilinear_orthogonality(std::uint64_t seed, int trials);
IdentityResult check_lattice_oracle(std::uint64_t seed, int trials);

/// Closure of the generators by brute-force enumeration of Σ n_i γ_i (+ j for m_* = 0).
std::vector<Rational> brute_force_lattice(const std::vector<Rational>& gens, int m_star, const Rational& cutoff);

/// Central difference with one Richardson step.
double richardson_step(double t, double omega_max);

std::vector<IdentityResult> run_identity_suite(std::uint64_t seed);
json identity_results_to_json(const std::vector<IdentityResult>& r, std::uint64_t seed);

}  // namespace gevrey
