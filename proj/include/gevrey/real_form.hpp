#pragma once

#include <vector>

#include "gevrey/ple.hpp"

namespace gevrey {

enum class SinKind { Cos, Sin };

/// σ(ω z_κ) when on_zeta is false, σ(ω ln ζ_κ) otherwise.
struct Sinusoid {
  SinKind kind = SinKind::Cos;
  Rational omega;
  bool on_zeta = false;
  int index = 0;

  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

/// z^β ζ^γ Π σ_j(·) ξ with real exponents and a real coefficient.
template <class C>
struct RealTerm {
  std::vector<Rational> beta;   ///< indexed −1..k
  std::vector<Rational> gamma;  ///< indexed 1..ℓ
  std::vector<Sinusoid> factors;
  C xi;
};

template <class C>
struct RealSum {
  int k = -1;
  int ell = 0;
  std::vector<RealTerm<C>> terms;
};

using RealScalarSum = RealSum<cd>;
using RealFieldSum = RealSum<SpectralField>;

/// Replaces each sinusoid by half-sums of conjugate powers; the result is
/// real-symmetric and satisfies IP(k).
template <class C>
PleSum<C> to_complex(const RealSum<C>& r);

/// Expands every conjugate pair into products of sinusoids.
/// Dims stay (k, ℓ) under IP(k) and become (k+1, ℓ) otherwise.
template <class C>
RealSum<C> to_real(const PleSum<C>& p);

template <class C>
C evaluate_real(const RealSum<C>& r, const EvalPoint& pt);

}  // namespace gevrey
