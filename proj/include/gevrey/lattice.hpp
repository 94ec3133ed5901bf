#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gevrey/rational.hpp"

namespace gevrey {

/// Sorted exponent sequence μ₁ < μ₂ < … generated from γ₁..γ_G up to a cutoff.
///
/// For m_* = 0 the set is closed under addition and under +1; for m_* ≥ 1
/// under addition only. Closure is exact up to the cutoff.
struct ExponentLattice {
  int m_star = 0;
  std::vector<Rational> generators;
  Rational cutoff;
  std::vector<Rational> mu;
  /// Per-index dims in use, filled in by the expansion builder.
  std::vector<int> M, M_tilde;

  std::size_t size() const { return mu.size(); }
  /// 0-based index of x, or −1.
  int index_of(const Rational& x) const;
  /// Ordered 0-based pairs (i, j), i, j < n, with μ_i + μ_j = μ_n.
  std::vector<std::pair<int, int>> pair_sums(int n) const;
  /// Largest N (count) for which every sum consulted by the construction lies below the cutoff.
  int valid_count() const;
};

ExponentLattice build_lattice(const std::vector<Rational>& generators, int m_star, const Rational& cutoff,
                              std::size_t max_count = 10000);

}  // namespace gevrey
