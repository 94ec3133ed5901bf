#pragma once

#include <string>
#include <vector>

#include "gevrey/field_io.hpp"
#include "gevrey/lattice.hpp"
#include "gevrey/ple.hpp"
#include "gevrey/subordinate.hpp"

namespace gevrey {

/// Forcing term p with decay exponent μ (p belongs to class (m_*, −μ)).
struct ForceTerm {
  Rational mu;
  FieldSum p;
};

struct BuildOptions {
  int N = 4;                        ///< number of lattice indices to build
  GevreyIndex gevrey{};             ///< (α, σ) of the forcing space
  int cap = -1;                     ///< support cap; −1 selects the default
  CapPolicy policy = CapPolicy::Error;
  std::size_t dense_threshold = 512;
};

struct ClassCheck {
  int n = 0;          ///< 1-based lattice index
  std::string item;   ///< "q", "chi", "B(i,j)", "p"
  bool pass = false;
  std::string detail;
};

struct ExpansionManifest {
  ExponentLattice lattice;
  int N = 0;
  int m_star = 0;
  int k = -1;     ///< common dims of all terms
  int ell = 0;
  DomainConfig domain;
  GevreyIndex gevrey;
  int cap = 0;
  CapPolicy policy = CapPolicy::Error;
  double dropped_norm = 0.0;
  bool real_forcing = true;
  std::vector<FieldSum> p, q, chi;
  std::vector<ClassCheck> checks;
  std::vector<std::string> log;
};

/// χ_n for 0-based index n; zero for m_* ≥ 1 or when no μ_λ + 1 = μ_n.
FieldSum build_chi(int n, const std::vector<FieldSum>& q, const SubordinateSystem& sys,
                   const ExponentLattice& lattice, std::string* log = nullptr);

ExpansionManifest build_expansion(const std::vector<ForceTerm>& forces, const ExponentLattice& lattice,
                                  const SubordinateSystem& sys, const BuildOptions& opt);

struct VerifyItem {
  int n = 0;
  std::string item;
  bool pass = false;
  std::string detail;
};

/// Re-classifies every q_n, χ_n and B-product of the manifest.
std::vector<VerifyItem> verify_manifest(const ExpansionManifest& m);

/// U_N = Σ_{n≤N} q_n and F_N = Σ_{n≤N} p_n.
FieldSum partial_sum(const std::vector<FieldSum>& terms, int N);

/// Defect r_N = dU_N/dt + A U_N + B(U_N, U_N) − F_N as a sum; exact cancellations are removed.
FieldSum defect_sum(const ExpansionManifest& m, int N, const SubordinateSystem& sys);

json manifest_to_json(const ExpansionManifest& m);
json lattice_to_json(const ExponentLattice& L);

}  // namespace gevrey
