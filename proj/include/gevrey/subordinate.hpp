#pragma once

#include <vector>

#include "gevrey/ple.hpp"

namespace gevrey {

/// E_0(x) = x, E_{m+1}(x) = exp(E_m(x)); may return +∞.
double iterated_exp(int m, double x = 0.0);

/// L_{−1}(t) = e^t, L_0(t) = t, L_{m+1} = ln L_m. Defined for t > E_{m−1}(0) when m ≥ 1.
double iterated_log(int m, double t);

/// Time expressed through one of its iterated logarithms: L_level(t) = value.
/// Level 0 is plain t; higher levels reach times whose exponentials overflow.
struct LevelTime {
  int level = 0;
  double value = 0.0;
  /// t itself, +∞ when not representable.
  double t() const;
  /// L_m of this time for any m ≥ −1 (+∞ when it overflows).
  double log_level(int m) const;
  bool operator<(const LevelTime& o) const;
};

/// Point with ln z_j = L_{j+1}(t) for j = −1..k and no ζ.
EvalPoint log_point(const LevelTime& t, int k);
inline EvalPoint log_point(double t, int k) { return log_point(LevelTime{0, t}, k); }

struct SubordinateEntry {
  int s = 0;
  ScalarSum Z;
};

/// (𝒦, s_k, Z_k) together with the derived W_k and T_min.
class SubordinateSystem {
public:
  SubordinateSystem() = default;
  /// Validates plus-class membership and monotone s_k, builds W_k and T_min.
  SubordinateSystem(int m, std::vector<SubordinateEntry> entries);

  int m() const { return m_; }
  int size() const { return static_cast<int>(entries_.size()); }
  const std::vector<SubordinateEntry>& entries() const { return entries_; }
  const std::vector<ScalarSum>& W() const { return W_; }
  int s_max() const { return entries_.empty() ? -1 : entries_.back().s; }

  /// Smallest time at which every 𝒴_k ≥ 1/2 and every needed log is positive.
  const LevelTime& T_min() const { return T_min_; }

  /// Point with z up to level max(k, s_max) and ζ_1..ζ_K filled in. Throws
  /// DomainError below T_min unless `check` is false.
  EvalPoint point(const LevelTime& t, int k, bool check = true) const;
  EvalPoint point(double t, int k, bool check = true) const { return point(LevelTime{0, t}, k, check); }

  std::vector<double> eval_Y(const LevelTime& t) const;
  std::vector<double> eval_Y(double t) const { return eval_Y(LevelTime{0, t}); }

private:
  bool admissible(const LevelTime& t) const;
  void fill_zeta(EvalPoint& pt) const;
  void find_T_min();

  int m_ = 0;
  std::vector<SubordinateEntry> entries_;
  std::vector<ScalarSum> W_;
  LevelTime T_min_{0, 0.0};
};

/// d/dt p(L̂(t), Ŷ(t)) as a sum: 𝓜₋₁p + 𝓡p + Σ_j W_j ∂p/∂ζ_j.
template <class C>
PleSum<C> time_derivative(const PleSum<C>& p, const SubordinateSystem& sys) {
  if (p.ell() > sys.size())
    throw InvalidInput("time_derivative: sum uses zeta_" + std::to_string(p.ell()) + " beyond the system");
  PleSum<C> q = p.embedded(std::max(p.k(), 0), p.ell());
  PleSum<C> out = op_M(q, -1);
  out += op_R(q);
  for (int j = 1; j <= q.ell(); ++j) out += multiply(sys.W()[static_cast<std::size_t>(j - 1)], dzeta(q, j));
  return out;
}

/// Evaluates p at L̂(t), Ŷ(t).
template <class C>
C eval_sum(const PleSum<C>& p, const LevelTime& t, const SubordinateSystem& sys) {
  return evaluate(p, sys.point(t, std::max(p.k(), 0)));
}
template <class C>
C eval_sum(const PleSum<C>& p, double t, const SubordinateSystem& sys) {
  return eval_sum(p, LevelTime{0, t}, sys);
}

struct IntegralBoundResult {
  std::vector<double> ratios;  ///< one per grid point
  double max_ratio = 0.0;
  double last_ratio = 0.0;
};

/// Ratios ∫₀^t e^{−γ(t−τ)} L_m(T*+τ)^{−λ} dτ · L_m(T*+t)^λ on a grid of t.
IntegralBoundResult check_integral_bound(int m, double lambda, double gamma, double T_star,
                                         const std::vector<double>& t_grid);

}  // namespace gevrey
