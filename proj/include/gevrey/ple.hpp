#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gevrey/error.hpp"
#include "gevrey/rational.hpp"
#include "gevrey/spectral.hpp"

namespace gevrey {

/// Exponent pair (β, γ) of a term z^β ζ^γ; β is indexed −1..k, γ is indexed 1..ℓ.
struct Monomial {
  std::vector<ExactComplex> beta;
  std::vector<ExactComplex> gamma;

  Monomial() : beta(1) {}
  Monomial(int k, int ell) : beta(static_cast<std::size_t>(k + 2)), gamma(static_cast<std::size_t>(ell)) {}

  int k() const { return static_cast<int>(beta.size()) - 2; }
  int ell() const { return static_cast<int>(gamma.size()); }

  ExactComplex& b(int j) { return beta.at(static_cast<std::size_t>(j + 1)); }
  const ExactComplex& b(int j) const { return beta.at(static_cast<std::size_t>(j + 1)); }
  ExactComplex& g(int j) { return gamma.at(static_cast<std::size_t>(j - 1)); }
  const ExactComplex& g(int j) const { return gamma.at(static_cast<std::size_t>(j - 1)); }

  Monomial conj() const;
  Monomial padded(int k, int ell) const;
  bool z_free() const;
  bool is_one() const;
  std::string str() const;

  friend Monomial operator+(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

/// Builders: z(j, e) is z_j^e, zeta(j, e) is ζ_j^e, in the smallest dims that hold them.
Monomial mono_z(int j, ExactComplex e);
Monomial mono_zeta(int j, ExactComplex e);

template <class C>
struct CoefTraits;

template <>
struct CoefTraits<cd> {
  static bool is_zero(const cd& c) { return c == 0.0; }
  static cd conj(const cd& c) { return std::conj(c); }
  static double magnitude(const cd& c) { return std::abs(c); }
  static cd zero_like(const cd&) { return 0.0; }
};

template <>
struct CoefTraits<SpectralField> {
  static bool is_zero(const SpectralField& c) { return c.empty(); }
  static SpectralField conj(const SpectralField& c) { return c.conj(); }
  static double magnitude(const SpectralField& c) { return h_norm(c); }
  static SpectralField zero_like(const SpectralField& c) { return SpectralField(c.domain()); }
};

/// Canonical finite sum Σ z^β ζ^γ ξ with merged monomials and no zero coefficients.
template <class C>
class PleSum {
public:
  using Terms = std::map<Monomial, C>;

  PleSum() = default;
  PleSum(int k, int ell) : k_(k), ell_(ell) {
    if (k < -1 || ell < 0) throw InvalidInput("PLE dims require k >= -1 and l >= 0");
  }

  static PleSum single(const Monomial& m, const C& c) {
    PleSum p(m.k(), m.ell());
    p.add_term(m, c);
    return p;
  }

  int k() const { return k_; }
  int ell() const { return ell_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Widens dims (never shrinks) and zero-pads every exponent vector.
  void embed(int k, int ell) {
    k = std::max(k, k_);
    ell = std::max(ell, ell_);
    if (k == k_ && ell == ell_) return;
    Terms t;
    for (auto& [m, c] : terms_) t.emplace(m.padded(k, ell), std::move(c));
    terms_ = std::move(t);
    k_ = k;
    ell_ = ell;
  }
  PleSum embedded(int k, int ell) const {
    PleSum p = *this;
    p.embed(k, ell);
    return p;
  }

  void add_term(const Monomial& m, const C& c) {
    if (CoefTraits<C>::is_zero(c)) return;
    embed(m.k(), m.ell());
    Monomial key = m.padded(k_, ell_);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
    } else {
      it->second += c;
      if (CoefTraits<C>::is_zero(it->second)) terms_.erase(it);
    }
  }

  PleSum& operator+=(const PleSum& o) {
    embed(o.k_, o.ell_);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PleSum& operator-=(const PleSum& o) {
    embed(o.k_, o.ell_);
    for (const auto& [m, c] : o.terms_) add_term(m, c * cd(-1.0));
    return *this;
  }
  PleSum& operator*=(cd s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c = c * s;
    return *this;
  }
  friend PleSum operator+(PleSum a, const PleSum& b) { return a += b; }
  friend PleSum operator-(PleSum a, const PleSum& b) { return a -= b; }
  friend PleSum operator*(PleSum a, cd s) { return a *= s; }
  friend PleSum operator*(cd s, PleSum a) { return a *= s; }

  /// Physical conjugate: z^{β̄} ζ^{γ̄} conj(ξ).
  PleSum conj() const {
    PleSum p(k_, ell_);
    for (const auto& [m, c] : terms_) p.add_term(m.conj(), CoefTraits<C>::conj(c));
    return p;
  }

  template <class F>
  auto map_coefficients(F&& f) const {
    using D = std::decay_t<decltype(f(std::declval<const Monomial&>(), std::declval<const C&>()))>;
    PleSum<D> p(k_, ell_);
    for (const auto& [m, c] : terms_) p.add_term(m, f(m, c));
    return p;
  }

  template <class F>
  PleSum map_monomials(F&& f) const {
    PleSum p(k_, ell_);
    for (const auto& [m, c] : terms_) p.add_term(f(m), c);
    return p;
  }

  friend bool operator==(const PleSum& a, const PleSum& b) {
    return a.k_ == b.k_ && a.ell_ == b.ell_ && a.terms_ == b.terms_;
  }

private:
  int k_ = -1;
  int ell_ = 0;
  Terms terms_;
};

using ScalarSum = PleSum<cd>;
using FieldSum = PleSum<SpectralField>;

ScalarSum scalar_constant(cd c);

// ---------------------------------------------------------------------------
// Classes

struct ClassDescriptor {
  int m = -1;
  Rational mu;
  bool real_symmetric = false;
  bool vacuous = false;  ///< empty sum: member of every class
  std::string str() const;
};

/// Relative tolerance for conjugate-pair comparison of floating coefficients.
inline constexpr double kSymmetryTol = 1e-12;

namespace detail {

ClassDescriptor classify_monomials(const std::vector<const Monomial*>& ms, int k);
bool monomials_in_class(const std::vector<const Monomial*>& ms, int m, const Rational& mu, std::string* why);

template <class C>
std::vector<const Monomial*> monomials(const PleSum<C>& p) {
  std::vector<const Monomial*> v;
  v.reserve(p.size());
  for (const auto& [m, c] : p.terms()) v.push_back(&m);
  return v;
}

inline double coef_distance(const cd& a, const cd& b) { return std::abs(a - b); }
inline double coef_distance(const SpectralField& a, const SpectralField& b) { return h_norm(a - b); }

}  // namespace detail

/// Largest relative mismatch ‖ξ_{β̄,γ̄} − conj ξ_{β,γ}‖ / ‖ξ_{β,γ}‖ over all terms.
template <class C>
double symmetry_defect(const PleSum<C>& p) {
  double worst = 0.0;
  for (const auto& [m, c] : p.terms()) {
    double mag = CoefTraits<C>::magnitude(c);
    auto it = p.terms().find(m.conj());
    if (it == p.terms().end()) return mag > 0.0 ? 1.0 : 0.0;
    double d = detail::coef_distance(it->second, CoefTraits<C>::conj(c));
    if (mag > 0.0) worst = std::max(worst, d / mag);
  }
  return worst;
}

template <class C>
bool is_real_symmetric(const PleSum<C>& p, double tol = kSymmetryTol) {
  return symmetry_defect(p) <= tol;
}

/// Finds the largest m and the common μ = Re β_m of every term.
/// Throws ClassError when the terms disagree on Re β₋₁.
template <class C>
ClassDescriptor classify(const PleSum<C>& p, double tol = kSymmetryTol) {
  ClassDescriptor d = detail::classify_monomials(detail::monomials(p), p.k());
  d.real_symmetric = is_real_symmetric(p, tol);
  return d;
}

/// Exact membership β ∈ ℰ(m, k, μ) for every term.
template <class C>
bool in_class(const PleSum<C>& p, int m, const Rational& mu, std::string* why = nullptr) {
  if (m > p.k()) {
    if (why) *why = "class level " + std::to_string(m) + " exceeds dimension k = " + std::to_string(p.k());
    return p.empty();
  }
  return detail::monomials_in_class(detail::monomials(p), m, mu, why);
}

/// Property IP(k): Im β_k = 0 in every term.
template <class C>
bool check_IP(const PleSum<C>& p, int k) {
  if (k != p.k()) throw InvalidInput("check_IP: dimension mismatch (sum has k = " + std::to_string(p.k()) + ")");
  for (const auto& [m, c] : p.terms())
    if (!m.b(k).im.is_zero()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Operators

template <class C>
PleSum<C> op_M(const PleSum<C>& p, int j) {
  if (j < -1 || j > p.k()) throw InvalidInput("op_M: index " + std::to_string(j) + " out of range");
  PleSum<C> out(p.k(), p.ell());
  for (const auto& [m, c] : p.terms()) {
    const ExactComplex& e = m.b(j);
    if (e.is_zero()) continue;
    out.add_term(m, c * cd(e.re.to_double(), e.im.to_double()));
  }
  return out;
}

/// 𝓡p = Σ_{j=0}^k z₀⁻¹…z_j⁻¹ 𝓜_j p.
template <class C>
PleSum<C> op_R(const PleSum<C>& p) {
  if (p.k() < 0) throw InvalidInput("op_R: requires k >= 0");
  PleSum<C> out(p.k(), p.ell());
  for (const auto& [m, c] : p.terms()) {
    for (int j = 0; j <= p.k(); ++j) {
      const ExactComplex& e = m.b(j);
      if (e.is_zero()) continue;
      Monomial shifted = m;
      for (int i = 0; i <= j; ++i) shifted.b(i).re -= Rational(1);
      out.add_term(shifted, c * cd(e.re.to_double(), e.im.to_double()));
    }
  }
  return out;
}

template <class C>
PleSum<C> dzeta(const PleSum<C>& p, int j) {
  if (j < 1 || j > p.ell()) throw InvalidInput("dzeta: index " + std::to_string(j) + " out of range");
  PleSum<C> out(p.k(), p.ell());
  for (const auto& [m, c] : p.terms()) {
    const ExactComplex e = m.g(j);
    if (e.is_zero()) continue;
    Monomial d = m;
    d.g(j).re -= Rational(1);
    out.add_term(d, c * cd(e.re.to_double(), e.im.to_double()));
  }
  return out;
}

/// Distributive product of a scalar sum with any sum.
template <class C>
PleSum<C> multiply(const ScalarSum& q, const PleSum<C>& p) {
  int k = std::max(q.k(), p.k()), ell = std::max(q.ell(), p.ell());
  PleSum<C> out(k, ell);
  ScalarSum qe = q.embedded(k, ell);
  PleSum<C> pe = p.embedded(k, ell);
  for (const auto& [mq, cq] : qe.terms())
    for (const auto& [mp, cp] : pe.terms()) out.add_term(mq + mp, cp * cq);
  return out;
}

/// 𝓩: replaces each ξ by (A + β₋₁)⁻¹ξ; requires Re β₋₁ = 0.
FieldSum op_ZA(const FieldSum& p);
/// (A + 𝓜₋₁)p.
FieldSum op_A_plus_M(const FieldSum& p);
/// A applied to every coefficient.
FieldSum op_A(const FieldSum& p);

struct LiftReport {
  int max_required_extent = 0;
  double dropped_norm = 0.0;
  std::size_t products = 0;
};

/// Termwise B(ξ_p, ξ_q) with exponent addition.
FieldSum bilinear_lift(const FieldSum& p, const FieldSum& q, const BilinearOptions& opt = {},
                       LiftReport* report = nullptr);

/// Removes field modes (and scalar terms) that are pure rounding residue:
/// a coefficient is dropped when its size is below `rel` times the size of
/// the contributions that produced it. Contributions are given as a list
/// of sums that were added together.
FieldSum sum_with_floor(const std::vector<FieldSum>& parts, double rel);

// ---------------------------------------------------------------------------
// Plus class

struct PlusDecomposition {
  bool ok = false;
  std::string reason;
  ScalarSum p_star;
  ScalarSum q;
};

/// Splits Z = p_*(ζ) + q(z, ζ) and checks the plus-class conditions for level m.
PlusDecomposition is_plus_class(const ScalarSum& Z, int m);

// ---------------------------------------------------------------------------
// Evaluation

/// Point at which sums are evaluated: ln z_j for j = −1..K and ζ_1..ζ_ℓ.
///
/// ln z_j = L_{j+1}(t). Entries may be +∞ when t is too large to represent;
/// such a variable is then only admissible with exponent 0 or negative real part.
struct EvalPoint {
  std::vector<double> log_z;   ///< index j+1
  std::vector<double> zeta;    ///< index j−1
  std::vector<double> log_zeta;

  int k_max() const { return static_cast<int>(log_z.size()) - 2; }
  double log_at(int j) const { return log_z.at(static_cast<std::size_t>(j + 1)); }
  double t() const { return log_z.size() >= 1 ? log_at(-1) : 0.0; }
};

/// z^β ζ^γ at the point.
cd monomial_value(const Monomial& m, const EvalPoint& pt);

/// Phase Im(e)·L reduced to (−π, π], odd in e.
long double reduced_phase(const Rational& im, double L);

template <class C>
C evaluate(const PleSum<C>& p, const EvalPoint& pt);

template <>
inline cd evaluate(const ScalarSum& p, const EvalPoint& pt) {
  cd s = 0.0;
  for (const auto& [m, c] : p.terms()) s += c * monomial_value(m, pt);
  return s;
}

template <>
SpectralField evaluate(const FieldSum& p, const EvalPoint& pt);

}  // namespace gevrey
