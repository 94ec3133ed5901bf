#include "gevrey/real_form.hpp"

#include <algorithm>
#include <cmath>

namespace gevrey {

namespace {

cd real_of(const cd& c) { return {c.real(), 0.0}; }
cd imag_of(const cd& c) { return {c.imag(), 0.0}; }
SpectralField real_of(const SpectralField& f) { return f.real_part(); }
SpectralField imag_of(const SpectralField& f) { return f.imag_part(); }

template <class C>
bool coef_is_zero(const C& c) {
  return CoefTraits<C>::is_zero(c);
}

template <class C>
void check_dims(const RealSum<C>& r) {
  for (const auto& t : r.terms) {
    if (t.beta.size() != static_cast<std::size_t>(r.k + 2) || t.gamma.size() != static_cast<std::size_t>(r.ell))
      throw InvalidInput("real term exponent vectors do not match the sum dims");
    for (const auto& f : t.factors) {
      if (!f.on_zeta && (f.index < 0 || f.index > r.k))
        throw InvalidInput("sinusoid argument index z_" + std::to_string(f.index) + " out of range [0, k]");
      if (f.on_zeta && (f.index < 1 || f.index > r.ell))
        throw InvalidInput("sinusoid argument index zeta_" + std::to_string(f.index) + " out of range [1, l]");
    }
  }
}

bool factor_less(const Sinusoid& a, const Sinusoid& b) {
  if (a.on_zeta != b.on_zeta) return !a.on_zeta;
  if (a.index != b.index) return a.index < b.index;
  if (a.kind != b.kind) return a.kind == SinKind::Cos;
  return a.omega < b.omega;
}

}  // namespace

template <class C>
PleSum<C> to_complex(const RealSum<C>& r) {
  check_dims(r);
  PleSum<C> out(r.k, r.ell);
  for (const auto& t : r.terms) {
    Monomial base(r.k, r.ell);
    for (int j = -1; j <= r.k; ++j) base.b(j) = ExactComplex(t.beta[static_cast<std::size_t>(j + 1)]);
    for (int j = 1; j <= r.ell; ++j) base.g(j) = ExactComplex(t.gamma[static_cast<std::size_t>(j - 1)]);
    std::vector<std::pair<Monomial, cd>> parts{{base, cd(1.0)}};
    bool vanished = false;
    for (const auto& f : t.factors) {
      if (f.omega.is_zero()) {
        if (f.kind == SinKind::Sin) vanished = true;
        continue;
      }
      std::vector<std::pair<Monomial, cd>> next;
      const cd wp = f.kind == SinKind::Cos ? cd(0.5) : cd(0.0, -0.5);
      const cd wm = f.kind == SinKind::Cos ? cd(0.5) : cd(0.0, 0.5);
      for (const auto& [m, w] : parts)
        for (int sgn : {1, -1}) {
          Monomial mm = m;
          ExactComplex& e = f.on_zeta ? mm.g(f.index) : mm.b(f.index - 1);
          e.im += sgn > 0 ? f.omega : -f.omega;
          next.emplace_back(std::move(mm), w * (sgn > 0 ? wp : wm));
        }
      parts = std::move(next);
    }
    if (vanished) continue;
    for (const auto& [m, w] : parts) out.add_term(m, t.xi * w);
  }
  return out;
}

template <class C>
RealSum<C> to_real(const PleSum<C>& p) {
  if (!is_real_symmetric(p)) throw ClassError("to_real: input is not real-symmetric");
  const int k = p.k();
  bool ip = true;
  for (const auto& [m, c] : p.terms())
    if (!m.b(k).im.is_zero()) ip = false;
  RealSum<C> out;
  out.k = ip ? k : k + 1;
  out.ell = p.ell();
  for (const auto& [m, c] : p.terms()) {
    Monomial mc = m.conj();
    if (mc < m) continue;  // each pair is expanded once, from its smaller member
    std::vector<Rational> beta(static_cast<std::size_t>(out.k + 2)), gamma(static_cast<std::size_t>(out.ell));
    for (int j = -1; j <= k; ++j) beta[static_cast<std::size_t>(j + 1)] = m.b(j).re;
    for (int j = 1; j <= out.ell; ++j) gamma[static_cast<std::size_t>(j - 1)] = m.g(j).re;
    if (mc == m) {
      C re = real_of(c);
      if (!coef_is_zero(re)) out.terms.push_back({beta, gamma, {}, re});
      continue;
    }
    std::vector<Sinusoid> args;
    for (int j = -1; j <= k; ++j)
      if (!m.b(j).im.is_zero()) args.push_back({SinKind::Cos, m.b(j).im, false, j + 1});
    for (int j = 1; j <= out.ell; ++j)
      if (!m.g(j).im.is_zero()) args.push_back({SinKind::Cos, m.g(j).im, true, j});
    const C re = real_of(c), im = imag_of(c);
    const std::size_t nf = args.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << nf); ++mask) {
      int s = __builtin_popcountll(mask);
      std::vector<Sinusoid> fs = args;
      for (std::size_t a = 0; a < nf; ++a)
        if (mask & (std::size_t{1} << a)) fs[a].kind = SinKind::Sin;
      std::sort(fs.begin(), fs.end(), factor_less);
      C xi = (s % 2 == 0) ? re * cd((s / 2) % 2 == 0 ? 2.0 : -2.0) : im * cd(((s - 1) / 2) % 2 == 0 ? -2.0 : 2.0);
      if (coef_is_zero(xi)) continue;
      out.terms.push_back({beta, gamma, std::move(fs), std::move(xi)});
    }
  }
  return out;
}

namespace {

double sinusoid_value(const Sinusoid& f, const EvalPoint& pt) {
  double L;
  if (f.on_zeta) {
    L = pt.log_zeta.at(static_cast<std::size_t>(f.index - 1));
  } else {
    L = pt.log_at(f.index - 1);
    if (std::isinf(L)) throw DomainError("sinusoid of z_" + std::to_string(f.index) + " at unrepresentable time");
  }
  long double th = reduced_phase(f.omega, L);
  return f.kind == SinKind::Cos ? std::cos(static_cast<double>(th)) : std::sin(static_cast<double>(th));
}

template <class C>
cd real_term_factor(const RealTerm<C>& t, int k, int ell, const EvalPoint& pt) {
  Monomial m(k, ell);
  for (int j = -1; j <= k; ++j) m.b(j) = ExactComplex(t.beta[static_cast<std::size_t>(j + 1)]);
  for (int j = 1; j <= ell; ++j) m.g(j) = ExactComplex(t.gamma[static_cast<std::size_t>(j - 1)]);
  double v = monomial_value(m, pt).real();
  for (const auto& f : t.factors) v *= sinusoid_value(f, pt);
  return {v, 0.0};
}

}  // namespace

template <>
cd evaluate_real(const RealScalarSum& r, const EvalPoint& pt) {
  cd s = 0.0;
  for (const auto& t : r.terms) s += t.xi * real_term_factor(t, r.k, r.ell, pt);
  return s;
}

template <>
SpectralField evaluate_real(const RealFieldSum& r, const EvalPoint& pt) {
  SpectralField s;
  for (const auto& t : r.terms) s += t.xi * real_term_factor(t, r.k, r.ell, pt);
  s.set_real_flag(true);
  return s;
}

template PleSum<cd> to_complex(const RealSum<cd>&);
template PleSum<SpectralField> to_complex(const RealSum<SpectralField>&);
template RealSum<cd> to_real(const PleSum<cd>&);
template RealSum<SpectralField> to_real(const PleSum<SpectralField>&);

}  // namespace gevrey
