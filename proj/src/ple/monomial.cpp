#include <cmath>
#include <sstream>

#include "gevrey/ple.hpp"

namespace gevrey {

namespace {

constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;

std::string exp_str(const ExactComplex& e) { return e.str(); }

}  // namespace

Monomial Monomial::conj() const {
  Monomial m = *this;
  for (auto& e : m.beta) e.im = -e.im;
  for (auto& e : m.gamma) e.im = -e.im;
  return m;
}

Monomial Monomial::padded(int k, int ell) const {
  if (k < this->k() || ell < this->ell()) {
    for (int j = k + 1; j <= this->k(); ++j)
      if (!b(j).is_zero()) throw InvalidInput("cannot shrink a monomial with nonzero exponents");
    for (int j = ell + 1; j <= this->ell(); ++j)
      if (!g(j).is_zero()) throw InvalidInput("cannot shrink a monomial with nonzero exponents");
  }
  Monomial m = *this;
  m.beta.resize(static_cast<std::size_t>(k + 2));
  m.gamma.resize(static_cast<std::size_t>(ell));
  return m;
}

bool Monomial::z_free() const {
  for (const auto& e : beta)
    if (!e.is_zero()) return false;
  return true;
}

bool Monomial::is_one() const {
  if (!z_free()) return false;
  for (const auto& e : gamma)
    if (!e.is_zero()) return false;
  return true;
}

std::string Monomial::str() const {
  std::ostringstream os;
  bool any = false;
  for (int j = -1; j <= k(); ++j)
    if (!b(j).is_zero()) {
      os << (any ? " " : "") << "z" << j << "^(" << exp_str(b(j)) << ")";
      any = true;
    }
  for (int j = 1; j <= ell(); ++j)
    if (!g(j).is_zero()) {
      os << (any ? " " : "") << "zeta" << j << "^(" << exp_str(g(j)) << ")";
      any = true;
    }
  return any ? os.str() : "1";
}

Monomial operator+(const Monomial& a, const Monomial& b) {
  int k = std::max(a.k(), b.k()), ell = std::max(a.ell(), b.ell());
  Monomial r = a.padded(k, ell);
  Monomial s = b.padded(k, ell);
  for (std::size_t i = 0; i < r.beta.size(); ++i) r.beta[i] = r.beta[i] + s.beta[i];
  for (std::size_t i = 0; i < r.gamma.size(); ++i) r.gamma[i] = r.gamma[i] + s.gamma[i];
  return r;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.beta <=> b.beta; c != 0) return c;
  return a.gamma <=> b.gamma;
}

Monomial mono_z(int j, ExactComplex e) {
  Monomial m(std::max(j, -1), 0);
  m.b(j) = e;
  return m;
}

Monomial mono_zeta(int j, ExactComplex e) {
  Monomial m(-1, j);
  m.g(j) = e;
  return m;
}

ScalarSum scalar_constant(cd c) { return ScalarSum::single(Monomial(-1, 0), c); }

std::string ClassDescriptor::str() const {
  std::string s = "(m=" + std::to_string(m) + ", mu=" + mu.str() + ")";
  if (real_symmetric) s += " real-symmetric";
  if (vacuous) s += " vacuous";
  return s;
}

namespace detail {

ClassDescriptor classify_monomials(const std::vector<const Monomial*>& ms, int k) {
  ClassDescriptor d;
  if (ms.empty()) {
    d.m = k;
    d.vacuous = true;
    return d;
  }
  for (int m = -1; m <= k; ++m) {
    const Rational r0 = ms[0]->b(m).re;
    for (const Monomial* x : ms) {
      if (x->b(m).re == r0) continue;
      if (m == -1)
        throw ClassError("no common class: Re beta_-1 differs between " + ms[0]->str() + " and " + x->str());
      d.m = m - 1;
      d.mu = Rational(0);
      return d;
    }
    if (!r0.is_zero()) {
      d.m = m;
      d.mu = r0;
      return d;
    }
  }
  d.m = k;
  return d;
}

bool monomials_in_class(const std::vector<const Monomial*>& ms, int m, const Rational& mu, std::string* why) {
  for (const Monomial* x : ms) {
    for (int j = -1; j < m; ++j)
      if (!x->b(j).re.is_zero()) {
        if (why) *why = "term " + x->str() + " has Re beta_" + std::to_string(j) + " != 0";
        return false;
      }
    if (x->b(m).re != mu) {
      if (why)
        *why = "term " + x->str() + " has Re beta_" + std::to_string(m) + " = " + x->b(m).re.str() + ", expected " +
               mu.str();
      return false;
    }
  }
  return true;
}

}  // namespace detail

FieldSum op_ZA(const FieldSum& p) {
  FieldSum out(p.k(), p.ell());
  for (const auto& [m, c] : p.terms()) {
    if (!m.b(-1).re.is_zero())
      throw ClassError("op_ZA: term " + m.str() + " has Re beta_-1 != 0 (resolvent undefined)");
    out.add_term(m, apply_resolvent(c, m.b(-1).im.to_double()));
  }
  return out;
}

FieldSum op_A_plus_M(const FieldSum& p) {
  FieldSum out(p.k(), p.ell());
  for (const auto& [m, c] : p.terms()) {
    const ExactComplex& e = m.b(-1);
    SpectralField v = apply_A(c);
    if (!e.is_zero()) v += c * cd(e.re.to_double(), e.im.to_double());
    out.add_term(m, v);
  }
  return out;
}

FieldSum op_A(const FieldSum& p) {
  return p.map_coefficients([](const Monomial&, const SpectralField& c) { return apply_A(c); });
}

FieldSum bilinear_lift(const FieldSum& p, const FieldSum& q, const BilinearOptions& opt, LiftReport* report) {
  int k = std::max(p.k(), q.k()), ell = std::max(p.ell(), q.ell());
  FieldSum pe = p.embedded(k, ell), qe = q.embedded(k, ell);
  FieldSum out(k, ell);
  for (const auto& [mp, cp] : pe.terms())
    for (const auto& [mq, cq] : qe.terms()) {
      BilinearReport br;
      SpectralField b = bilinear_B(cp, cq, opt, &br);
      if (report) {
        report->max_required_extent = std::max(report->max_required_extent, br.required_extent);
        report->dropped_norm = std::hypot(report->dropped_norm, br.dropped_norm);
        report->products++;
      }
      out.add_term(mp + mq, b);
    }
  return out;
}

FieldSum sum_with_floor(const std::vector<FieldSum>& parts, double rel) {
  int k = -1, ell = 0;
  for (const auto& p : parts) {
    k = std::max(k, p.k());
    ell = std::max(ell, p.ell());
  }
  struct Acc {
    Vec3c v{};
    double bound = 0.0;
  };
  std::map<Monomial, std::map<WaveVector, Acc>> acc;
  std::map<Monomial, DomainConfig> dom;
  for (const auto& p : parts)
    for (const auto& [m, c] : p.terms()) {
      Monomial key = m.padded(k, ell);
      dom.emplace(key, c.domain());
      auto& slot = acc[key];
      for (const auto& [wk, v] : c.modes()) {
        Acc& a = slot[wk];
        for (int i = 0; i < 3; ++i) a.v[i] += v[i];
        a.bound += std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
      }
    }
  FieldSum out(k, ell);
  for (auto& [m, modes] : acc) {
    SpectralField::Map kept;
    for (auto& [wk, a] : modes) {
      double n = std::sqrt(std::norm(a.v[0]) + std::norm(a.v[1]) + std::norm(a.v[2]));
      if (n > rel * a.bound) kept.emplace(wk, a.v);
    }
    if (!kept.empty()) out.add_term(m, SpectralField(dom.at(m), std::move(kept), false));
  }
  return out;
}

PlusDecomposition is_plus_class(const ScalarSum& Z, int m) {
  PlusDecomposition d;
  d.p_star = ScalarSum(Z.k(), Z.ell());
  d.q = ScalarSum(Z.k(), Z.ell());
  auto fail = [&](const std::string& r) {
    d.ok = false;
    d.reason = "plusclass: " + r;
    return d;
  };
  if (m < 0) return fail("level m must be nonnegative");
  if (Z.k() < m) return fail("Z has k = " + std::to_string(Z.k()) + " < m = " + std::to_string(m));
  for (const auto& [mono, c] : Z.terms()) (mono.z_free() ? d.p_star : d.q).add_term(mono, c);
  cd at_one = 0.0;
  for (const auto& [mono, c] : d.p_star.terms()) {
    for (const auto& g : mono.gamma)
      if (!g.im.is_zero()) return fail("z-free term " + mono.str() + " has a non-real zeta exponent");
    if (std::abs(c.imag()) > kSymmetryTol * std::abs(c)) return fail("z-free term " + mono.str() + " has a non-real coefficient");
    at_one += c;
  }
  if (std::abs(at_one - 1.0) > kSymmetryTol) return fail("p_*(1) != 1 (got " + std::to_string(at_one.real()) + ")");
  for (const auto& [mono, c] : d.q.terms()) {
    if (!mono.b(-1).is_zero()) return fail("term " + mono.str() + " has beta_-1 != 0");
    for (int j = 0; j <= m; ++j)
      if (!mono.b(j).re.is_zero()) return fail("term " + mono.str() + " has Re beta_" + std::to_string(j) + " != 0");
    int first = 0;
    for (int j = m + 1; j <= Z.k() && first == 0; ++j) first = mono.b(j).re.sign();
    if (first >= 0) return fail("term " + mono.str() + " does not satisfy Re beta < 0 (lexicographic)");
  }
  if (!is_real_symmetric(d.q)) return fail("q is not real-symmetric");
  d.ok = true;
  return d;
}

long double reduced_phase(const Rational& im, double L) {
  if (im.is_zero()) return 0.0L;
  long double x = static_cast<long double>(im.num()) * static_cast<long double>(L) / static_cast<long double>(im.den());
  return std::remainder(x, kTwoPiL);
}

cd monomial_value(const Monomial& m, const EvalPoint& pt) {
  long double logmod = 0.0L, phase = 0.0L;
  bool vanishes = false;
  for (int j = -1; j <= m.k(); ++j) {
    const ExactComplex& e = m.b(j);
    if (e.is_zero()) continue;
    if (j > pt.k_max()) throw InvalidInput("evaluation point lacks z_" + std::to_string(j));
    double L = pt.log_at(j);
    if (std::isinf(L)) {
      if (!e.im.is_zero()) throw DomainError("oscillatory factor of z_" + std::to_string(j) + " at unrepresentable t");
      if (e.re.sign() > 0) throw OverflowError("z_" + std::to_string(j) + " raised to a positive power overflows");
      vanishes = true;
      continue;
    }
    logmod += static_cast<long double>(e.re.to_double()) * L;
    phase += reduced_phase(e.im, L);
  }
  for (int j = 1; j <= m.ell(); ++j) {
    const ExactComplex& e = m.g(j);
    if (e.is_zero()) continue;
    if (j > static_cast<int>(pt.log_zeta.size())) throw InvalidInput("evaluation point lacks zeta_" + std::to_string(j));
    double L = pt.log_zeta[static_cast<std::size_t>(j - 1)];
    logmod += static_cast<long double>(e.re.to_double()) * L;
    phase += reduced_phase(e.im, L);
  }
  if (vanishes) return 0.0;
  if (logmod > 709.0L) throw OverflowError("monomial " + m.str() + " overflows at the evaluation point");
  double r = std::exp(static_cast<double>(logmod));
  return std::polar(r, static_cast<double>(phase));
}

template <>
SpectralField evaluate(const FieldSum& p, const EvalPoint& pt) {
  SpectralField::Map acc;
  DomainConfig d;
  bool have = false;
  for (const auto& [m, c] : p.terms()) {
    cd v = monomial_value(m, pt);
    if (!have) {
      d = c.domain();
      have = true;
    }
    if (v == 0.0) continue;
    for (const auto& [k, x] : c.modes()) {
      Vec3c& a = acc[k];
      for (int i = 0; i < 3; ++i) a[i] += x[i] * v;
    }
  }
  SpectralField f(d, std::move(acc), false);
  f.set_real_flag(is_real_symmetric(p));
  return f;
}

}  // namespace gevrey
