#include "gevrey/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "gevrey/error.hpp"
#include "gevrey/lattice.hpp"
#include "gevrey/ple_io.hpp"

namespace gevrey {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

WaveVector random_k(Rng& rng, int ext) {
  for (;;) {
    WaveVector k{uniform_int(rng, -ext, ext), uniform_int(rng, -ext, ext), uniform_int(rng, -ext, ext)};
    if (k != WaveVector{0, 0, 0}) return k;
  }
}

Vec3c random_vec(Rng& rng, bool complex_part) {
  Vec3c c;
  for (auto& x : c) x = {uniform(rng, -1, 1), complex_part ? uniform(rng, -1, 1) : 0.0};
  return c;
}

/// max_k |a_k − b_k| over terms relative to the largest coefficient of b.
template <class C>
double sum_rel_diff(const PleSum<C>& a, const PleSum<C>& b) {
  PleSum<C> d = a;
  d -= b;
  double scale = 0.0, diff = 0.0;
  for (const auto& [m, c] : b.terms()) scale = std::max(scale, h_norm(c));
  for (const auto& [m, c] : d.terms()) diff = std::max(diff, h_norm(c));
  return scale > 0.0 ? diff / scale : diff;
}


}  // namespace

std::vector<std::string> RandomInputs::ranges() {
  return {"rationals: numerator in the stated range, denominator in [1, 6]",
          "fields: wavevectors with max|k_i| <= 2, components uniform in [-1, 1]",
          "field sums: 1..4 terms, dims (k, l) with k <= 2 and l <= 2, Re beta_-1 = 0, Im beta_-1 in [-3, 3]",
          "systems: 1..4 entries, m in {0, 1}, s_k <= 3, coefficients in +-[0.05, 0.3], T_min <= 100",
          "resolvent draws: extent <= 4, omega in [-50, 50], alpha in [0, 3], sigma in [0, 2]",
          "lattices: 1..3 generators in (0, 2] with denominators <= 6, m_* in {0, 1, 2}, cutoff in [2, 5]"};
}

Rational RandomInputs::rational(Rng& rng, int lo, int hi, int max_den) {
  int den = uniform_int(rng, 1, max_den);
  return Rational(uniform_int(rng, lo * den, hi * den), den);
}

SpectralField RandomInputs::real_field(Rng& rng, const DomainConfig& d, int max_extent, int modes) {
  SpectralField f(d);
  f.set_real_flag(true);
  for (int i = 0; i < modes; ++i) f += SpectralField::real_mode(d, random_k(rng, max_extent), random_vec(rng, true));
  return f;
}

SpectralField RandomInputs::complex_field(Rng& rng, const DomainConfig& d, int max_extent, int modes) {
  SpectralField::Map m;
  for (int i = 0; i < modes; ++i) m[random_k(rng, max_extent)] = random_vec(rng, true);
  return leray_project(SpectralField(d, std::move(m), false));
}

FieldSum RandomInputs::field_sum(Rng& rng, const DomainConfig& d) {
  const int k = uniform_int(rng, -1, 2), ell = uniform_int(rng, 0, 2);
  FieldSum p(k, ell);
  const int n = uniform_int(rng, 1, 4);
  for (int t = 0; t < n; ++t) {
    Monomial m(k, ell);
    m.b(-1) = ExactComplex(Rational(0), rational(rng, -3, 3, 2));
    for (int j = 0; j <= k; ++j) m.b(j) = ExactComplex(rational(rng, -2, 2), rational(rng, -2, 2, 2));
    for (int j = 1; j <= ell; ++j) m.g(j) = ExactComplex(rational(rng, -2, 2), rational(rng, -1, 1, 2));
    p.add_term(m, complex_field(rng, d, 2, uniform_int(rng, 1, 3)));
  }
  return p;
}

SubordinateSystem RandomInputs::system(Rng& rng, int max_K, double t_min) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int m = uniform_int(rng, 0, 1);
    const int K = uniform_int(rng, 1, max_K);
    std::vector<SubordinateEntry> entries;
    int s = uniform_int(rng, std::max(1, m), 2);
    for (int kk = 1; kk <= K; ++kk) {
      if (kk > 1) s = std::min(3, s + uniform_int(rng, 0, 1));
      if (s <= m) s = m + 1;
      ScalarSum Z(s, kk - 1);
      Z.add_term(Monomial(s, kk - 1), cd(1.0));
      const int n = uniform_int(rng, 1, 2);
      for (int r = 0; r < n; ++r) {
        Monomial q(s, kk - 1);
        const int j0 = uniform_int(rng, m + 1, s);
        q.b(j0) = ExactComplex(-Rational(uniform_int(rng, 1, 4), uniform_int(rng, 1, 3)));
        for (int j = j0 + 1; j <= s; ++j) q.b(j) = ExactComplex(rational(rng, -1, 1, 2));
        bool osc = uniform_int(rng, 0, 1) == 1;
        if (osc) q.b(uniform_int(rng, j0, s)).im = Rational(uniform_int(rng, 1, 3));
        for (int j = 1; j < kk; ++j)
          if (uniform_int(rng, 0, 1)) q.g(j) = ExactComplex(rational(rng, -1, 1, 3));
        double c = uniform(rng, 0.05, 0.3) * (uniform_int(rng, 0, 1) ? 1.0 : -1.0);
        if (osc) {
          Z.add_term(q, cd(0.5 * c));
          Z.add_term(q.conj(), cd(0.5 * c));
        } else {
          Z.add_term(q, cd(c));
        }
      }
      entries.push_back({s, Z});
    }
    try {
      SubordinateSystem sys(m, entries);
      if (sys.T_min() < LevelTime{0, t_min} || !(LevelTime{0, t_min} < sys.T_min())) return sys;
    } catch (const Error&) {
    }
  }
  throw Error("could not draw a subordinate system with T_min <= " + std::to_string(t_min));
}

ScalarSum RandomInputs::scalar_sum(Rng& rng, const SubordinateSystem& sys) {
  const int k = std::max(0, sys.s_max()), ell = sys.size();
  ScalarSum p(k, ell);
  const int n = uniform_int(rng, 1, 4);
  for (int t = 0; t < n; ++t) {
    Monomial m(k, ell);
    m.b(-1) = ExactComplex(Rational(0), Rational(uniform_int(rng, -2, 2)));
    for (int j = 0; j <= k; ++j) m.b(j) = ExactComplex(rational(rng, -1, 1, 3), rational(rng, -1, 1, 2));
    for (int j = 1; j <= ell; ++j) m.g(j) = ExactComplex(rational(rng, -1, 1, 3), rational(rng, -1, 1, 2));
    p.add_term(m, cd(uniform(rng, -1, 1), uniform(rng, -1, 1)));
  }
  return p;
}

double richardson_step(double t, double omega_max) {
  double h = 1e-3 * t;
  if (omega_max > 0.0) h = std::min(h, 0.05 / omega_max);
  return h;
}

namespace {

double omega_max_of(const ScalarSum& p) {
  double w = 0.0;
  for (const auto& [m, c] : p.terms()) w = std::max(w, std::abs(m.b(-1).im.to_double()));
  return w;
}

cd richardson(const std::function<cd(double)>& f, double t, double h) {
  auto D = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2.0 * hh); };
  return (4.0 * D(0.5 * h) - D(h)) / 3.0;
}

}  // namespace

IdentityResult check_zam(std::uint64_t seed, int trials) {
  auto t0 = Clock::now();
  IdentityResult r{"zam_round_trip", false, trials, 0, 0.0, 1e-12, 0.0, ""};
  Rng rng(seed);
  DomainConfig d = DomainConfig::make({kTwoPi, 2.0 * kTwoPi / 3.0, kTwoPi / 2.0}, 8);
  for (int i = 0; i < trials; ++i) {
    FieldSum p = RandomInputs::field_sum(rng, d);
    double e1 = sum_rel_diff(op_A_plus_M(op_ZA(p)), p);
    double e2 = sum_rel_diff(op_ZA(op_A_plus_M(p)), p);
    double e = std::max(e1, e2);
    r.worst = std::max(r.worst, e);
    if (!(e <= r.tolerance)) ++r.failures;
  }
  r.pass = r.failures == 0;
  r.seconds = seconds_since(t0);
  return r;
}

IdentityResult check_chain_rule(std::uint64_t seed, int trials) {
  auto t0 = Clock::now();
  IdentityResult r{"chain_rule_fd", false, trials, 0, 0.0, 1e-6, 0.0, ""};
  Rng rng(seed);
  const double times[] = {1e2, 1e3, 1e4, 1e6};
  for (int i = 0; i < trials; ++i) {
    SubordinateSystem sys = RandomInputs::system(rng, 4, 1e2);
    ScalarSum p = RandomInputs::scalar_sum(rng, sys);
    ScalarSum dp = time_derivative(p, sys);
    bool bad = false;
    for (double t : times) {
      double h = richardson_step(t, omega_max_of(p));
      cd fd = richardson([&](double s) { return eval_sum(p, s, sys); }, t, h);
      cd sym = eval_sum(dp, t, sys);
      double scale = std::max(std::abs(sym), 1e-300);
      double e = std::abs(fd - sym) / scale;
      r.worst = std::max(r.worst, e);
      if (!(e < r.tolerance)) bad = true;
      for (int k = 1; k <= sys.size(); ++k) {
        const ScalarSum& W = sys.W()[static_cast<std::size_t>(k - 1)];
        double hk = richardson_step(t, omega_max_of(sys.entries()[static_cast<std::size_t>(k - 1)].Z));
        cd fy = richardson([&](double s) { return cd(sys.eval_Y(s)[static_cast<std::size_t>(k - 1)]); }, t, hk);
        cd wy = eval_sum(W, t, sys);
        double ew = std::abs(fy - wy) / std::max(std::abs(wy), 1e-300);
        // dY/dt may vanish identically when Z_k ≡ 1 + const; absolute check then.
        if (std::abs(wy) < 1e-14) ew = std::abs(fy - wy);
        r.worst = std::max(r.worst, ew);
        if (!(ew < r.tolerance)) bad = true;
      }
    }
    if (bad) ++r.failures;
  }
  r.pass = r.failures == 0;
  r.seconds = seconds_since(t0);
  return r;
}

IdentityResult check_resolvent_bound(std::uint64_t seed, int trials) {
  auto t0 = Clock::now();
  IdentityResult r{"resolvent_bound", false, trials, 0, 0.0, 1.0, 0.0, "max ratio |(A+iw)^-1 w|_{a+1,s} / |w|_{a,s}"};
  Rng rng(seed);
  DomainConfig d = DomainConfig::make({kTwoPi, kTwoPi, kTwoPi / 1.5}, 8);
  for (int i = 0; i < trials; ++i) {
    SpectralField w = RandomInputs::complex_field(rng, d, 4, 1);
    double omega = uniform(rng, -50, 50), alpha = uniform(rng, 0, 3), sigma = uniform(rng, 0, 2);
    double lhs = gevrey_norm(apply_resolvent(w, omega), GevreyIndex(alpha + 1.0, sigma));
    double rhs = gevrey_norm(w, GevreyIndex(alpha, sigma));
    double ratio = lhs / rhs;
    r.worst = std::max(r.worst, ratio);
    if (!(lhs <= rhs * (1.0 + 1e-13))) ++r.failures;
  }
  r.pass = r.failures == 0;
  r.seconds = seconds_since(t0);
  return r;
}

IdentityResult check_bilinear_orthogonality(std::uint64_t seed, int trials) {
  auto t0 = Clock::now();
  IdentityResult r{"bilinear_orthogonality", false, trials, 0, 0.0, 1e-12, 0.0, ""};
  Rng rng(seed);
  DomainConfig d = DomainConfig::make({kTwoPi, kTwoPi, kTwoPi}, 8);
  int fft_used = 0;
  for (int i = 0; i < trials; ++i) {
    SpectralField u = RandomInputs::real_field(rng, d, 2, uniform_int(rng, 1, 6));
    SpectralField v = RandomInputs::real_field(rng, d, 2, uniform_int(rng, 1, 6));
    BilinearOptions opt;
    opt.dense_threshold = (i % 2 == 0) ? 0 : 1u << 20;
    BilinearReport rep;
    SpectralField b = bilinear_B(u, v, opt, &rep);
    if (rep.used_fft) ++fft_used;
    double e = std::abs(inner(b, v)) / (h_norm(u) * h_norm(v) * h_norm(v));
    bool ok = e < r.tolerance && b.divergence_defect() <= 1e-12 && b.at({0, 0, 0}) == Vec3c{} &&
              b.reality_defect() <= 1e-12;
    r.worst = std::max(r.worst, e);
    if (!ok) ++r.failures;
  }
  r.pass = r.failures == 0;
  r.detail = std::to_string(fft_used) + " pairs through the FFT path";
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<Rational> brute_force_lattice(const std::vector<Rational>& gens, int m_star, const Rational& cutoff) {
  std::set<Rational> out;
  std::function<void(std::size_t, Rational, int)> rec = [&](std::size_t i, Rational acc, int count) {
    if (acc > cutoff) return;
    if (i == gens.size()) {
      if (count == 0) return;
      for (Rational x = acc; !(x > cutoff); x = x + Rational(1)) {
        out.insert(x);
        if (m_star != 0) break;
      }
      return;
    }
    for (int n = 0;; ++n) {
      Rational s = acc + gens[i] * Rational(n);
      if (s > cutoff) break;
      rec(i + 1, s, count + n);
    }
  };
  rec(0, Rational(0), 0);
  return {out.begin(), out.end()};
}

IdentityResult check_lattice_oracle(std::uint64_t seed, int trials) {
  auto t0 = Clock::now();
  IdentityResult r{"lattice_oracle", false, trials, 0, 0.0, 0.0, 0.0, "exact equality"};
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    std::vector<Rational> gens;
    const int G = uniform_int(rng, 1, 3);
    for (int g = 0; g < G; ++g) {
      int den = uniform_int(rng, 1, 6);
      gens.push_back(Rational(uniform_int(rng, 1, 2 * den), den));
    }
    const int m_star = uniform_int(rng, 0, 2);
    Rational cutoff(uniform_int(rng, 2, 5));
    ExponentLattice L = build_lattice(gens, m_star, cutoff);
    if (L.mu != brute_force_lattice(gens, m_star, cutoff)) ++r.failures;
  }
  r.pass = r.failures == 0;
  r.seconds = seconds_since(t0);
  return r;
}

std::vector<IdentityResult> run_identity_suite(std::uint64_t seed) {
  return {check_zam(seed, 200), check_chain_rule(seed + 1, 50), check_resolvent_bound(seed + 2, 1000),
          check_bilinear_orthogonality(seed + 3, 100), check_lattice_oracle(seed + 4, 20)};
}

json identity_results_to_json(const std::vector<IdentityResult>& rs, std::uint64_t seed) {
  json arr = json::array();
  bool all = true;
  for (const auto& r : rs) {
    all = all && r.pass;
    arr.push_back({{"name", r.name},
                   {"pass", r.pass},
                   {"trials", r.trials},
                   {"failures", r.failures},
                   {"worst", r.worst},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail}});
  }
  return json{{"seed", seed}, {"ranges", RandomInputs::ranges()}, {"pass", all}, {"checks", arr}};
}

}  // namespace gevrey
