#include <algorithm>
#include <cmath>
#include <limits>

#include "gevrey/expansion.hpp"

namespace gevrey {

namespace {

constexpr double kFloor = 64.0 * std::numeric_limits<double>::epsilon();

std::string mu_str(const ExponentLattice& L, int n) { return L.mu[static_cast<std::size_t>(n)].str(); }

int ceil_ratio(const Rational& a, const Rational& b) {
  Rational r = a / b;
  std::int64_t q = r.num() / r.den();
  if (q * r.den() < r.num()) ++q;
  return static_cast<int>(q);
}

}  // namespace

FieldSum partial_sum(const std::vector<FieldSum>& terms, int N) {
  FieldSum s;
  for (int n = 0; n < N && n < static_cast<int>(terms.size()); ++n) s += terms[static_cast<std::size_t>(n)];
  return s;
}

FieldSum build_chi(int n, const std::vector<FieldSum>& q, const SubordinateSystem& sys,
                   const ExponentLattice& lattice, std::string* log) {
  if (lattice.m_star >= 1) return FieldSum();
  int lambda = -1;
  for (int i = 0; i < n; ++i)
    if (lattice.mu[static_cast<std::size_t>(i)] + Rational(1) == lattice.mu[static_cast<std::size_t>(n)]) {
      if (lambda >= 0) throw Error("lattice corruption: several lambda with mu_lambda + 1 = mu_n");
      lambda = i;
    }
  if (lambda < 0) return FieldSum();
  if (log)
    *log = "chi_" + std::to_string(n + 1) + ": lambda = " + std::to_string(lambda + 1) + " (mu " +
           mu_str(lattice, lambda) + " + 1 = " + mu_str(lattice, n) + ")";
  const FieldSum& ql = q.at(static_cast<std::size_t>(lambda));
  if (ql.empty()) return FieldSum(ql.k(), ql.ell());
  FieldSum base = ql.embedded(std::max(ql.k(), 0), ql.ell());
  std::vector<FieldSum> parts{op_R(base)};
  for (int j = 1; j <= base.ell(); ++j)
    parts.push_back(multiply(sys.W().at(static_cast<std::size_t>(j - 1)), dzeta(base, j)));
  return sum_with_floor(parts, kFloor);
}

ExpansionManifest build_expansion(const std::vector<ForceTerm>& forces, const ExponentLattice& lattice,
                                  const SubordinateSystem& sys, const BuildOptions& opt) {
  ExpansionManifest M;
  M.lattice = lattice;
  M.m_star = lattice.m_star;
  M.gevrey = opt.gevrey;
  M.policy = opt.policy;
  if (opt.N < 0) throw InvalidInput("build: N must be nonnegative");
  if (opt.N > static_cast<int>(lattice.size()))
    throw InvalidInput("build: N = " + std::to_string(opt.N) + " exceeds the lattice size " + std::to_string(lattice.size()));
  if (sys.size() > 0 && sys.m() != lattice.m_star)
    throw InvalidInput("build: subordinate system level m differs from m_*");
  M.N = opt.N;
  if (opt.N > lattice.valid_count())
    M.log.push_back("note: N exceeds the cutoff-validated count " + std::to_string(lattice.valid_count()));

  // Forcing by lattice index; zero entries are inserted where no force is given.
  const int N = opt.N;
  M.p.assign(static_cast<std::size_t>(N), FieldSum());
  int force_extent = 0;
  for (const auto& f : forces) {
    int idx = lattice.index_of(f.mu);
    if (idx < 0) throw InvalidInput("pncond: forcing exponent " + f.mu.str() + " is not in the lattice");
    std::string why;
    if (!in_class(f.p, lattice.m_star, -f.mu, &why))
      throw InvalidInput("pncond: forcing at mu = " + f.mu.str() + " is not in class (m_*, -mu): " + why);
    if (!is_real_symmetric(f.p)) M.real_forcing = false;
    for (const auto& [mono, c] : f.p.terms()) {
      force_extent = std::max(force_extent, c.extent());
      M.domain = c.domain();
      gevrey_norm(c, opt.gevrey);  // overflow guard on the forcing space
    }
    if (idx >= N) {
      M.log.push_back("forcing at mu = " + f.mu.str() + " lies beyond N and is not used");
      continue;
    }
    M.p[static_cast<std::size_t>(idx)] += f.p;
  }
  for (int n = 0; n < N; ++n)
    if (M.p[static_cast<std::size_t>(n)].empty())
      M.log.push_back("p_" + std::to_string(n + 1) + " := 0 inserted at mu = " + mu_str(lattice, n));

  if (opt.cap >= 0) {
    M.cap = opt.cap;
  } else {
    M.cap = N == 0 ? 0 : force_extent * std::max(1, ceil_ratio(lattice.mu[static_cast<std::size_t>(N - 1)], lattice.mu[0]));
    M.log.push_back("support cap defaults to " + std::to_string(M.cap));
  }

  BilinearOptions bo;
  bo.cap = M.cap;
  bo.policy = opt.policy;
  bo.dense_threshold = opt.dense_threshold;
  bo.report_index = opt.gevrey;

  M.q.reserve(static_cast<std::size_t>(N));
  M.chi.reserve(static_cast<std::size_t>(N));
  for (int n = 0; n < N; ++n) {
    const std::string tag = std::to_string(n + 1);
    const Rational target = -lattice.mu[static_cast<std::size_t>(n)];
    std::vector<FieldSum> parts{M.p[static_cast<std::size_t>(n)]};
    for (auto [i, j] : lattice.pair_sums(n)) {
      bo.context = "B(q_" + std::to_string(i + 1) + ", q_" + std::to_string(j + 1) + ") at n = " + tag;
      LiftReport lr;
      FieldSum b = bilinear_lift(M.q[static_cast<std::size_t>(i)], M.q[static_cast<std::size_t>(j)], bo, &lr);
      if (lr.dropped_norm > 0.0) {
        M.dropped_norm = std::hypot(M.dropped_norm, lr.dropped_norm);
        M.log.push_back(bo.context + ": truncated band beyond cap " + std::to_string(M.cap) + " up to " +
                        std::to_string(lr.max_required_extent) + ", dropped Gevrey norm " +
                        std::to_string(lr.dropped_norm));
      }
      std::string why;
      bool ok = in_class(b, lattice.m_star, target, &why);
      M.checks.push_back({n + 1, "B(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", ok, why});
      parts.push_back(b * cd(-1.0));
    }
    std::string chi_log;
    FieldSum chi = build_chi(n, M.q, sys, lattice, &chi_log);
    if (!chi_log.empty()) M.log.push_back(chi_log);
    {
      std::string why;
      bool ok = in_class(chi, lattice.m_star, target, &why);
      M.checks.push_back({n + 1, "chi", ok, why});
    }
    parts.push_back(chi * cd(-1.0));
    FieldSum rhs = sum_with_floor(parts, kFloor);
    FieldSum qn = op_ZA(rhs);
    {
      std::string why;
      bool ok = in_class(qn, lattice.m_star, target, &why);
      if (ok && M.real_forcing && !is_real_symmetric(qn)) {
        ok = false;
        why = "q is not real-symmetric";
      }
      M.checks.push_back({n + 1, "q", ok, why});
    }
    int ext = 0;
    for (const auto& [mono, c] : qn.terms()) ext = std::max(ext, c.extent());
    M.log.push_back("q_" + tag + ": " + std::to_string(qn.size()) + " terms, support extent " + std::to_string(ext));
    M.chi.push_back(std::move(chi));
    M.q.push_back(std::move(qn));
  }

  // Minimal dims in use, then a common embedding for the whole manifest.
  M.lattice.M.clear();
  M.lattice.M_tilde.clear();
  int kk = -1, ll = 0;
  for (int n = 0; n < N; ++n) {
    const auto& q = M.q[static_cast<std::size_t>(n)];
    const auto& p = M.p[static_cast<std::size_t>(n)];
    ll = std::max({ll, q.ell(), p.ell()});
    kk = std::max({kk, q.k(), p.k()});
    if (ll > 0) kk = std::max(kk, sys.entries().at(static_cast<std::size_t>(ll - 1)).s);
    M.lattice.M.push_back(kk);
    M.lattice.M_tilde.push_back(ll);
  }
  M.k = std::max(kk, M.m_star);
  M.ell = ll;
  for (auto* v : {&M.p, &M.q, &M.chi})
    for (auto& s : *v) s.embed(M.k, M.ell);
  return M;
}

std::vector<VerifyItem> verify_manifest(const ExpansionManifest& m) {
  std::vector<VerifyItem> out;
  const auto& L = m.lattice;
  for (int n = 0; n < static_cast<int>(m.q.size()); ++n) {
    const Rational target = -L.mu[static_cast<std::size_t>(n)];
    auto check = [&](const std::string& item, const FieldSum& s, bool need_real) {
      std::string why;
      bool ok = in_class(s, L.m_star, target, &why);
      if (ok && need_real && !is_real_symmetric(s)) {
        ok = false;
        why = "not real-symmetric";
      }
      out.push_back({n + 1, item, ok, why});
    };
    check("q", m.q[static_cast<std::size_t>(n)], m.real_forcing);
    if (n < static_cast<int>(m.chi.size())) check("chi", m.chi[static_cast<std::size_t>(n)], m.real_forcing);
    for (auto [i, j] : L.pair_sums(n)) {
      BilinearOptions bo;
      bo.cap = m.cap;
      bo.policy = CapPolicy::Truncate;
      FieldSum b = bilinear_lift(m.q[static_cast<std::size_t>(i)], m.q[static_cast<std::size_t>(j)], bo);
      check("B(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")", b, false);
    }
  }
  return out;
}

FieldSum defect_sum(const ExpansionManifest& m, int N, const SubordinateSystem& sys) {
  if (N > static_cast<int>(m.q.size())) throw InvalidInput("defect: manifest built only through N = " + std::to_string(m.q.size()));
  std::vector<FieldSum> parts;
  for (int n = 0; n < N; ++n) {
    const FieldSum& q = m.q[static_cast<std::size_t>(n)];
    parts.push_back(time_derivative(q, sys));
    parts.push_back(op_A(q));
    parts.push_back(m.p[static_cast<std::size_t>(n)] * cd(-1.0));
  }
  BilinearOptions bo;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      parts.push_back(bilinear_lift(m.q[static_cast<std::size_t>(i)], m.q[static_cast<std::size_t>(j)], bo));
  return sum_with_floor(parts, kFloor);
}

}  // namespace gevrey
