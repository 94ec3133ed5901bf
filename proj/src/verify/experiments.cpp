#include "gevrey/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gevrey/error.hpp"

namespace gevrey {

std::vector<LevelTime> level_grid(int level, double a, double b, int n) {
  std::vector<LevelTime> g;
  for (double v : log_grid(a, b, n)) g.push_back(LevelTime{level, v});
  return g;
}

namespace {

void push_sample(NormSamples& s, const LevelTime& t, int m_star, double norm) {
  s.t.push_back(t.t());
  s.L.push_back(t.log_level(m_star));
  s.ln_L.push_back(t.log_level(m_star + 1));
  s.norm.push_back(norm);
}

}  // namespace

NormSamples defect_of_expansion(const ExpansionManifest& m, int N, const SubordinateSystem& sys,
                                const std::vector<LevelTime>& grid, const GevreyIndex& g) {
  FieldSum r = defect_sum(m, N, sys);
  NormSamples s;
  for (const auto& t : grid) {
    SpectralField v = evaluate(r, sys.point(t, std::max(r.k(), 0)));
    push_sample(s, t, m.m_star, gevrey_norm(v, g));
  }
  return s;
}

DenseForcing dense_forcing(const FieldSum& p, const SubordinateSystem& sys, const GalerkinBox& box) {
  struct Term {
    Monomial m;
    std::vector<std::pair<std::size_t, Vec3c>> c;
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (const auto& [mono, c] : p.terms()) {
    Term t{mono, {}};
    for (const auto& [k, x] : c.modes()) {
      int i = box.index_of(k);
      if (i < 0)
        throw SupportCapOverflow(box.N(), box_extent(k), 0.0, "forcing mode outside the Galerkin band");
      t.c.emplace_back(static_cast<std::size_t>(i), x);
    }
    terms->push_back(std::move(t));
  }
  const int k = std::max(p.k(), 0);
  const SubordinateSystem* sp = &sys;
  return [terms, k, sp](double t, std::vector<Vec3c>& out) {
    std::fill(out.begin(), out.end(), Vec3c{});
    if (terms->empty()) return;
    EvalPoint pt = sp->point(t, k);
    for (const auto& term : *terms) {
      cd v = monomial_value(term.m, pt);
      if (v == 0.0) continue;
      for (const auto& [i, x] : term.c)
        for (int j = 0; j < 3; ++j) out[i][static_cast<std::size_t>(j)] += v * x[static_cast<std::size_t>(j)];
    }
  };
}

NormSamples remainder_norms(const Trajectory& tr, const ExpansionManifest& m, int N, const SubordinateSystem& sys,
                            const GevreyIndex& g) {
  if (tr.t.size() != tr.u.size()) throw InvalidInput("remainder: malformed trajectory");
  if (!(tr.domain == m.domain)) throw InvalidInput("remainder: trajectory and manifest live on different domains");
  FieldSum U = partial_sum(m.q, N);
  for (const auto& [mono, c] : U.terms())
    if (c.extent() > tr.band)
      throw InvalidInput("remainder: U_N has support beyond the Galerkin band " + std::to_string(tr.band));
  NormSamples s;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    SpectralField d = tr.u[i];
    if (!U.empty()) d -= evaluate(U, sys.point(tr.t[i], std::max(U.k(), 0)));
    push_sample(s, LevelTime{0, tr.t[i]}, m.m_star, gevrey_norm(d, g));
  }
  return s;
}

FodeResult fode_experiment(const FieldSum& p, const FieldSum& g, const SubordinateSystem& sys,
                           const FodeConfig& cfg) {
  ClassDescriptor cls = classify(p);
  if (cls.vacuous) throw InvalidInput("fode: empty forcing");
  FodeResult res;
  res.mu = -cls.mu.to_double();
  const int m = cls.m;
  DomainConfig d;
  for (const auto& [mono, c] : p.terms())
    if (!c.empty()) d = c.domain();
  GalerkinBox box(d, cfg.solver.band);
  DenseForcing fp = dense_forcing(p, sys, box), fg = dense_forcing(g, sys, box);
  DenseForcing f = [fp, fg, n = box.size()](double t, std::vector<Vec3c>& out) {
    thread_local std::vector<Vec3c> tmp;
    tmp.resize(n);
    fp(t, out);
    fg(t, tmp);
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int j = 0; j < 3; ++j) out[i][static_cast<std::size_t>(j)] += tmp[i][static_cast<std::size_t>(j)];
  };
  SolverConfig sc = cfg.solver;
  sc.nonlinear = false;
  SpectralField w0(d);
  w0.set_real_flag(true);
  Trajectory tr = integrate(w0, f, sc);
  res.energy_drift = tr.energy_drift;
  FieldSum zp = op_ZA(p);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    SpectralField r = tr.u[i] - evaluate(zp, sys.point(tr.t[i], std::max(zp.k(), 0)));
    push_sample(res.samples, LevelTime{0, tr.t[i]}, m, gevrey_norm(r, cfg.norm));
  }
  res.fit = fit_decay_log(res.samples.t, res.samples.ln_L, res.samples.norm, m, cfg.fit);
  res.threshold = res.mu + (m == 0 ? 0.8 * std::min(cfg.delta0, 0.5) : 0.0);
  res.pass = res.fit.slope >= res.threshold;
  return res;
}

std::string samples_csv(const NormSamples& s, const CsvContext& ctx, const std::vector<std::string>& summary) {
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "# alpha=" << num(ctx.g.alpha) << " sigma=" << num(ctx.g.sigma) << " rho=" << num(ctx.rho)
     << " N=" << ctx.N << " m_star=" << ctx.m_star << '\n';
  os << "t,L_" << ctx.m_star << "(t)," << ctx.quantity << '\n';
  for (std::size_t i = 0; i < s.norm.size(); ++i) os << num(s.t[i]) << ',' << num(s.L[i]) << ',' << num(s.norm[i]) << '\n';
  for (const auto& line : summary) os << "# " << line << '\n';
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error("cannot open " + tmp.string() + " for writing");
    os << content;
    if (!os) throw Error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, target);
}

}  // namespace gevrey
