#include "gevrey/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "gevrey/error.hpp"
#include "gevrey/identities.hpp"
#include "gevrey/ple_io.hpp"

namespace gevrey {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string out_dir(const RunConfig& cfg, const PipelineOptions& opt) { return opt.out_dir ? *opt.out_dir : cfg.output; }

void write_json(const std::string& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

void say(const PipelineOptions& opt, const std::string& s) {
  if (!opt.quiet) std::cout << s << '\n';
}

json context(const GevreyIndex& g, double rho, int N, int m_star) {
  return json{{"alpha", g.alpha}, {"sigma", g.sigma}, {"rho", rho}, {"N", N}, {"m_star", m_star}};
}

std::vector<int> n_list(const std::vector<int>& given, int N) {
  if (!given.empty()) return given;
  std::vector<int> v;
  for (int n = 1; n <= N; ++n) v.push_back(n);
  return v;
}

json fit_json(const DecayFit& f) {
  return json{{"slope", std::isinf(f.slope) ? json("inf") : json(f.slope)},
              {"intercept", f.intercept},
              {"residual", f.residual},
              {"samples", f.t.size()},
              {"unbounded", f.unbounded}};
}

std::vector<std::string> fit_lines(const DecayFit& f, double threshold, bool pass) {
  return {"fit slope=" + (std::isinf(f.slope) ? std::string("inf") : fmt(f.slope)) + " residual=" + fmt(f.residual) +
              " samples=" + std::to_string(f.t.size()),
          "threshold=" + fmt(threshold) + " result=" + (pass ? "pass" : "fail")};
}

}  // namespace

void apply_overrides(RunConfig& cfg, const PipelineOptions& opt) {
  if (opt.max_n) cfg.build.N = *opt.max_n;
  if (!opt.rho.empty()) {
    for (double r : opt.rho)
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("--rho: each value must lie in (0, 1)");
    cfg.rho = opt.rho;
  }
}

int worker_count(const PipelineOptions& opt) {
  int n = opt.threads;
  if (n <= 0) {
    if (const char* env = std::getenv("GEVREY_EXPAND_THREADS")) n = std::atoi(env);
  }
  int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (n <= 0) n = hw;
  return std::max(1, n);
}

void parallel_for(int n, int workers, const std::function<void(int)>& f) {
  if (n <= 0) return;
  workers = std::min(workers, n);
  std::vector<std::exception_ptr> errs(static_cast<std::size_t>(n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) {
      try {
        f(i);
      } catch (...) {
        errs[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i; (i = next.fetch_add(1)) < n;) {
          try {
            f(i);
          } catch (...) {
            errs[static_cast<std::size_t>(i)] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

ExponentLattice config_lattice(const RunConfig& cfg) {
  return build_lattice(cfg.generators, cfg.m_star, cfg.cutoff);
}

ExpansionManifest config_manifest(const RunConfig& cfg) {
  ExponentLattice L = config_lattice(cfg);
  BuildOptions b = cfg.build;
  b.N = std::min<int>(b.N, static_cast<int>(L.size()));
  return build_expansion(cfg.forces, L, cfg.sys, b);
}

json real_sum_to_json(const RealFieldSum& r) {
  json terms = json::array();
  for (const auto& t : r.terms) {
    json b = json::array(), g = json::array(), f = json::array();
    for (const auto& x : t.beta) b.push_back(rational_to_json(x));
    for (const auto& x : t.gamma) g.push_back(rational_to_json(x));
    for (const auto& s : t.factors)
      f.push_back({{"kind", s.kind == SinKind::Cos ? "cos" : "sin"},
                   {"omega", rational_to_json(s.omega)},
                   {s.on_zeta ? "zeta" : "z", s.index}});
    terms.push_back({{"beta", b}, {"gamma", g}, {"factors", f}, {"xi", {{"field", field_to_json(t.xi)}}}});
  }
  return json{{"k", r.k}, {"ell", r.ell}, {"terms", terms}};
}

StepResult run_lattice(const RunConfig& cfg, const PipelineOptions& opt) {
  ExponentLattice L = config_lattice(cfg);
  StepResult r{"lattice", true, lattice_to_json(L)};
  write_json(out_dir(cfg, opt) + "/lattice.json", r.summary);
  std::string head;
  for (std::size_t i = 0; i < std::min<std::size_t>(L.size(), 8); ++i) head += (i ? " " : "") + L.mu[i].str();
  say(opt, "lattice: " + std::to_string(L.size()) + " exponents up to " + L.cutoff.str() + ": " + head +
               (L.size() > 8 ? " ..." : ""));
  return r;
}

StepResult run_build(const RunConfig& cfg, const PipelineOptions& opt) {
  ExpansionManifest m = config_manifest(cfg);
  write_json(out_dir(cfg, opt) + "/manifest.json", manifest_to_json(m));
  StepResult r{"build", true, json::object()};
  int failed = 0;
  for (const auto& c : m.checks)
    if (!c.pass) ++failed;
  r.pass = failed == 0;
  r.summary = {{"pass", r.pass},
               {"N", m.N},
               {"m_star", m.m_star},
               {"dims", {{"k", m.k}, {"ell", m.ell}}},
               {"class_checks", m.checks.size()},
               {"failed_checks", failed},
               {"dropped_norm", m.dropped_norm},
               {"context", context(m.gevrey, 0.0, m.N, m.m_star)}};
  write_json(out_dir(cfg, opt) + "/build.json", r.summary);
  say(opt, "build: N=" + std::to_string(m.N) + " dims (" + std::to_string(m.k) + "," + std::to_string(m.ell) + ") " +
               std::to_string(m.checks.size() - static_cast<std::size_t>(failed)) + "/" +
               std::to_string(m.checks.size()) + " class checks pass");
  return r;
}

StepResult run_defect(const RunConfig& cfg, const PipelineOptions& opt) {
  ExpansionManifest m = config_manifest(cfg);
  const DefectBlock& D = cfg.defect;
  std::vector<int> Ns = n_list(D.N, m.N);
  for (int N : Ns)
    if (N < 1 || N > m.N) throw ConfigError(cfg.source + ":verify.defect.N: index " + std::to_string(N) + " outside 1.." + std::to_string(m.N));
  std::vector<LevelTime> grid = level_grid(D.level, D.lo, D.hi, D.samples);
  std::vector<json> fits(Ns.size());
  std::vector<bool> ok(Ns.size());
  parallel_for(static_cast<int>(Ns.size()), worker_count(opt), [&](int i) {
    const int N = Ns[static_cast<std::size_t>(i)];
    NormSamples s = defect_of_expansion(m, N, cfg.sys, grid, m.gevrey);
    FitOptions fo = D.fit;
    DecayFit f = fit_decay_log(s.t, s.ln_L, s.norm, m.m_star, fo);
    const double mu = m.lattice.mu[static_cast<std::size_t>(N - 1)].to_double();
    const double thr = mu + D.margin;
    const bool pass = f.slope >= thr;
    CsvContext ctx{m.gevrey, 0.0, N, m.m_star, "defect_norm"};
    write_file_atomic(out_dir(cfg, opt) + "/defect_N" + std::to_string(N) + ".csv", samples_csv(s, ctx, fit_lines(f, thr, pass)));
    fits[static_cast<std::size_t>(i)] = {{"context", context(m.gevrey, 0.0, N, m.m_star)},
                                         {"mu_N", mu},
                                         {"threshold", thr},
                                         {"pass", pass},
                                         {"fit", fit_json(f)}};
    ok[static_cast<std::size_t>(i)] = pass;
  });
  StepResult r{"defect", true, json::object()};
  for (bool b : ok) r.pass = r.pass && b;
  r.summary = {{"pass", r.pass}, {"grid", {{"level", D.level}, {"lo", D.lo}, {"hi", D.hi}, {"samples", D.samples}}}, {"fits", fits}};
  write_json(out_dir(cfg, opt) + "/defect.json", r.summary);
  for (const auto& f : fits)
    say(opt, "defect N=" + std::to_string(f["context"]["N"].get<int>()) + ": slope " + f["fit"]["slope"].dump() +
                 " vs threshold " + fmt(f["threshold"].get<double>()) + (f["pass"].get<bool>() ? " pass" : " FAIL"));
  return r;
}

StepResult run_simulate(const RunConfig& cfg, const PipelineOptions& opt) {
  if (cfg.m_star != 0) throw ConfigError(cfg.source + ":verify.simulate: trajectory verification requires m_star = 0");
  const SimulateBlock& S = cfg.simulate;
  ExpansionManifest m = config_manifest(cfg);
  std::vector<int> Ns = n_list(S.N, m.N);
  for (int N : Ns)
    if (N < 0 || N > m.N) throw ConfigError(cfg.source + ":verify.simulate.N: index " + std::to_string(N) + " outside 0.." + std::to_string(m.N));
  GalerkinBox box(cfg.domain, S.solver.band);
  FieldSum F;
  for (const auto& f : cfg.forces) F += f.p;
  DenseForcing force = dense_forcing(F, cfg.sys, box);
  SolverConfig sc = S.solver;
  sc.nonlinear = true;
  const double lo = S.fit.window_lo ? std::max(*S.fit.window_lo, sc.t0) : sc.t0;
  const double hi = S.fit.window_hi ? std::min(*S.fit.window_hi, sc.t1) : sc.t1;
  sc.samples = log_grid(lo, hi, S.samples);

  const int T = S.trajectories;
  std::vector<Trajectory> trs(static_cast<std::size_t>(T));
  parallel_for(T, worker_count(opt), [&](int j) {
    Rng rng(opt.seed * 1000003ULL + static_cast<std::uint64_t>(j));
    SpectralField u0 = RandomInputs::real_field(rng, cfg.domain, S.solver.band, 4);
    double n0 = h_norm(u0);
    if (n0 > 0.0) u0 *= cd(S.u0_amplitude / n0);
    trs[static_cast<std::size_t>(j)] = integrate(u0, force, sc);
  });

  struct Job {
    int N, j;
    double rho;
  };
  std::vector<Job> jobs;
  for (int N : Ns)
    for (double rho : cfg.rho)
      for (int j = 0; j < T; ++j) jobs.push_back({N, j, rho});
  std::vector<json> fits(jobs.size());
  std::vector<char> ok(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), worker_count(opt), [&](int i) {
    const Job& jb = jobs[static_cast<std::size_t>(i)];
    GevreyIndex g(m.gevrey.alpha + 1.0 - jb.rho, m.gevrey.sigma);
    NormSamples s = remainder_norms(trs[static_cast<std::size_t>(jb.j)], m, jb.N, cfg.sys, g);
    FitOptions fo = S.fit;
    DecayFit f = fit_decay_log(s.t, s.ln_L, s.norm, 0, fo);
    const double mu = jb.N == 0 ? 0.0 : m.lattice.mu[static_cast<std::size_t>(jb.N - 1)].to_double();
    const double thr = mu + S.margin;
    const bool pass = f.slope >= thr;
    CsvContext ctx{g, jb.rho, jb.N, 0, "remainder_norm"};
    std::ostringstream name;
    name << out_dir(cfg, opt) << "/remainder_N" << jb.N << "_rho" << fmt(jb.rho) << "_u" << jb.j << ".csv";
    write_file_atomic(name.str(), samples_csv(s, ctx, fit_lines(f, thr, pass)));
    fits[static_cast<std::size_t>(i)] = {{"context", context(g, jb.rho, jb.N, 0)},
                                         {"trajectory", jb.j},
                                         {"mu_N", mu},
                                         {"threshold", thr},
                                         {"pass", pass},
                                         {"fit", fit_json(f)}};
    ok[static_cast<std::size_t>(i)] = pass;
  });
  StepResult r{"simulate", true, json::object()};
  json drift = json::array();
  double worst_drift = 0.0;
  for (const auto& t : trs) {
    drift.push_back(t.energy_drift);
    worst_drift = std::max(worst_drift, t.energy_drift);
  }
  for (char b : ok) r.pass = r.pass && b;
  const bool drift_ok = worst_drift < 1e-6;
  r.pass = r.pass && drift_ok;
  r.summary = {{"pass", r.pass},
               {"band", S.solver.band},
               {"grid", box.grid()},
               {"dt", S.solver.dt},
               {"horizon", {S.solver.t0, S.solver.t1}},
               {"energy_drift", drift},
               {"energy_drift_pass", drift_ok},
               {"fits", fits}};
  write_json(out_dir(cfg, opt) + "/simulate.json", r.summary);
  for (const auto& f : fits)
    say(opt, "simulate N=" + std::to_string(f["context"]["N"].get<int>()) + " rho=" + fmt(f["context"]["rho"].get<double>()) +
                 " u" + std::to_string(f["trajectory"].get<int>()) + ": slope " + f["fit"]["slope"].dump() + " vs threshold " +
                 fmt(f["threshold"].get<double>()) + (f["pass"].get<bool>() ? " pass" : " FAIL"));
  say(opt, "simulate: worst energy drift " + fmt(worst_drift));
  return r;
}

StepResult run_fode(const RunConfig& cfg, const PipelineOptions& opt) {
  const FodeBlock& B = cfg.fode;
  std::vector<FodeResult> res(B.runs.size());
  parallel_for(static_cast<int>(B.runs.size()), worker_count(opt), [&](int i) {
    const FodeRun& run = B.runs[static_cast<std::size_t>(i)];
    FodeConfig fc;
    fc.solver = B.solver;
    fc.norm = GevreyIndex(cfg.gevrey.alpha + 1.0 - B.epsilon, cfg.gevrey.sigma);
    fc.fit = B.fit;
    fc.delta0 = run.delta0;
    const double lo = B.fit.window_lo ? std::max(*B.fit.window_lo, fc.solver.t0) : fc.solver.t0;
    const double hi = B.fit.window_hi ? std::min(*B.fit.window_hi, fc.solver.t1) : fc.solver.t1;
    fc.solver.samples = log_grid(lo, hi, B.samples);
    res[static_cast<std::size_t>(i)] = fode_experiment(run.p, run.g, cfg.sys, fc);
  });
  StepResult r{"fode", true, json::object()};
  json runs = json::array();
  for (std::size_t i = 0; i < res.size(); ++i) {
    const auto& fr = res[i];
    const auto& run = B.runs[i];
    GevreyIndex g(cfg.gevrey.alpha + 1.0 - B.epsilon, cfg.gevrey.sigma);
    CsvContext ctx{g, B.epsilon, 0, fr.fit.m_star, "remainder_norm"};
    write_file_atomic(out_dir(cfg, opt) + "/fode_" + run.name + ".csv", samples_csv(fr.samples, ctx, fit_lines(fr.fit, fr.threshold, fr.pass)));
    runs.push_back({{"name", run.name},
                    {"context", context(g, B.epsilon, 0, fr.fit.m_star)},
                    {"delta0", run.delta0},
                    {"mu", fr.mu},
                    {"threshold", fr.threshold},
                    {"pass", fr.pass},
                    {"energy_drift", fr.energy_drift},
                    {"fit", fit_json(fr.fit)}});
    r.pass = r.pass && fr.pass;
    say(opt, "fode " + run.name + ": slope " + runs.back()["fit"]["slope"].dump() + " vs threshold " + fmt(fr.threshold) +
                 (fr.pass ? " pass" : " FAIL"));
  }
  r.summary = {{"pass", r.pass}, {"runs", runs}};
  write_json(out_dir(cfg, opt) + "/fode.json", r.summary);
  return r;
}

StepResult run_convert(const RunConfig& cfg, const PipelineOptions& opt) {
  ExpansionManifest m = config_manifest(cfg);
  // Sample times above T_min spread over several decades of L_{s}.
  LevelTime base = cfg.sys.T_min();
  std::vector<LevelTime> pts;
  for (double f : {2.0, 10.0, 1e3, 1e6}) {
    LevelTime t = base;
    if (t.value <= 0.0) t = LevelTime{0, 10.0};
    pts.push_back(LevelTime{t.level, t.value * f + (t.level == 0 ? 10.0 : 0.0)});
  }
  json terms = json::array();
  double worst = 0.0;
  bool ip_ok = true;
  auto check = [&](const FieldSum& p, const std::string& item, int n, json& out) {
    RealFieldSum rs = to_real(p);
    FieldSum back = to_complex(rs);
    bool ip = p.k() < -1 || check_IP(p, p.k());
    int expect_k = ip ? p.k() : p.k() + 1;
    if (rs.k != expect_k) ip_ok = false;
    for (const auto& t : pts) {
      EvalPoint pt = cfg.sys.point(t, std::max(rs.k, 0));
      SpectralField a = evaluate(p, pt);
      SpectralField b = evaluate_real(rs, pt);
      SpectralField c = evaluate(back, pt);
      double scale = std::max(h_norm(a), 1e-300);
      double e = std::max(h_norm(a - b), h_norm(a - c)) / scale;
      if (h_norm(a) == 0.0) e = std::max(h_norm(b), h_norm(c));
      worst = std::max(worst, e);
    }
    out[item] = real_sum_to_json(rs);
    out[item + "_IP"] = ip;
    (void)n;
  };
  for (int n = 0; n < m.N; ++n) {
    json e = {{"n", n + 1}, {"mu", m.lattice.mu[static_cast<std::size_t>(n)].str()}};
    check(m.p[static_cast<std::size_t>(n)], "p", n + 1, e);
    check(m.q[static_cast<std::size_t>(n)], "q", n + 1, e);
    terms.push_back(e);
  }
  StepResult r{"convert", true, json::object()};
  r.pass = worst < 1e-12 && ip_ok;
  write_json(out_dir(cfg, opt) + "/real_manifest.json",
             {{"schema", "gevrey-expand/real-manifest/1"}, {"m_star", m.m_star}, {"terms", terms}});
  r.summary = {{"pass", r.pass}, {"worst_rel_diff", worst}, {"dims_rule", ip_ok}, {"N", m.N},
               {"context", context(m.gevrey, 0.0, m.N, m.m_star)}};
  write_json(out_dir(cfg, opt) + "/convert.json", r.summary);
  say(opt, "convert: worst relative difference " + fmt(worst) + (r.pass ? " pass" : " FAIL"));
  return r;
}

StepResult run_identities(const PipelineOptions& opt) {
  auto res = run_identity_suite(opt.seed);
  StepResult r{"verify-identities", true, identity_results_to_json(res, opt.seed)};
  r.pass = r.summary["pass"].get<bool>();
  for (const auto& x : res)
    say(opt, "identity " + x.name + ": " + std::to_string(x.trials - x.failures) + "/" + std::to_string(x.trials) +
                 " worst " + fmt(x.worst) + (x.pass ? " pass" : " FAIL"));
  return r;
}

StepResult run_report(const std::string& dir, const PipelineOptions& opt) {
  StepResult r{"report", true, json::object()};
  if (!fs::is_directory(dir)) throw ConfigError(dir + ": output directory does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json steps = json::object(), csv = json::array();
  const std::vector<std::string> step_files = {"build.json", "defect.json", "simulate.json", "fode.json", "convert.json",
                                               "identities.json"};
  for (const auto& p : files) {
    const std::string name = p.filename().string();
    if (std::find(step_files.begin(), step_files.end(), name) != step_files.end()) {
      std::ifstream is(p);
      json j = json::parse(is);
      steps[p.stem().string()] = j;
      if (j.contains("pass")) r.pass = r.pass && j["pass"].get<bool>();
    } else if (p.extension() == ".csv") {
      std::ifstream is(p);
      std::string line;
      json lines = json::array();
      std::string header;
      while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0) {
          if (header.empty())
            header = line.substr(2);
          else
            lines.push_back(line.substr(2));
        }
      }
      csv.push_back({{"file", name}, {"context", header}, {"summary", lines}});
    }
  }
  r.summary = {{"schema", "gevrey-expand/report/1"}, {"pass", r.pass}, {"steps", steps}, {"csv", csv}};
  write_json(dir + "/report.json", r.summary);
  say(opt, "report: " + std::to_string(steps.size()) + " step summaries, " + std::to_string(csv.size()) + " CSV files, " +
               (r.pass ? "all pass" : "failures present"));
  return r;
}

int run_command(const std::string& sub, const std::optional<std::string>& config_path, const PipelineOptions& opt) {
  try {
    StepResult r;
    if (sub == "verify-identities") {
      r = run_identities(opt);
      std::string dir = opt.out_dir ? *opt.out_dir : std::string("out");
      if (config_path) dir = out_dir(load_config(*config_path), opt);
      write_json(dir + "/identities.json", r.summary);
    } else if (sub == "report") {
      std::string dir = opt.out_dir ? *opt.out_dir : std::string("out");
      if (config_path) dir = out_dir(load_config(*config_path), opt);
      r = run_report(dir, opt);
    } else {
      if (!config_path) throw ConfigError(sub + ": --config is required");
      RunConfig cfg = load_config(*config_path);
      apply_overrides(cfg, opt);
      if (sub == "lattice")
        r = run_lattice(cfg, opt);
      else if (sub == "build")
        r = run_build(cfg, opt);
      else if (sub == "defect")
        r = run_defect(cfg, opt);
      else if (sub == "simulate")
        r = run_simulate(cfg, opt);
      else if (sub == "fode")
        r = run_fode(cfg, opt);
      else if (sub == "convert")
        r = run_convert(cfg, opt);
      else
        throw ConfigError("unknown subcommand '" + sub + "'");
    }
    return r.pass ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidInput& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const SupportCapOverflow& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gevrey
