#include "gevrey/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "gevrey/error.hpp"
#include "gevrey/ple_io.hpp"
#include "gevrey/real_form.hpp"

namespace gevrey {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ConfigError(path + ": " + what); }

const json& need(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path, "missing required key '" + key + "'");
  return j.at(key);
}

template <class F>
auto guarded(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Vec3c vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected a 3-vector");
  Vec3c v;
  for (std::size_t i = 0; i < 3; ++i) v[i] = coef_from_json(j[i]);
  return v;
}

WaveVector wave_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) fail(path, "expected an integer 3-vector");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

SpectralField field_spec(const json& j, const DomainConfig& d, const std::string& path) {
  return guarded(path, [&] {
    if (j.contains("real_mode")) {
      const json& r = j.at("real_mode");
      return SpectralField::real_mode(d, wave_from_json(need(r, "k", path), path + ".real_mode.k"),
                                      vec_from_json(need(r, "c", path), path + ".real_mode.c"));
    }
    if (j.contains("real_modes")) {
      SpectralField f(d);
      f.set_real_flag(true);
      std::size_t i = 0;
      for (const auto& r : j.at("real_modes")) {
        std::string p = path + ".real_modes[" + std::to_string(i++) + "]";
        f += SpectralField::real_mode(d, wave_from_json(need(r, "k", p), p + ".k"), vec_from_json(need(r, "c", p), p + ".c"));
      }
      return f;
    }
    if (j.contains("modes")) return field_from_json(j, d, true);
    fail(path, "field needs 'real_mode', 'real_modes' or 'modes'");
  });
}

struct Resolver {
  const std::map<std::string, SpectralField>* fields;
  const DomainConfig* d;
  SpectralField operator()(const json& xi, const std::string& path) const {
    if (xi.is_string()) {
      auto it = fields->find(xi.get<std::string>());
      if (it == fields->end()) fail(path, "unknown field reference '" + xi.get<std::string>() + "'");
      return it->second;
    }
    if (xi.is_object() && xi.contains("field")) return field_spec(xi.at("field"), *d, path + ".field");
    if (xi.is_object()) return field_spec(xi, *d, path);
    fail(path, "field reference must be a name or an inline field");
  }
};

std::vector<Sinusoid> factors_from_json(const json& j, const std::string& path) {
  std::vector<Sinusoid> out;
  std::size_t i = 0;
  for (const auto& f : j) {
    std::string p = path + "[" + std::to_string(i++) + "]";
    Sinusoid s;
    if (f.contains("cos")) {
      s.kind = SinKind::Cos;
      s.omega = guarded(p, [&] { return rational_from_json(f.at("cos")); });
    } else if (f.contains("sin")) {
      s.kind = SinKind::Sin;
      s.omega = guarded(p, [&] { return rational_from_json(f.at("sin")); });
    } else {
      fail(p, "sinusoid needs 'cos' or 'sin' frequency");
    }
    if (f.contains("z")) {
      s.index = f.at("z").get<int>();
    } else if (f.contains("zeta")) {
      s.on_zeta = true;
      s.index = f.at("zeta").get<int>();
    } else {
      fail(p, "sinusoid needs a 'z' or 'zeta' argument index");
    }
    out.push_back(s);
  }
  return out;
}

/// Real-form sum: terms {z, zeta, factors, c, xi}.
template <class C, class Coef>
PleSum<C> real_sum_from_json(const json& j, const std::string& path, Coef&& coef) {
  const json& terms = need(j, "terms", path);
  struct Raw {
    std::map<int, Rational> z, zeta;
    std::vector<Sinusoid> f;
    C xi;
  };
  std::vector<Raw> raw;
  int k = j.value("k", -1), ell = j.value("ell", 0);
  std::size_t i = 0;
  for (const auto& t : terms) {
    std::string p = path + ".terms[" + std::to_string(i++) + "]";
    Raw r;
    for (const char* key : {"z", "zeta"})
      if (t.contains(key))
        for (const auto& [idx, v] : t.at(key).items()) {
          int n = std::stoi(idx);
          Rational e = guarded(p + "." + key, [&] { return rational_from_json(v); });
          if (std::string(key) == "z") {
            if (n < -1) fail(p + ".z", "index below -1");
            r.z[n] = e;
            k = std::max(k, n);
          } else {
            if (n < 1) fail(p + ".zeta", "index below 1");
            r.zeta[n] = e;
            ell = std::max(ell, n);
          }
        }
    if (t.contains("factors")) r.f = factors_from_json(t.at("factors"), p + ".factors");
    for (const auto& s : r.f) {
      if (s.on_zeta)
        ell = std::max(ell, s.index);
      else
        k = std::max(k, s.index);
    }
    r.xi = coef(t, p);
    raw.push_back(std::move(r));
  }
  RealSum<C> rs;
  rs.k = k;
  rs.ell = ell;
  for (auto& r : raw) {
    RealTerm<C> t;
    t.beta.assign(static_cast<std::size_t>(k + 2), Rational(0));
    t.gamma.assign(static_cast<std::size_t>(ell), Rational(0));
    for (const auto& [n, e] : r.z) t.beta[static_cast<std::size_t>(n + 1)] = e;
    for (const auto& [n, e] : r.zeta) t.gamma[static_cast<std::size_t>(n - 1)] = e;
    t.factors = r.f;
    t.xi = std::move(r.xi);
    rs.terms.push_back(std::move(t));
  }
  return guarded(path, [&] { return to_complex(rs); });
}

ScalarSum scalar_sum_spec(const json& j, const std::string& path) {
  std::string form = j.value("form", "complex");
  if (form == "real")
    return real_sum_from_json<cd>(j, path, [](const json& t, const std::string& p) {
      cd c = t.contains("c") ? coef_from_json(t.at("c")) : cd(1.0);
      if (c.imag() != 0.0) fail(p + ".c", "real-form coefficients must be real");
      return c;
    });
  if (form != "complex") fail(path + ".form", "expected 'complex' or 'real'");
  return guarded(path, [&] { return scalar_sum_from_json(j); });
}

FieldSum field_sum_spec(const json& j, const Resolver& res, const std::string& path) {
  std::string form = j.value("form", "complex");
  auto coef = [&](const json& t, const std::string& p) {
    SpectralField f = res(need(t, "xi", p), p + ".xi");
    if (t.contains("c")) {
      cd c = coef_from_json(t.at("c"));
      if (form == "real" && c.imag() != 0.0) fail(p + ".c", "real-form coefficients must be real");
      f *= c;
    }
    return f;
  };
  if (form == "real") return real_sum_from_json<SpectralField>(j, path, coef);
  if (form != "complex") fail(path + ".form", "expected 'complex' or 'real'");
  const json& terms = need(j, "terms", path);
  FieldSum p(j.value("k", -1), j.value("ell", 0));
  std::size_t i = 0;
  for (const auto& t : terms) {
    std::string tp = path + ".terms[" + std::to_string(i++) + "]";
    Monomial m = guarded(tp, [&] { return monomial_from_json(t); });
    p.add_term(m, coef(t, tp));
  }
  return p;
}

FitOptions fit_spec(const json& j) {
  FitOptions f;
  f.discard_fraction = j.value("discard", 0.3);
  f.floor = j.value("floor", 0.0);
  if (j.contains("window")) {
    f.window_lo = j.at("window").at(0).get<double>();
    f.window_hi = j.at("window").at(1).get<double>();
  }
  return f;
}

std::vector<int> int_list(const json& j, const char* key) {
  std::vector<int> v;
  if (j.contains(key)) v = j.at(key).get<std::vector<int>>();
  return v;
}

SolverConfig solver_spec(const json& j, const std::string& path) {
  SolverConfig s;
  s.band = j.value("band", 2);
  s.dt = j.value("dt", 1e-3);
  s.t0 = j.value("t0", 1.0);
  s.t1 = j.value("t1", 10.0);
  std::string sch = j.value("scheme", "ifrk4");
  if (sch == "ifrk4")
    s.scheme = Scheme::IFRK4;
  else if (sch == "imex-euler")
    s.scheme = Scheme::IMEXEuler;
  else
    fail(path + ".scheme", "expected 'ifrk4' or 'imex-euler'");
  if (!(s.dt > 0.0)) fail(path + ".dt", "must be positive");
  if (!(s.t1 > s.t0)) fail(path, "t1 must exceed t0");
  if (s.band < 1) fail(path + ".band", "must be at least 1");
  return s;
}

}  // namespace

json parse_key_value(const std::string& text) {
  json root = json::object();
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(no) + ": empty key");
    // Segments after '.' are object keys, "[n]" segments are array indices.
    std::vector<std::pair<std::string, bool>> path;
    std::string tok;
    bool in_bracket = false;
    for (char c : key) {
      if (c == '.' || c == '[' || c == ']') {
        if (!tok.empty()) path.emplace_back(tok, in_bracket);
        tok.clear();
        in_bracket = c == '[';
      } else {
        tok += c;
      }
    }
    if (!tok.empty()) path.emplace_back(tok, in_bracket);
    json v;
    try {
      v = json::parse(val);
    } catch (const json::parse_error&) {
      v = val;
    }
    const std::string where = "line " + std::to_string(no) + ": ";
    json* node = &root;
    for (const auto& [name, index] : path) {
      if (index) {
        if (node->is_null()) *node = json::array();
        if (!node->is_array()) throw ConfigError(where + "'" + key + "' indexes a non-array");
        std::size_t i = 0;
        try {
          i = std::stoul(name);
        } catch (const std::exception&) {
          throw ConfigError(where + "bad array index '" + name + "'");
        }
        while (node->size() <= i) node->push_back(nullptr);
        node = &(*node)[i];
      } else {
        if (node->is_null()) *node = json::object();
        if (!node->is_object()) throw ConfigError(where + "'" + key + "' descends into a non-object");
        node = &(*node)[name];
      }
    }
    *node = v;
  }
  return root;
}

json parse_config_text(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
  }
  return parse_key_value(text);
}

RunConfig config_from_json(const json& j, const std::string& source) {
  RunConfig c;
  c.source = source;
  c.normalized = j;
  const std::string S = source;
  if (!j.is_object()) fail(S, "config must be an object");
  if (j.value("schema", std::string()) != kConfigSchema) fail(S + ":schema", std::string("expected '") + kConfigSchema + "'");

  const json& dj = need(j, "domain", S);
  c.domain = guarded(S + ":domain", [&] { return domain_from_json(dj); });

  if (j.contains("gevrey")) {
    const json& g = j.at("gevrey");
    c.gevrey = guarded(S + ":gevrey", [&] { return GevreyIndex(g.value("alpha", 0.5), g.value("sigma", 0.0)); });
    if (g.contains("rho")) c.rho = g.at("rho").get<std::vector<double>>();
    for (double r : c.rho)
      if (!(r > 0.0 && r < 1.0)) fail(S + ":gevrey.rho", "each rho must lie in (0, 1)");
  }

  if (j.contains("fields"))
    for (const auto& [name, f] : j.at("fields").items())
      c.fields.emplace(name, field_spec(f, c.domain, S + ":fields." + name));
  Resolver res{&c.fields, &c.domain};

  const json& fj = need(j, "force", S);
  c.m_star = fj.value("m_star", 0);
  if (c.m_star < 0) fail(S + ":force.m_star", "must be nonnegative");

  int sub_m = c.m_star;
  std::vector<SubordinateEntry> entries;
  if (j.contains("subordinate")) {
    const json& sj = j.at("subordinate");
    sub_m = sj.value("m", c.m_star);
    std::size_t i = 0;
    for (const auto& e : sj.value("entries", json::array())) {
      std::string p = S + ":subordinate.entries[" + std::to_string(i++) + "]";
      SubordinateEntry se;
      se.s = need(e, "s", p).get<int>();
      se.Z = scalar_sum_spec(need(e, "Z", p), p + ".Z");
      entries.push_back(std::move(se));
    }
  }
  c.sys = guarded(S + ":subordinate", [&] { return SubordinateSystem(sub_m, std::move(entries)); });

  std::size_t i = 0;
  std::set<Rational> mus;
  for (const auto& t : need(fj, "terms", S + ":force")) {
    std::string p = S + ":force.terms[" + std::to_string(i++) + "]";
    ForceTerm ft;
    ft.mu = guarded(p + ".mu", [&] { return rational_from_json(need(t, "mu", p)); });
    std::string form = t.value("form", "complex");
    const json& sj = need(t, "sum", p);
    ft.p = field_sum_spec(sj, res, p + ".sum");
    if (form == "complex-hat" || form == "real-hat") {
      if ((form == "real-hat") != (sj.value("form", "complex") == "real"))
        fail(p + ".form", "'real-hat' requires a real-form sum and 'complex-hat' a complex one");
      ft.p = multiply(ScalarSum::single(mono_z(c.m_star, ExactComplex(-ft.mu)), cd(1.0)), ft.p);
    } else if (form != "complex") {
      fail(p + ".form", "expected 'complex', 'complex-hat' or 'real-hat'");
    }
    mus.insert(ft.mu);
    c.forces.push_back(std::move(ft));
  }
  if (fj.contains("generators")) {
    for (const auto& g : fj.at("generators"))
      c.generators.push_back(guarded(S + ":force.generators", [&] { return rational_from_json(g); }));
  } else {
    c.generators.assign(mus.begin(), mus.end());
  }

  if (j.contains("build")) {
    const json& b = j.at("build");
    c.build.N = b.value("N", 4);
    if (b.contains("cutoff")) c.cutoff = guarded(S + ":build.cutoff", [&] { return rational_from_json(b.at("cutoff")); });
    c.build.cap = b.value("cap", -1);
    std::string pol = b.value("policy", "error");
    if (pol == "error")
      c.build.policy = CapPolicy::Error;
    else if (pol == "truncate")
      c.build.policy = CapPolicy::Truncate;
    else
      fail(S + ":build.policy", "expected 'error' or 'truncate'");
    c.build.dense_threshold = b.value("dense_threshold", std::size_t{512});
  }
  if (c.build.N < 0) fail(S + ":build.N", "must be nonnegative");
  c.build.gevrey = c.gevrey;

  if (j.contains("verify")) {
    const json& v = j.at("verify");
    if (v.contains("defect")) {
      const json& d = v.at("defect");
      c.defect.enabled = d.value("enabled", true);
      c.defect.level = d.value("level", 0);
      c.defect.lo = d.value("t_lo", 1e3);
      c.defect.hi = d.value("t_hi", 1e6);
      c.defect.samples = d.value("samples", 32);
      c.defect.N = int_list(d, "N");
      c.defect.margin = d.value("margin", 0.3);
      c.defect.fit = fit_spec(d);
      c.defect.fit.discard_fraction = d.value("discard", 0.0);
    }
    if (v.contains("simulate")) {
      const json& d = v.at("simulate");
      c.simulate.enabled = d.value("enabled", true);
      c.simulate.solver = solver_spec(d, S + ":verify.simulate");
      c.simulate.samples = d.value("samples", 32);
      c.simulate.trajectories = d.value("trajectories", 3);
      c.simulate.u0_amplitude = d.value("u0_amplitude", 0.1);
      c.simulate.N = int_list(d, "N");
      c.simulate.margin = d.value("margin", 0.1);
      c.simulate.fit = fit_spec(d);
      if (c.m_star != 0) fail(S + ":verify.simulate", "trajectory verification requires m_star = 0");
    }
    if (v.contains("fode")) {
      const json& d = v.at("fode");
      c.fode.enabled = d.value("enabled", true);
      c.fode.solver = solver_spec(d, S + ":verify.fode");
      c.fode.samples = d.value("samples", 32);
      c.fode.epsilon = d.value("epsilon", 0.25);
      c.fode.fit = fit_spec(d);
      std::size_t r = 0;
      for (const auto& run : need(d, "runs", S + ":verify.fode")) {
        std::string p = S + ":verify.fode.runs[" + std::to_string(r) + "]";
        FodeRun fr;
        fr.name = run.value("name", "run" + std::to_string(r));
        fr.delta0 = run.value("delta0", 0.5);
        fr.p = field_sum_spec(need(run, "p", p), res, p + ".p");
        fr.g = run.contains("g") ? field_sum_spec(run.at("g"), res, p + ".g") : FieldSum();
        c.fode.runs.push_back(std::move(fr));
        ++r;
      }
    }
  }
  c.output = j.value("output", std::string("out"));
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << is.rdbuf();
  json j = parse_config_text(ss.str());
  return config_from_json(j, path);
}

}  // namespace gevrey
