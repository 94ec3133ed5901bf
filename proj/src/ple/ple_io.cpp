#include "gevrey/ple_io.hpp"

#include <cctype>
#include <algorithm>

namespace gevrey {

namespace {

json rat_to_json(const Rational& r) { return json::array({r.num(), r.den()}); }

std::string strip(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  return s;
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_array() && j.size() == 2) return Rational(j[0].get<std::int64_t>(), j[1].get<std::int64_t>());
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InvalidInput("cannot read rational from " + j.dump());
}

json rational_to_json(const Rational& r) { return rat_to_json(r); }

ExactComplex parse_exponent(const std::string& text) {
  std::string s = strip(text);
  if (s.empty()) throw InvalidInput("empty exponent");
  if (s.back() != 'i') return ExactComplex(parse_rational(s));
  std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not leading and not part of a fraction.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;)
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  auto im_part = [](std::string t) {
    if (t.empty() || t == "+") return Rational(1);
    if (t == "-") return Rational(-1);
    if (t.front() == '+') t.erase(0, 1);
    if (t.size() > 2 && t[0] == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
    if (t.size() > 3 && t[0] == '-' && t[1] == '(' && t.back() == ')') return -parse_rational(t.substr(2, t.size() - 3));
    return parse_rational(t);
  };
  if (split == std::string::npos || body.find('(') == 0) return ExactComplex(Rational(0), im_part(body));
  return ExactComplex(parse_rational(body.substr(0, split)), im_part(body.substr(split)));
}

json exponent_to_json(const ExactComplex& e) { return json::array({rat_to_json(e.re), rat_to_json(e.im)}); }

ExactComplex exponent_from_json(const json& j) {
  if (j.is_array() && j.size() == 2 && j[0].is_array()) return {rational_from_json(j[0]), rational_from_json(j[1])};
  if (j.is_number_integer()) return ExactComplex(Rational(j.get<std::int64_t>()));
  if (j.is_string()) return parse_exponent(j.get<std::string>());
  if (j.is_object()) return {rational_from_json(j.value("re", json(0))), rational_from_json(j.value("im", json(0)))};
  throw InvalidInput("cannot read exponent from " + j.dump());
}

json monomial_to_json(const Monomial& m) {
  json b = json::array(), g = json::array();
  for (const auto& e : m.beta) b.push_back(exponent_to_json(e));
  for (const auto& e : m.gamma) g.push_back(exponent_to_json(e));
  return json{{"beta", b}, {"gamma", g}};
}

Monomial monomial_from_json(const json& j) {
  if (j.contains("beta") || j.contains("gamma")) {
    json b = j.value("beta", json::array({json(0)}));
    json g = j.value("gamma", json::array());
    if (b.empty()) throw InvalidInput("beta must contain at least beta_-1");
    Monomial m(static_cast<int>(b.size()) - 2, static_cast<int>(g.size()));
    for (std::size_t i = 0; i < b.size(); ++i) m.beta[i] = exponent_from_json(b[i]);
    for (std::size_t i = 0; i < g.size(); ++i) m.gamma[i] = exponent_from_json(g[i]);
    return m;
  }
  Monomial m;
  if (j.contains("z"))
    for (const auto& [key, val] : j.at("z").items()) {
      int idx = std::stoi(key);
      if (idx < -1) throw InvalidInput("z index below -1");
      m = m + mono_z(idx, exponent_from_json(val));
    }
  if (j.contains("zeta"))
    for (const auto& [key, val] : j.at("zeta").items()) {
      int idx = std::stoi(key);
      if (idx < 1) throw InvalidInput("zeta index below 1");
      m = m + mono_zeta(idx, exponent_from_json(val));
    }
  return m;
}

json coef_to_json(const cd& c) { return json::array({c.real(), c.imag()}); }

cd coef_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("scalar")) return coef_from_json(j.at("scalar"));
  throw InvalidInput("cannot read complex coefficient from " + j.dump());
}

json sum_to_json(const ScalarSum& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json t = monomial_to_json(m);
    t["xi"] = json{{"scalar", coef_to_json(c)}};
    terms.push_back(t);
  }
  return json{{"k", p.k()}, {"ell", p.ell()}, {"terms", terms}};
}

json sum_to_json(const FieldSum& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) {
    json t = monomial_to_json(m);
    t["xi"] = json{{"field", field_to_json(c)}};
    terms.push_back(t);
  }
  return json{{"k", p.k()}, {"ell", p.ell()}, {"terms", terms}};
}

namespace {

template <class C, class F>
PleSum<C> read_sum(const json& j, F&& coef) {
  const json& terms = j.is_array() ? j : j.at("terms");
  PleSum<C> p(j.is_object() ? j.value("k", -1) : -1, j.is_object() ? j.value("ell", 0) : 0);
  for (const auto& t : terms) {
    Monomial m = monomial_from_json(t);
    C c = coef(t);
    p.add_term(m, c);
  }
  return p;
}

}  // namespace

ScalarSum scalar_sum_from_json(const json& j) {
  return read_sum<cd>(j, [](const json& t) {
    if (t.contains("c")) return coef_from_json(t.at("c"));
    if (t.contains("xi")) return coef_from_json(t.at("xi"));
    return cd(1.0);
  });
}

FieldSum field_sum_from_json(const json& j, const FieldResolver& resolve) {
  return read_sum<SpectralField>(j, [&](const json& t) {
    if (!t.contains("xi")) throw InvalidInput("field term lacks 'xi'");
    SpectralField f = resolve(t.at("xi"));
    if (t.contains("c")) f *= coef_from_json(t.at("c"));
    return f;
  });
}

}  // namespace gevrey
