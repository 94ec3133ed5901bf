#include <doctest.h>

#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/identities.hpp"
#include "gevrey/ple.hpp"
#include "gevrey/ple_io.hpp"
#include "gevrey/subordinate.hpp"

using namespace gevrey;

namespace {

DomainConfig cube() { return DomainConfig::make({kTwoPi, kTwoPi, kTwoPi}, 8); }

SpectralField xi() { return SpectralField::real_mode(cube(), {1, 0, 0}, {cd(0, 0), cd(1, 0), cd(0, 0)}); }

Monomial z(int j, const std::string& e) { return mono_z(j, parse_exponent(e)); }
Monomial zeta(int j, const std::string& e) { return mono_zeta(j, parse_exponent(e)); }

}  // namespace

TEST_CASE("rational arithmetic is exact and guarded") {
  Rational a(1, 3), b(-2, 6);
  CHECK(a + b == Rational(0));
  CHECK(a * Rational(3) == Rational(1));
  CHECK(Rational(4, -6) == Rational(-2, 3));
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(parse_rational("-7/21") == Rational(-1, 3));
  CHECK_THROWS_AS(Rational(1, 0), InvalidInput);
  Rational big(INT64_MAX / 2 + 1);
  CHECK_THROWS_AS(big * Rational(4), RationalOverflow);
}

TEST_CASE("exponent parsing") {
  CHECK(parse_exponent("-1/3") == ExactComplex(Rational(-1, 3)));
  CHECK(parse_exponent("2i") == ExactComplex(Rational(0), Rational(2)));
  CHECK(parse_exponent("-i") == ExactComplex(Rational(0), Rational(-1)));
  CHECK(parse_exponent("1/2-3/4i") == ExactComplex(Rational(1, 2), Rational(-3, 4)));
  CHECK(exponent_from_json(json::parse("[[1,3],[-2,1]]")) == ExactComplex(Rational(1, 3), Rational(-2)));
}

TEST_CASE("sums merge monomials and drop zeros") {
  ScalarSum p;
  p.add_term(z(0, "-1/3"), cd(2.0));
  p.add_term(z(0, "-1/3").padded(2, 1), cd(-2.0));
  CHECK(p.empty());
  p.add_term(z(1, "1"), cd(1.0));
  p.add_term(zeta(2, "1/2"), cd(1.0));
  // Dims only grow.
  CHECK(p.k() == 2);
  CHECK(p.ell() == 2);
  CHECK(p.size() == 2);
  ScalarSum q = p;
  q -= p;
  CHECK(q.empty());
}

TEST_CASE("classification scans iterated-log levels") {
  FieldSum p = FieldSum::single(z(0, "-1/3"), xi());
  ClassDescriptor c = classify(p);
  CHECK(c.m == 0);
  CHECK(c.mu == Rational(-1, 3));

  FieldSum q = FieldSum::single(z(0, "-1/3"), xi());
  q.add_term(z(0, "-2/3"), xi());
  c = classify(q);
  CHECK(c.m == -1);
  CHECK(c.mu == Rational(0));

  FieldSum r = FieldSum::single(z(1, "-1") + z(2, "1/2"), xi());
  c = classify(r);
  CHECK(c.m == 1);
  CHECK(c.mu == Rational(-1));

  FieldSum s = FieldSum::single(z(-1, "1"), xi());
  s.add_term(z(-1, "0"), xi());
  CHECK_THROWS_AS(classify(s), ClassError);

  CHECK(classify(FieldSum()).vacuous);
  CHECK(in_class(p, 0, Rational(-1, 3)));
  CHECK_FALSE(in_class(p, 0, Rational(-1, 2)));
}

TEST_CASE("real symmetry of conjugate pairs") {
  SpectralField c = SpectralField(cube(), {{{1, 0, 0}, {cd(0), cd(1, 1), cd(0)}}, {{0, 1, 0}, {cd(0), cd(0), cd(0, 2)}}}, false);
  FieldSum p = FieldSum::single(z(-1, "2i"), c);
  CHECK_FALSE(is_real_symmetric(p));
  p.add_term(z(-1, "-2i"), c.conj());
  CHECK(is_real_symmetric(p));
  EvalPoint pt = log_point(3.7, 0);
  SpectralField v = evaluate(p, pt);
  CHECK(v.real_flag());
  CHECK(v.reality_defect() < 1e-15);
}

TEST_CASE("operator R and dzeta by hand") {
  ScalarSum p = ScalarSum::single(z(0, "-1/3"), cd(1.0));
  ScalarSum r = op_R(p);
  CHECK(r.size() == 1);
  CHECK(r.terms().begin()->first == z(0, "-4/3"));
  CHECK(r.terms().begin()->second == cd(-1.0 / 3.0));

  ScalarSum q = ScalarSum::single(z(1, "2"), cd(1.0));
  ScalarSum rq = op_R(q);
  CHECK(rq.terms().begin()->first == z(0, "-1") + z(1, "1"));
  CHECK(rq.terms().begin()->second == cd(2.0));

  ScalarSum w = ScalarSum::single(zeta(2, "1/2"), cd(4.0));
  ScalarSum dw = dzeta(w, 2);
  CHECK(dw.terms().begin()->first == zeta(2, "-1/2"));
  CHECK(dw.terms().begin()->second == cd(2.0));
}

TEST_CASE("Z_A inverts A + M_-1") {
  Rng rng(17);
  for (int i = 0; i < 20; ++i) {
    FieldSum p = RandomInputs::field_sum(rng, cube());
    FieldSum back = op_A_plus_M(op_ZA(p));
    FieldSum d = back - p;
    double scale = 0.0, diff = 0.0;
    for (const auto& [m, c] : p.terms()) scale = std::max(scale, h_norm(c));
    for (const auto& [m, c] : d.terms()) diff = std::max(diff, h_norm(c));
    CHECK(diff <= 1e-12 * scale);
  }
  FieldSum bad = FieldSum::single(z(-1, "1"), xi());
  CHECK_THROWS(op_ZA(bad));
}

TEST_CASE("Z_A on an oscillating term") {
  FieldSum p = FieldSum::single(z(-1, "3i"), xi());
  FieldSum q = op_ZA(p);
  CHECK(q.terms().begin()->first == z(-1, "3i"));
  CHECK(max_abs_diff(q.terms().begin()->second, apply_resolvent(xi(), 3.0)) < 1e-16);
}

TEST_CASE("monomial evaluation") {
  EvalPoint pt = log_point(8.0, 1);
  CHECK(std::abs(monomial_value(z(0, "-1/3"), pt) - cd(0.5)) < 1e-15);
  cd osc = monomial_value(z(-1, "2i"), pt);
  CHECK(std::abs(osc - std::exp(cd(0.0, 16.0))) < 1e-14);
  CHECK(std::abs(monomial_value(z(1, "1"), pt) - std::log(8.0)) < 1e-15);
  cd a = monomial_value(z(-1, "7/3i") + z(0, "1/5i"), pt);
  cd b = monomial_value(z(-1, "-7/3i") + z(0, "-1/5i"), pt);
  CHECK(a == std::conj(b));
}

TEST_CASE("plus class conditions") {
  ScalarSum ok = scalar_constant(1.0);
  ok.add_term(z(3, "-1") + z(4, "1"), cd(5.0));
  CHECK(is_plus_class(ok, 1).ok);

  ScalarSum bad_one = scalar_constant(2.0);
  bad_one.add_term(z(2, "-1"), cd(1.0));
  PlusDecomposition d = is_plus_class(bad_one, 1);
  CHECK_FALSE(d.ok);
  CHECK(d.reason.rfind("plusclass:", 0) == 0);

  ScalarSum grows = scalar_constant(1.0);
  grows.add_term(z(2, "1"), cd(1.0));
  CHECK_FALSE(is_plus_class(grows, 1).ok);

  ScalarSum low = scalar_constant(1.0);
  low.add_term(z(1, "-1"), cd(1.0));
  CHECK_FALSE(is_plus_class(low, 1).ok);
  CHECK(is_plus_class(low, 0).ok);

  ScalarSum asym = scalar_constant(1.0);
  asym.add_term(z(1, "-1") + z(2, "i"), cd(1.0));
  CHECK_FALSE(is_plus_class(asym, 0).ok);
}

TEST_CASE("sum JSON round trip") {
  FieldSum p = FieldSum::single(z(-1, "2i") + z(0, "-1/3") + zeta(1, "1/2"), xi());
  p.add_term(z(-1, "-2i") + z(0, "-1/3") + zeta(1, "1/2"), xi() * cd(0.5));
  json j = sum_to_json(p);
  FieldSum q = field_sum_from_json(json::parse(j.dump()), [](const json& x) {
    return field_from_json(x.at("field"), cube());
  });
  CHECK(q == p);
}

TEST_CASE("bilinear lift adds exponents") {
  SpectralField a = SpectralField::real_mode(cube(), {1, 0, 0}, {cd(0), cd(1), cd(0)});
  SpectralField b = SpectralField::real_mode(cube(), {0, 1, 0}, {cd(0), cd(0), cd(1)});
  FieldSum p = FieldSum::single(z(0, "-1/3"), a);
  FieldSum q = FieldSum::single(z(0, "-2/3"), b);
  FieldSum r = bilinear_lift(p, q);
  CHECK(r.size() == 1);
  CHECK(r.terms().begin()->first == z(0, "-1"));
  CHECK(max_abs_diff(r.terms().begin()->second, bilinear_B(a, b)) < 1e-15);
}
