#include <doctest.h>

#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/experiments.hpp"
#include "gevrey/expansion.hpp"
#include "gevrey/identities.hpp"
#include "gevrey/ple_io.hpp"

using namespace gevrey;

namespace {

DomainConfig cube() { return DomainConfig::make({kTwoPi, kTwoPi, kTwoPi}, 8); }
Monomial z(int j, const std::string& e) { return mono_z(j, parse_exponent(e)); }

/// ξ with λ = 2.
SpectralField xi() { return SpectralField::real_mode(cube(), {1, 1, 0}, {cd(1, 0), cd(-1, 0), cd(0, 0)}); }

ExpansionManifest worked(int N) {
  ExponentLattice L = build_lattice({Rational(1, 3)}, 0, Rational(3));
  ForceTerm f{Rational(1, 3), FieldSum::single(z(0, "-1/3"), xi())};
  BuildOptions opt;
  opt.N = N;
  return build_expansion({f}, L, SubordinateSystem(0, {}), opt);
}

double rel(const SpectralField& a, const SpectralField& b) { return h_norm(a - b) / h_norm(b); }

}  // namespace

TEST_CASE("lattice for a single generator") {
  ExponentLattice L = build_lattice({Rational(1, 3)}, 0, Rational(2));
  REQUIRE(L.size() == 6);
  for (int n = 1; n <= 6; ++n) CHECK(L.mu[static_cast<std::size_t>(n - 1)] == Rational(n, 3));
  CHECK(L.index_of(Rational(1)) == 2);
  auto pairs = L.pair_sums(2);
  CHECK(pairs == std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("lattice closure without the unit shift") {
  ExponentLattice L = build_lattice({Rational(3, 2), Rational(1)}, 1, Rational(4));
  std::vector<Rational> expect{Rational(1), Rational(3, 2), Rational(2), Rational(5, 2), Rational(3), Rational(7, 2), Rational(4)};
  CHECK(L.mu == expect);
  ExponentLattice L0 = build_lattice({Rational(3, 2)}, 0, Rational(4));
  std::vector<Rational> expect0{Rational(3, 2), Rational(5, 2), Rational(3), Rational(7, 2), Rational(4)};
  CHECK(L0.mu == expect0);
  CHECK(brute_force_lattice({Rational(3, 2)}, 0, Rational(4)) == expect0);
  CHECK_THROWS_AS(build_lattice({Rational(-1)}, 0, Rational(4)), InvalidInput);
}

TEST_CASE("worked single-mode expansion") {
  ExpansionManifest m = worked(4);
  const double lam = 2.0;
  REQUIRE(m.q.size() == 4);
  // q_1 = z_0^{-1/3} λ^{-1} ξ.
  REQUIRE(m.q[0].size() == 1);
  CHECK(m.q[0].terms().begin()->first == z(0, "-1/3").padded(m.k, m.ell));
  CHECK(rel(m.q[0].terms().begin()->second, xi() * cd(1.0 / lam)) < 1e-14);
  // μ = 2/3 and μ = 1 vanish for a single shear mode.
  CHECK(m.q[1].empty());
  CHECK(m.q[2].empty());
  // q at μ = 4/3 is (1/3) z_0^{-4/3} λ^{-2} ξ.
  REQUIRE(m.q[3].size() == 1);
  CHECK(m.q[3].terms().begin()->first == z(0, "-4/3").padded(m.k, m.ell));
  CHECK(rel(m.q[3].terms().begin()->second, xi() * cd(1.0 / (3.0 * lam * lam))) < 1e-14);
  for (const auto& c : m.checks) CHECK_MESSAGE(c.pass, c.item << " " << c.detail);
}

TEST_CASE("defect of the worked case") {
  ExpansionManifest m = worked(4);
  SubordinateSystem sys(0, {});
  std::vector<LevelTime> grid = level_grid(0, 10.0, 1e4, 16);
  GevreyIndex g(0.5, 0.0);
  NormSamples s1 = defect_of_expansion(m, 1, sys, grid, g);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = s1.t[i];
    double expect = (1.0 / 3.0) * std::pow(t, -4.0 / 3.0) / 2.0 * gevrey_norm(xi(), g);
    CHECK(std::abs(s1.norm[i] - expect) < 1e-10 * expect);
  }
  FieldSum r1 = defect_sum(m, 1, sys);
  REQUIRE(r1.size() == 1);
  CHECK(rel(r1.terms().begin()->second, xi() * cd(-1.0 / 6.0)) < 1e-14);

  NormSamples s4 = defect_of_expansion(m, 4, sys, grid, g);
  DecayFit f = fit_decay_log(s4.t, s4.ln_L, s4.norm, 0, FitOptions{0.0, std::nullopt, std::nullopt, 0.0});
  CHECK(f.slope == doctest::Approx(7.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("zero forcing gives a zero manifest and defect") {
  ExponentLattice L = build_lattice({Rational(1, 2)}, 0, Rational(2));
  BuildOptions opt;
  opt.N = 3;
  ExpansionManifest m = build_expansion({}, L, SubordinateSystem(0, {}), opt);
  for (const auto& q : m.q) CHECK(q.empty());
  NormSamples s = defect_of_expansion(m, 3, SubordinateSystem(0, {}), level_grid(0, 10, 100, 8), GevreyIndex(0.5, 0));
  for (double v : s.norm) CHECK(v == 0.0);
}

TEST_CASE("forcing checks and support caps") {
  ExponentLattice L = build_lattice({Rational(1, 3)}, 0, Rational(3));
  BuildOptions opt;
  opt.N = 2;
  ForceTerm wrong{Rational(1, 3), FieldSum::single(z(0, "-1/2"), xi())};
  CHECK_THROWS_AS(build_expansion({wrong}, L, SubordinateSystem(0, {}), opt), InvalidInput);
  ForceTerm off{Rational(1, 4), FieldSum::single(z(0, "-1/4"), xi())};
  CHECK_THROWS_AS(build_expansion({off}, L, SubordinateSystem(0, {}), opt), InvalidInput);

  SpectralField a = SpectralField::real_mode(cube(), {1, 0, 0}, {cd(0), cd(1), cd(0)});
  SpectralField b = SpectralField::real_mode(cube(), {1, 1, 0}, {cd(1), cd(-1), cd(0)});
  ForceTerm two{Rational(1, 3), FieldSum::single(z(0, "-1/3"), a + b)};
  opt.cap = 1;
  CHECK_THROWS_AS(build_expansion({two}, L, SubordinateSystem(0, {}), opt), SupportCapOverflow);
  opt.policy = CapPolicy::Truncate;
  ExpansionManifest m = build_expansion({two}, L, SubordinateSystem(0, {}), opt);
  CHECK(m.dropped_norm > 0.0);
  for (const auto& q : m.q)
    for (const auto& [mono, c] : q.terms()) CHECK(c.extent() <= 1);
}

TEST_CASE("manifest output is deterministic") {
  ExpansionManifest a = worked(4), b = worked(4);
  CHECK(manifest_to_json(a).dump() == manifest_to_json(b).dump());
  json j = manifest_to_json(a);
  CHECK(j["schema"] == "gevrey-expand/manifest/1");
  CHECK(j["terms"].size() == 4);
  CHECK(j["terms"][0]["mu"] == "1/3");
}

TEST_CASE("two-mode forcing produces nonlinear terms of every class") {
  ExponentLattice L = build_lattice({Rational(1, 3)}, 0, Rational(3));
  SpectralField a = SpectralField::real_mode(cube(), {1, 0, 0}, {cd(0), cd(1), cd(0)});
  SpectralField b = SpectralField::real_mode(cube(), {0, 1, 0}, {cd(0), cd(0), cd(1)});
  FieldSum p = FieldSum::single(z(-1, "2i") + z(0, "-1/3"), (a + b) * cd(0.0, -1.0));
  p.add_term(z(-1, "-2i") + z(0, "-1/3"), (a + b) * cd(0.0, 1.0));
  BuildOptions opt;
  opt.N = 4;
  ExpansionManifest m = build_expansion({{Rational(1, 3), p}}, L, SubordinateSystem(0, {}), opt);
  CHECK_FALSE(m.q[1].empty());
  for (int n = 0; n < 4; ++n) {
    CHECK(in_class(m.q[static_cast<std::size_t>(n)], 0, -L.mu[static_cast<std::size_t>(n)]));
    CHECK(is_real_symmetric(m.q[static_cast<std::size_t>(n)]));
  }
  auto items = verify_manifest(m);
  for (const auto& it : items) CHECK_MESSAGE(it.pass, it.item << " " << it.detail);
}
