#include <doctest.h>

#include <cmath>
#include <limits>

#include "gevrey/error.hpp"
#include "gevrey/experiments.hpp"
#include "gevrey/identities.hpp"
#include "gevrey/ple_io.hpp"

using namespace gevrey;

namespace {

DomainConfig cube() { return DomainConfig::make({kTwoPi, kTwoPi, kTwoPi}, 8); }
Monomial z(int j, const std::string& e) { return mono_z(j, parse_exponent(e)); }
SpectralField xi() { return SpectralField::real_mode(cube(), {1, 1, 0}, {cd(1, 0), cd(-1, 0), cd(0, 0)}); }

double vdiff(const SpectralField& a, const SpectralField& b) { return max_abs_diff(a, b); }

}  // namespace

TEST_CASE("linear decay is exact") {
  SolverConfig cfg;
  cfg.band = 1;
  cfg.t0 = 0.0;
  cfg.t1 = 5.0;
  cfg.dt = 1e-3;
  cfg.nonlinear = false;
  cfg.samples = {0.0, 1.0, 2.5, 5.0};
  Trajectory tr = integrate(xi(), zero_forcing(), cfg);
  REQUIRE(tr.u.size() == 4);
  for (std::size_t i = 0; i < tr.t.size(); ++i)
    CHECK(vdiff(tr.u[i], xi() * cd(std::exp(-2.0 * tr.t[i]))) < 1e-8);
  CHECK(tr.energy_drift < 1e-6);

  cfg.scheme = Scheme::IMEXEuler;
  Trajectory te = integrate(xi(), zero_forcing(), cfg);
  CHECK(vdiff(te.u.back(), xi() * cd(std::exp(-10.0))) < 1e-4);
}

TEST_CASE("oscillating forcing reaches the resolvent state") {
  const double w = 3.0;
  SpectralField f = SpectralField::from_modes(cube(), {{{0, 1, 0}, {cd(1), cd(0), cd(0)}}}, false);
  GalerkinBox box(cube(), 1);
  std::vector<Vec3c> fd = box.to_dense(f);
  DenseForcing forcing = [&](double t, std::vector<Vec3c>& out) {
    cd e = std::exp(cd(0.0, w * t));
    for (std::size_t i = 0; i < out.size(); ++i)
      for (int c = 0; c < 3; ++c) out[i][static_cast<std::size_t>(c)] = fd[i][static_cast<std::size_t>(c)] * e;
  };
  SolverConfig cfg;
  cfg.band = 1;
  cfg.t0 = 0.0;
  cfg.t1 = 20.0;
  cfg.dt = 1e-3;
  cfg.nonlinear = false;
  cfg.samples = {20.0};
  Trajectory tr = integrate(apply_resolvent(f, w), forcing, cfg);
  CHECK(vdiff(tr.u.back(), apply_resolvent(f, w) * std::exp(cd(0.0, 20.0 * w))) < 1e-8);
}

TEST_CASE("unforced nonlinear flow loses energy") {
  Rng rng(3);
  SpectralField u0 = RandomInputs::real_field(rng, cube(), 2, 4);
  SolverConfig cfg;
  cfg.band = 2;
  cfg.t0 = 0.0;
  cfg.t1 = 2.0;
  cfg.dt = 2e-3;
  cfg.samples = log_grid(0.01, 2.0, 12);
  Trajectory tr = integrate(u0, zero_forcing(), cfg);
  for (std::size_t i = 1; i < tr.u.size(); ++i) CHECK(h_norm(tr.u[i]) <= h_norm(tr.u[i - 1]));
  CHECK(tr.energy_drift < 1e-6);
}

TEST_CASE("Galerkin nonlinearity matches the projected bilinear form") {
  Rng rng(7);
  for (bool real : {true, false}) {
    SpectralField u = real ? RandomInputs::real_field(rng, cube(), 2, 5) : RandomInputs::complex_field(rng, cube(), 2, 6);
    GalerkinBox box(cube(), 2);
    std::vector<Vec3c> out;
    box.nonlinear(box.to_dense(u), out, real);
    SpectralField expect = project_box(bilinear_B_direct(u, u), 2);
    CHECK(vdiff(box.to_field(out, real), expect) < 1e-12);
  }
}

TEST_CASE("non-finite states raise DivergenceError") {
  DenseForcing bad = [](double t, std::vector<Vec3c>& out) {
    for (auto& c : out) c = {cd(0), cd(0), cd(0)};
    if (t > 0.5) out[0][0] = cd(std::numeric_limits<double>::quiet_NaN());
  };
  SolverConfig cfg;
  cfg.band = 1;
  cfg.t1 = 1.0;
  cfg.samples = {1.0};
  CHECK_THROWS_AS(integrate(xi(), bad, cfg), DivergenceError);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(integrate(xi(), zero_forcing(), cfg), InvalidInput);
}

TEST_CASE("decay fits") {
  std::vector<double> t = log_grid(10.0, 1e4, 50), n43, c, osc, zero(50, 0.0);
  for (double s : t) {
    n43.push_back(5.0 * std::pow(s, -4.0 / 3.0));
    c.push_back(2.0);
    osc.push_back((2.0 + std::sin(std::log(s))) * std::pow(s, -1.0));
  }
  FitOptions all{0.0, std::nullopt, std::nullopt, 0.0};
  CHECK(fit_decay_exponent(t, n43, 0, all).slope == doctest::Approx(4.0 / 3.0).epsilon(1e-6));
  CHECK(std::abs(fit_decay_exponent(t, c, 0, all).slope) < 1e-12);
  CHECK(std::abs(fit_decay_exponent(t, osc, 0, all).slope - 1.0) < 0.1);
  DecayFit z = fit_decay_exponent(t, zero, 0, all);
  CHECK(z.unbounded);
  CHECK(std::isinf(z.slope));
  std::vector<double> few(t.begin(), t.begin() + 7), fewn(n43.begin(), n43.begin() + 7);
  CHECK_THROWS_AS(fit_decay_exponent(few, fewn, 0, all), InvalidInput);
  FitOptions win{0.0, 100.0, 1000.0, 0.0};
  DecayFit w = fit_decay_exponent(t, n43, 0, win);
  for (double s : w.t) CHECK((s >= 100.0 && s <= 1000.0));
}

TEST_CASE("remainder of the single-mode expansion") {
  ExponentLattice L = build_lattice({Rational(1, 3)}, 0, Rational(3));
  SubordinateSystem sys(0, {});
  FieldSum p = FieldSum::single(z(0, "-1/3"), xi());
  BuildOptions opt;
  opt.N = 4;
  ExpansionManifest m = build_expansion({{Rational(1, 3), p}}, L, sys, opt);

  GalerkinBox box(cube(), 1);
  SolverConfig cfg;
  cfg.band = 1;
  cfg.t0 = 1.0;
  cfg.t1 = 2000.0;
  cfg.dt = 1e-2;
  cfg.samples = log_grid(100.0, 2000.0, 24);
  Trajectory tr = integrate(SpectralField(cube()), dense_forcing(p, sys, box), cfg);
  GevreyIndex g(0.5, 0.0);

  NormSamples r0 = remainder_norms(tr, m, 0, sys, g);
  for (std::size_t i = 0; i < tr.u.size(); ++i) CHECK(r0.norm[i] == doctest::Approx(gevrey_norm(tr.u[i], g)));

  NormSamples r1 = remainder_norms(tr, m, 1, sys, g);
  FitOptions all{0.0, std::nullopt, std::nullopt, 0.0};
  DecayFit fr = fit_decay_log(r1.t, r1.ln_L, r1.norm, 0, all);
  NormSamples d1 = defect_of_expansion(m, 1, sys, level_grid(0, 100.0, 2000.0, 24), g);
  DecayFit fd = fit_decay_log(d1.t, d1.ln_L, d1.norm, 0, all);
  CHECK(fr.slope == doctest::Approx(4.0 / 3.0).epsilon(0.05));
  CHECK(std::abs(fr.slope - fd.slope) < 0.15);

  GalerkinBox small(cube(), 1);
  FieldSum wide = FieldSum::single(z(0, "-1/3"), SpectralField::real_mode(cube(), {2, 0, 0}, {cd(0), cd(1), cd(0)}));
  CHECK_THROWS_AS(dense_forcing(wide, sys, small), SupportCapOverflow);
}

TEST_CASE("fode remainder decays faster than the forcing") {
  SubordinateSystem sys(0, {});
  SpectralField a = SpectralField::real_mode(cube(), {1, 0, 0}, {cd(0), cd(1), cd(0)});
  SpectralField b = SpectralField::real_mode(cube(), {0, 1, 0}, {cd(0), cd(0), cd(1)});
  FodeConfig fc;
  fc.solver.band = 1;
  fc.solver.t0 = 1.0;
  fc.solver.t1 = 2000.0;
  fc.solver.dt = 1e-2;
  fc.solver.samples = log_grid(200.0, 2000.0, 24);
  fc.norm = GevreyIndex(1.25, 0.0);
  fc.fit = FitOptions{0.0, std::nullopt, std::nullopt, 0.0};
  fc.delta0 = 0.5;
  FodeResult r = fode_experiment(FieldSum::single(z(0, "-1/3"), a), FieldSum::single(z(0, "-5/6"), b), sys, fc);
  CHECK(r.mu == doctest::Approx(1.0 / 3.0));
  CHECK(r.threshold == doctest::Approx(1.0 / 3.0 + 0.4));
  CHECK(r.pass);
  CHECK(r.fit.slope == doctest::Approx(5.0 / 6.0).epsilon(0.03));
}

TEST_CASE("csv layout") {
  NormSamples s;
  s.t = {1.0, 2.0};
  s.ln_L = {0.0, std::log(2.0)};
  s.L = {1.0, 2.0};
  s.norm = {0.5, 0.25};
  CsvContext ctx{GevreyIndex(0.5, 0.0), 0.25, 2, 0, "remainder_norm"};
  std::string csv = samples_csv(s, ctx, {"slope 1"});
  CHECK(csv.find("t,L_0(t),remainder_norm\n") != std::string::npos);
  CHECK(csv.rfind("# slope 1") != std::string::npos);
  CHECK(csv.rfind("# alpha=", 0) == 0);
}
