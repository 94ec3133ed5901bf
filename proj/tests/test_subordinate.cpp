#include <doctest.h>

#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/ple_io.hpp"
#include "gevrey/real_form.hpp"
#include "gevrey/subordinate.hpp"

using namespace gevrey;

namespace {

Monomial z(int j, const std::string& e) { return mono_z(j, parse_exponent(e)); }
Monomial zeta(int j, const std::string& e) { return mono_zeta(j, parse_exponent(e)); }

/// Y_1 = 1 + 3/ln t, Y_2 = 1 + cos(4 ln Y_1)/(2 ln ln t).
SubordinateSystem eg2_system() {
  ScalarSum Z1 = scalar_constant(1.0);
  Z1.add_term(z(1, "-1"), cd(3.0));
  ScalarSum Z2 = scalar_constant(1.0);
  Z2.add_term(z(2, "-1") + zeta(1, "4i"), cd(0.25));
  Z2.add_term(z(2, "-1") + zeta(1, "-4i"), cd(0.25));
  return SubordinateSystem(0, {{1, Z1}, {2, Z2}});
}

}  // namespace

TEST_CASE("iterated logarithms and exponentials") {
  CHECK(iterated_log(-1, 2.0) == doctest::Approx(std::exp(2.0)));
  CHECK(iterated_log(0, 2.0) == 2.0);
  CHECK(iterated_log(2, 100.0) == doctest::Approx(std::log(std::log(100.0))));
  CHECK_THROWS_AS(iterated_log(2, 0.5), DomainError);
  CHECK(iterated_exp(2, 0.0) == doctest::Approx(std::exp(1.0)));
  CHECK(std::isinf(iterated_exp(3, 10.0)));
}

TEST_CASE("level times reach beyond double range") {
  LevelTime t{2, 20.0};
  CHECK(std::isinf(t.t()));
  CHECK(t.log_level(2) == 20.0);
  CHECK(t.log_level(3) == doctest::Approx(std::log(20.0)));
  CHECK(t.log_level(1) == doctest::Approx(std::exp(20.0)));
  CHECK(LevelTime{0, 1e300} < t);
  CHECK(LevelTime{1, 3.0} < LevelTime{0, 100.0});
}

TEST_CASE("subordinate values follow the closed form") {
  SubordinateSystem sys = eg2_system();
  for (double t : {50.0, 1e3, 1e7}) {
    auto Y = sys.eval_Y(t);
    double y1 = 1.0 + 3.0 / std::log(t);
    double y2 = 1.0 + std::cos(4.0 * std::log(y1)) / (2.0 * std::log(std::log(t)));
    CHECK(Y[0] == doctest::Approx(y1).epsilon(1e-14));
    CHECK(Y[1] == doctest::Approx(y2).epsilon(1e-13));
  }
  CHECK(sys.T_min().t() > std::exp(1.0));
  CHECK_THROWS_AS(sys.point(2.0, 0), DomainError);
}

TEST_CASE("W_k matches the derivative of Y_k") {
  SubordinateSystem sys = eg2_system();
  for (std::size_t k = 0; k < 2; ++k) {
    for (double t : {100.0, 1e4}) {
      double h = 1e-4 * t;
      auto D = [&](double hh) { return (sys.eval_Y(t + hh)[k] - sys.eval_Y(t - hh)[k]) / (2 * hh); };
      double fd = (4 * D(h / 2) - D(h)) / 3;
      cd w = eval_sum(sys.W()[k], t, sys);
      CHECK(std::abs(w.imag()) < 1e-14);
      CHECK(std::abs(fd - w.real()) <= 1e-7 * std::abs(w.real()));
    }
  }
  // W_1 = R Z_1 = −3 z_0^{-1} z_1^{-2}.
  const ScalarSum& W1 = sys.W()[0];
  CHECK(W1.size() == 1);
  CHECK(W1.terms().begin()->first == (z(0, "-1") + z(1, "-2")).padded(1, 0));
  CHECK(W1.terms().begin()->second == cd(-3.0));
}

TEST_CASE("time derivative by chain rule") {
  SubordinateSystem sys = eg2_system();
  ScalarSum p = ScalarSum::single(z(-1, "2i") + z(0, "-1/3") + zeta(2, "1/2"), cd(1.0, 0.5));
  ScalarSum dp = time_derivative(p, sys);
  for (double t : {100.0, 1e3, 1e6}) {
    double h = std::min(1e-3 * t, 0.025);
    auto f = [&](double s) { return eval_sum(p, s, sys); };
    auto D = [&](double hh) { return (f(t + hh) - f(t - hh)) / (2 * hh); };
    cd fd = (4.0 * D(h / 2) - D(h)) / 3.0;
    cd sym = eval_sum(dp, t, sys);
    CHECK(std::abs(fd - sym) < 1e-7 * std::abs(sym));
  }
}

TEST_CASE("system validation") {
  ScalarSum Z = scalar_constant(1.0);
  Z.add_term(z(1, "-1"), cd(1.0));
  CHECK_THROWS_AS(SubordinateSystem(1, {{1, Z}}), InvalidInput);
  ScalarSum Zs = scalar_constant(1.0);
  Zs.add_term(z(2, "-1"), cd(1.0));
  CHECK_THROWS_AS(SubordinateSystem(0, {{2, Zs}, {1, Z}}), InvalidInput);
  CHECK_THROWS_AS(SubordinateSystem(0, {{1, Zs}}), InvalidInput);
  ScalarSum Zbad = scalar_constant(1.0);
  Zbad.add_term(zeta(1, "1"), cd(1.0));
  CHECK_THROWS_AS(SubordinateSystem(0, {{1, Zbad}}), InvalidInput);
  try {
    ScalarSum two = scalar_constant(2.0);
    SubordinateSystem(0, {{1, two}});
    CHECK(false);
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("plusclass:") != std::string::npos);
  }
}

TEST_CASE("integral bound ratio approaches 1/gamma") {
  for (int m : {0, 1, 2})
    for (double lam : {0.5, 1.0, 2.0})
      for (double g : {0.5, 1.0, 2.0}) {
        double T = m == 2 ? 20.0 : 5.0;
        std::vector<double> grid{10.0, 100.0, 1000.0};
        IntegralBoundResult r = check_integral_bound(m, lam, g, T, grid);
        CHECK(r.last_ratio >= 0.9 / g);
        CHECK(r.last_ratio <= 1.1 / g);
      }
}
