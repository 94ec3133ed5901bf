#include <doctest.h>

#include <cmath>
#include <random>

#include "gevrey/error.hpp"
#include "gevrey/field_io.hpp"
#include "gevrey/identities.hpp"
#include "gevrey/spectral.hpp"

using namespace gevrey;

namespace {

DomainConfig cube() { return DomainConfig::make({kTwoPi, kTwoPi, kTwoPi}, 8); }

Vec3c eval_at(const SpectralField& f, const Vec3d& x, int dir = -1) {
  // Physical value of f (dir < 0) or of ∂_dir f at x.
  Vec3c s{};
  for (const auto& [k, c] : f.modes()) {
    Vec3d kl = f.domain().k_L(k);
    double ph = kl[0] * x[0] + kl[1] * x[1] + kl[2] * x[2];
    cd e = std::exp(cd(0.0, ph));
    if (dir >= 0) e *= cd(0.0, kl[static_cast<std::size_t>(dir)]);
    for (int i = 0; i < 3; ++i) s[i] += c[i] * e;
  }
  return s;
}

/// ⟨(u·∇)v, w⟩ by trapezoidal quadrature in physical space.
cd physical_trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w, int M) {
  const auto& L = u.domain().lengths;
  cd acc = 0.0;
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b)
      for (int c = 0; c < M; ++c) {
        Vec3d x{L[0] * a / M, L[1] * b / M, L[2] * c / M};
        Vec3c uu = eval_at(u, x), ww = eval_at(w, x);
        Vec3c g[3] = {eval_at(v, x, 0), eval_at(v, x, 1), eval_at(v, x, 2)};
        for (int i = 0; i < 3; ++i) {
          cd d = uu[0] * g[0][i] + uu[1] * g[1][i] + uu[2] * g[2][i];
          acc += d * std::conj(ww[i]);
        }
      }
  return acc / double(M * M * M);
}

}  // namespace

TEST_CASE("eigenvalues use rescaled wavevectors") {
  DomainConfig d = DomainConfig::make({kTwoPi, kTwoPi / 2.0, kTwoPi}, 8);
  CHECK(stokes_eigenvalue({1, 2, 0}, d) == doctest::Approx(17.0));
  CHECK_THROWS_AS(DomainConfig::make({1.0, 2.0, 3.0}, 8), InvalidInput);
  DomainConfig r = DomainConfig::make({1.0, 2.0, 4.0}, 8, true);
  CHECK(r.lengths[2] == doctest::Approx(kTwoPi));
  CHECK(r.lengths[0] == doctest::Approx(kTwoPi / 4.0));
}

TEST_CASE("gevrey norm of a single mode") {
  DomainConfig d = cube();
  SpectralField f(d, {{{1, 1, 0}, {cd(0, 0), cd(0, 0), cd(3, 0)}}}, false);
  GevreyIndex g(1.0, 0.5);
  CHECK(gevrey_norm(f, g) == doctest::Approx(2.0 * std::exp(0.5 * std::sqrt(2.0)) * 3.0).epsilon(1e-14));
  CHECK(gevrey_norm(SpectralField(d), g) == 0.0);
  SpectralField far(d, {{{40, 0, 0}, {cd(0, 0), cd(1, 0), cd(0, 0)}}}, false);
  CHECK_THROWS_AS(gevrey_norm(far, GevreyIndex(0.0, 200.0)), OverflowError);
}

TEST_CASE("leray projection removes the longitudinal part") {
  DomainConfig d = cube();
  SpectralField f(d, {{{1, 2, 0}, {cd(1, 0), cd(1, 0), cd(1, 0)}}}, false);
  SpectralField p = leray_project(f);
  Vec3c c = p.at({1, 2, 0});
  CHECK(std::abs(c[0] + 2.0 * c[1]) < 1e-15);
  CHECK(std::abs(c[2] - 1.0) < 1e-15);
  CHECK(p.divergence_defect() < 1e-15);
}

TEST_CASE("fields reject divergence and broken symmetry") {
  DomainConfig d = cube();
  CHECK_THROWS_AS(SpectralField::from_modes(d, {{{1, 0, 0}, {cd(1, 0), cd(0, 0), cd(0, 0)}}}, false), InvalidInput);
  CHECK_THROWS_AS(SpectralField::from_modes(d, {{{1, 0, 0}, {cd(0, 0), cd(1, 0), cd(0, 0)}}}, true), InvalidInput);
  SpectralField r = SpectralField::real_mode(d, {1, 0, 0}, {cd(0, 0), cd(1, 2), cd(0, 0)});
  CHECK(r.real_flag());
  CHECK(r.reality_defect() == 0.0);
  CHECK(r.conj() == r);
}

TEST_CASE("resolvent inverts A + i omega") {
  DomainConfig d = cube();
  Rng rng(5);
  SpectralField f = RandomInputs::complex_field(rng, d, 3, 5);
  for (double w : {0.0, 2.0, -7.5}) {
    SpectralField g = apply_resolvent(f, w);
    SpectralField back = apply_A(g) + g * cd(0.0, w);
    CHECK(max_abs_diff(back, f) < 1e-14);
  }
}

TEST_CASE("B matches a physical-space quadrature oracle") {
  DomainConfig d = DomainConfig::make({kTwoPi, kTwoPi, kTwoPi / 2.0}, 8);
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    SpectralField u = RandomInputs::real_field(rng, d, 2, 3);
    SpectralField v = RandomInputs::real_field(rng, d, 2, 3);
    SpectralField w = RandomInputs::complex_field(rng, d, 4, 6);
    cd oracle = physical_trilinear(u, v, w, 10);
    SpectralField b = bilinear_B_direct(u, v);
    CHECK(std::abs(inner(b, w) - oracle) < 1e-11 * (1.0 + std::abs(oracle)));
    SpectralField bf = bilinear_B_fft(u, v);
    CHECK(max_abs_diff(b, bf) < 1e-12);
    CHECK(b.real_flag());
    CHECK(b.at({0, 0, 0}) == Vec3c{});
  }
}

TEST_CASE("B respects the gradient and divergence forms") {
  DomainConfig d = cube();
  Rng rng(3);
  SpectralField u = RandomInputs::real_field(rng, d, 2, 4);
  SpectralField v = RandomInputs::real_field(rng, d, 2, 4);
  BilinearReport r1, r2;
  SpectralField a = bilinear_B_fft(u, u, {}, &r1);
  SpectralField b = bilinear_B_direct(u, u, {}, &r2);
  CHECK(r1.used_fft);
  CHECK_FALSE(r2.used_fft);
  CHECK(max_abs_diff(a, b) < 1e-12);
  CHECK(max_abs_diff(bilinear_B_fft(u, v), bilinear_B_direct(u, v)) < 1e-12);
  CHECK(std::abs(inner(bilinear_B(u, v), v)) < 1e-12 * h_norm(u) * h_norm(v) * h_norm(v));
}

TEST_CASE("support cap policies") {
  DomainConfig d = cube();
  SpectralField u = SpectralField::real_mode(d, {1, 0, 0}, {cd(0, 0), cd(1, 0), cd(0, 0)});
  SpectralField v = SpectralField::real_mode(d, {0, 1, 0}, {cd(1, 0), cd(0, 0), cd(0, 0)});
  BilinearOptions opt;
  opt.cap = 0;
  CHECK_THROWS_AS(bilinear_B(u, v, opt), SupportCapOverflow);
  try {
    bilinear_B(u, v, opt);
  } catch (const SupportCapOverflow& e) {
    CHECK(e.cap() == 0);
    CHECK(e.required() == 1);
    CHECK(e.dropped_norm() > 0.0);
  }
  opt.policy = CapPolicy::Truncate;
  BilinearReport rep;
  SpectralField t = bilinear_B(u, v, opt, &rep);
  CHECK(t.empty());
  CHECK(rep.required_extent == 1);
  CHECK(rep.dropped_norm > 0.0);
  CHECK(rep.dropped_norm == doctest::Approx(h_norm(bilinear_B(u, v))));
}

TEST_CASE("fft sizes") {
  CHECK(fft_size_at_least(7) == 8);
  CHECK(fft_size_at_least(11) == 12);
  CHECK(fft_size_at_least(13) == 15);
  CHECK(fft_size_at_least(1) == 1);
}

TEST_CASE("field JSON round trip") {
  DomainConfig d = cube();
  Rng rng(2);
  SpectralField f = RandomInputs::real_field(rng, d, 2, 3);
  SpectralField g = field_from_json(json::parse(field_to_json(f).dump()), d);
  CHECK(g == f);
  CHECK(g.real_flag());
  json dj = domain_to_json(d);
  CHECK(domain_from_json(dj) == d);
}
