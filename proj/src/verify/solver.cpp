#include "gevrey/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <new>

#if defined(__SSE2__)
#include <xmmintrin.h>
#endif

#include "gevrey/error.hpp"

namespace gevrey {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

struct GalerkinBox::Impl {
  int M = 0;
  std::size_t n = 0, nh = 0;
  double* re[9] = {};
  fftw_complex* sp[9] = {};
  fftw_complex* cx[9] = {};
  fftw_plan c2r = nullptr, r2c = nullptr, bwd = nullptr, fwd = nullptr;
  std::vector<std::size_t> half_idx;
  std::vector<char> half_conj;

  explicit Impl(int m) : M(m) {
    n = static_cast<std::size_t>(M) * M * M;
    nh = static_cast<std::size_t>(M) * M * (M / 2 + 1);
    for (int i = 0; i < 9; ++i) {
      re[i] = fftw_alloc_real(n);
      sp[i] = fftw_alloc_complex(nh);
      cx[i] = fftw_alloc_complex(2 * n);
      if (!re[i] || !sp[i] || !cx[i]) throw std::bad_alloc();
    }
    std::lock_guard<std::mutex> lock(planner_mutex());
    c2r = fftw_plan_dft_c2r_3d(M, M, M, sp[0], re[0], FFTW_MEASURE);
    r2c = fftw_plan_dft_r2c_3d(M, M, M, re[0], sp[0], FFTW_MEASURE);
    bwd = fftw_plan_dft_3d(M, M, M, cx[0], cx[0] + n, FFTW_BACKWARD, FFTW_MEASURE);
    fwd = fftw_plan_dft_3d(M, M, M, cx[0], cx[0] + n, FFTW_FORWARD, FFTW_MEASURE);
  }
  ~Impl() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      for (fftw_plan p : {c2r, r2c, bwd, fwd})
        if (p) fftw_destroy_plan(p);
    }
    for (int i = 0; i < 9; ++i) {
      fftw_free(re[i]);
      fftw_free(sp[i]);
      fftw_free(cx[i]);
    }
  }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

GalerkinBox::GalerkinBox(const DomainConfig& d, int N) : d_(d), N_(N) {
  if (N < 1) throw InvalidInput("Galerkin band must be at least 1");
  M_ = fft_size_at_least(3 * N + 1);
  impl_ = std::make_shared<Impl>(M_);
  const int w = 2 * N + 1;
  const int hM = M_ / 2 + 1;
  auto wrap = [this](int x) { return static_cast<std::size_t>(((x % M_) + M_) % M_); };
  lookup_.assign(static_cast<std::size_t>(w) * w * w, -1);
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      for (int c = -N; c <= N; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        WaveVector k{a, b, c};
        lookup_[static_cast<std::size_t>(((a + N) * w + (b + N)) * w + (c + N))] = static_cast<int>(k_.size());
        k_.push_back(k);
        kl_.push_back(d.k_L(k));
        lambda_.push_back(stokes_eigenvalue(k, d));
        grid_idx_.push_back((wrap(a) * M_ + wrap(b)) * M_ + wrap(c));
        const bool upper = static_cast<int>(wrap(c)) < hM;
        const int sa = upper ? a : -a, sb = upper ? b : -b, sc = upper ? c : -c;
        impl_->half_idx.push_back((wrap(sa) * M_ + wrap(sb)) * hM + wrap(sc));
        impl_->half_conj.push_back(upper ? 0 : 1);
      }
}

int GalerkinBox::index_of(const WaveVector& k) const {
  if (box_extent(k) > N_) return -1;
  const int w = 2 * N_ + 1;
  return lookup_[static_cast<std::size_t>(((k[0] + N_) * w + (k[1] + N_)) * w + (k[2] + N_))];
}

std::vector<Vec3c> GalerkinBox::to_dense(const SpectralField& f) const {
  std::vector<Vec3c> u(k_.size(), Vec3c{});
  for (const auto& [k, c] : f.modes()) {
    int i = index_of(k);
    if (i >= 0) u[static_cast<std::size_t>(i)] = c;
  }
  return u;
}

SpectralField GalerkinBox::to_field(const std::vector<Vec3c>& u, bool real) const {
  SpectralField::Map m;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i][0] != 0.0 || u[i][1] != 0.0 || u[i][2] != 0.0) m.emplace(k_[i], u[i]);
  SpectralField f(d_, std::move(m), false);
  f.set_real_flag(real);
  return f;
}

void GalerkinBox::nonlinear(const std::vector<Vec3c>& u, std::vector<Vec3c>& out, bool real) const {
  Impl& im = *impl_;
  const std::size_t n = im.n;
  const std::size_t nm = k_.size();
  static const int pair_i[6] = {0, 0, 0, 1, 1, 2}, pair_j[6] = {0, 1, 2, 1, 2, 2};
  int pidx[3][3];
  for (int p = 0; p < 6; ++p) pidx[pair_i[p]][pair_j[p]] = pidx[pair_j[p]][pair_i[p]] = 3 + p;
  auto coef = [&](int slot, std::size_t m) -> cd {
    if (real) {
      const cd* s = reinterpret_cast<const cd*>(im.sp[slot]);
      cd v = s[im.half_idx[m]];
      return im.half_conj[m] ? std::conj(v) : v;
    }
    return reinterpret_cast<const cd*>(im.cx[slot])[n + grid_idx_[m]];
  };
  if (real) {
    const std::size_t nh = im.nh;
    for (int j = 0; j < 3; ++j) {
      cd* s = reinterpret_cast<cd*>(im.sp[j]);
      std::fill(s, s + nh, cd(0.0));
      for (std::size_t m = 0; m < nm; ++m)
        if (!im.half_conj[m]) s[im.half_idx[m]] = u[m][static_cast<std::size_t>(j)];
      fftw_execute_dft_c2r(im.c2r, im.sp[j], im.re[j]);
    }
    for (int p = 0; p < 6; ++p) {
      const double* a = im.re[pair_i[p]];
      const double* b = im.re[pair_j[p]];
      double* c = im.re[3 + p];
      for (std::size_t x = 0; x < n; ++x) c[x] = a[x] * b[x];
      fftw_execute_dft_r2c(im.r2c, im.re[3 + p], im.sp[3 + p]);
    }
  } else {
    for (int j = 0; j < 3; ++j) {
      cd* g = reinterpret_cast<cd*>(im.cx[j]);
      std::fill(g, g + n, cd(0.0));
      for (std::size_t m = 0; m < nm; ++m) g[grid_idx_[m]] = u[m][static_cast<std::size_t>(j)];
      fftw_execute_dft(im.bwd, im.cx[j], im.cx[j] + n);
    }
    for (int p = 0; p < 6; ++p) {
      const cd* a = reinterpret_cast<const cd*>(im.cx[pair_i[p]]) + n;
      const cd* b = reinterpret_cast<const cd*>(im.cx[pair_j[p]]) + n;
      cd* c = reinterpret_cast<cd*>(im.cx[3 + p]);
      for (std::size_t x = 0; x < n; ++x) c[x] = a[x] * b[x];
      fftw_execute_dft(im.fwd, im.cx[3 + p], im.cx[3 + p] + n);
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  out.resize(nm);
  for (std::size_t m = 0; m < nm; ++m) {
    const Vec3d& kl = kl_[m];
    Vec3c w{};
    for (int i = 0; i < 3; ++i) {
      cd s = 0.0;
      for (int j = 0; j < 3; ++j) s += kl[static_cast<std::size_t>(j)] * coef(pidx[i][j], m);
      w[static_cast<std::size_t>(i)] = cd(0.0, 1.0) * s * inv;
    }
    cd dot = (w[0] * kl[0] + w[1] * kl[1] + w[2] * kl[2]) / lambda_[m];
    out[m] = {w[0] - dot * kl[0], w[1] - dot * kl[1], w[2] - dot * kl[2]};
  }
}

DenseForcing zero_forcing() {
  return [](double, std::vector<Vec3c>& out) { std::fill(out.begin(), out.end(), Vec3c{}); };
}

std::vector<double> log_grid(double a, double b, int n) {
  if (!(a > 0.0) || !(b > a) || n < 2) throw InvalidInput("log_grid requires 0 < a < b and n >= 2");
  std::vector<double> g(static_cast<std::size_t>(n));
  const double la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

namespace {

// Unforced modes decay like e^{-λt} into the subnormal range, where FFTs slow
// down by orders of magnitude. Flushes subnormals to zero for the scope.
class FlushSubnormals {
public:
#if defined(__SSE2__)
  FlushSubnormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushSubnormals() { _mm_setcsr(saved_); }

private:
  unsigned saved_;
#endif
};

double energy(const std::vector<Vec3c>& u) {
  double s = 0.0;
  for (const auto& c : u) s += std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
  return s;
}

}  // namespace

Trajectory integrate(const SpectralField& u0, const DenseForcing& f, const SolverConfig& cfg) {
  FlushSubnormals ftz;
  if (!(cfg.dt > 0.0)) throw InvalidInput("solver: dt must be positive");
  if (!(cfg.t1 >= cfg.t0)) throw InvalidInput("solver: horizon must satisfy t1 >= t0");
  for (double s : cfg.samples)
    if (s < cfg.t0 || s > cfg.t1) throw InvalidInput("solver: sample time outside the horizon");
  if (!std::is_sorted(cfg.samples.begin(), cfg.samples.end())) throw InvalidInput("solver: samples must be sorted");
  if (u0.divergence_defect() > 1e-10) throw InvalidInput("solver: initial state is not divergence-free");

  GalerkinBox box(u0.empty() ? DomainConfig{} : u0.domain(), cfg.band);
  for (const auto& [k, c] : u0.modes())
    if (box.index_of(k) < 0) throw InvalidInput("solver: initial state lies outside the Galerkin band");
  const std::size_t n = box.size();
  const auto& lam = box.eigenvalues();
  const bool real = u0.real_flag();

  std::vector<Vec3c> u = box.to_dense(u0), a(n), b(n), c(n), d(n), fa(n), tmp(n), nl(n);
  std::vector<double> Eh(n), Eh2(n);
  double cached_h = -1.0;
  auto set_h = [&](double h) {
    if (h == cached_h) return;
    for (std::size_t i = 0; i < n; ++i) {
      Eh[i] = std::exp(-lam[i] * h);
      Eh2[i] = std::exp(-lam[i] * h * 0.5);
    }
    cached_h = h;
  };
  // N(v, t) = −P_N B(v, v) + f(t); the forcing alone is left in `fout` when given.
  auto rhs = [&](const std::vector<Vec3c>& v, double t, std::vector<Vec3c>& out, std::vector<Vec3c>* fout) {
    f(t, out);
    if (fout) *fout = out;
    if (!cfg.nonlinear) return;
    box.nonlinear(v, nl, real);
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) out[i][static_cast<std::size_t>(j)] -= nl[i][static_cast<std::size_t>(j)];
  };
  auto rate = [&](const std::vector<Vec3c>& v, const std::vector<Vec3c>& fv, double* diss, double* pow) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) {
        s1 += lam[i] * std::norm(v[i][static_cast<std::size_t>(j)]);
        s2 += (fv[i][static_cast<std::size_t>(j)] * std::conj(v[i][static_cast<std::size_t>(j)])).real();
      }
    *diss = -2.0 * s1;
    *pow = 2.0 * s2;
    return *diss + *pow;
  };

  Trajectory tr;
  tr.band = cfg.band;
  tr.domain = box.domain();
  std::size_t next_sample = 0;
  auto take_samples = [&](double t) {
    while (next_sample < cfg.samples.size() && cfg.samples[next_sample] <= t * (1.0 + 1e-14) &&
           std::abs(cfg.samples[next_sample] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
      tr.t.push_back(cfg.samples[next_sample]);
      tr.u.push_back(box.to_field(u, real));
      if (real && tr.u.back().reality_defect() > 1e-8)
        throw InvalidInput("solver: forcing breaks the conjugate symmetry of a real state");
      ++next_sample;
    }
  };

  double t = cfg.t0;
  const double E0 = energy(u);
  // Energy-identity bookkeeping with nonuniform Simpson panels.
  std::vector<Vec3c> f0(n);
  f(t, f0);
  double diss, pw;
  double r_prev2 = 0.0, r_prev = rate(u, f0, &diss, &pw), t_prev2 = 0.0, t_prev = t;
  int pending = 0;
  double integral = 0.0, scale = 0.0;
  auto push_rate = [&](double tt, double r, double abs_part) {
    scale += abs_part;
    if (pending == 0) {
      r_prev2 = r_prev;
      t_prev2 = t_prev;
      r_prev = r;
      t_prev = tt;
      pending = 1;
      return;
    }
    double h0 = t_prev - t_prev2, h1 = tt - t_prev;
    integral += (h0 + h1) / 6.0 *
                ((2.0 - h1 / h0) * r_prev2 + (h0 + h1) * (h0 + h1) / (h0 * h1) * r_prev + (2.0 - h0 / h1) * r);
    r_prev2 = r_prev;
    t_prev2 = t_prev;
    r_prev = r;
    t_prev = tt;
    pending = 0;
  };
  double abs_scale_dt = 0.0;

  take_samples(t);
  while (t < cfg.t1 * (1.0 - 1e-15) && cfg.t1 - t > 1e-13 * std::max(1.0, std::abs(cfg.t1))) {
    double h = cfg.dt;
    double target = cfg.t1;
    if (next_sample < cfg.samples.size()) target = std::min(target, cfg.samples[next_sample]);
    if (t + h > target - 1e-12 * h) h = target - t;
    set_h(h);
    if (cfg.scheme == Scheme::IFRK4) {
      rhs(u, t, a, &fa);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) tmp[i][j] = Eh2[i] * (u[i][j] + 0.5 * h * a[i][j]);
      rhs(tmp, t + 0.5 * h, b, nullptr);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) tmp[i][j] = Eh2[i] * u[i][j] + 0.5 * h * b[i][j];
      rhs(tmp, t + 0.5 * h, c, nullptr);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) tmp[i][j] = Eh[i] * u[i][j] + h * Eh2[i] * c[i][j];
      rhs(tmp, t + h, d, nullptr);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j)
          u[i][j] = Eh[i] * u[i][j] + h / 6.0 * (Eh[i] * a[i][j] + 2.0 * Eh2[i] * (b[i][j] + c[i][j]) + d[i][j]);
    } else {
      rhs(u, t, a, &fa);
      for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < 3; ++j) u[i][j] = (u[i][j] + h * a[i][j]) / (1.0 + h * lam[i]);
    }
    t += h;
    if (std::abs(t - target) <= 1e-12 * std::max(1.0, std::abs(target))) t = target;
    ++tr.steps;
    double e = energy(u);
    if (!std::isfinite(e)) throw DivergenceError(t - h, "solver state became non-finite");
    f(t, f0);
    double r = rate(u, f0, &diss, &pw);
    abs_scale_dt = std::abs(diss) + std::abs(pw);
    push_rate(t, r, abs_scale_dt * h);
    take_samples(t);
  }
  if (pending == 1) integral += 0.5 * (t_prev - t_prev2) * (r_prev2 + r_prev);
  const double E1 = energy(u);
  tr.energy_drift = std::abs(E1 - E0 - integral) / std::max(E0 + scale, 1e-300);
  return tr;
}

}  // namespace gevrey
