#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "gevrey/error.hpp"
#include "gevrey/spectral.hpp"
#include "fft_plan.hpp"

namespace gevrey {

namespace detail {

FftPlans::~FftPlans() {
  if (fwd) fftw_destroy_plan(fwd);
  if (bwd) fftw_destroy_plan(bwd);
}

const FftPlans& fft_plans(int M) {
  static std::mutex mu;
  static std::unordered_map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[M];
  if (!slot) {
    auto pp = std::make_unique<FftPlans>();
    pp->M = M;
    std::size_t n = static_cast<std::size_t>(M) * M * M;
    FftBuffer a(n);
    pp->fwd = fftw_plan_dft_3d(M, M, M, a.raw(), a.raw(), FFTW_FORWARD, FFTW_ESTIMATE);
    pp->bwd = fftw_plan_dft_3d(M, M, M, a.raw(), a.raw(), FFTW_BACKWARD, FFTW_ESTIMATE);
    slot = std::move(pp);
  }
  return *slot;
}

}  // namespace detail

namespace {

using detail::FftBuffer;

constexpr double kEps = std::numeric_limits<double>::epsilon();

double vnorm(const Vec3c& c) { return std::sqrt(std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2])); }
double vnorm(const Vec3d& c) { return std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]); }

Vec3c project_mode(const Vec3c& c, const Vec3d& kl) {
  double kk = kl[0] * kl[0] + kl[1] * kl[1] + kl[2] * kl[2];
  cd s = (c[0] * kl[0] + c[1] * kl[1] + c[2] * kl[2]) / kk;
  return {c[0] - s * kl[0], c[1] - s * kl[1], c[2] - s * kl[2]};
}

bool same_domain(const SpectralField& u, const SpectralField& v) {
  return u.empty() || v.empty() || u.domain() == v.domain();
}

// Splits raw convolution output into kept modes and the band beyond the cap,
// applies the rounding floor and the cap policy.
SpectralField finish(const DomainConfig& d, SpectralField::Map raw, const std::map<WaveVector, double>* bounds,
                     double global_floor, bool real, const BilinearOptions& opt, BilinearReport* report,
                     bool used_fft) {
  SpectralField::Map kept, dropped;
  int required = 0;
  for (auto& [k, c] : raw) {
    Vec3c p = project_mode(c, d.k_L(k));
    double floor = global_floor;
    if (bounds) floor = std::max(floor, 32.0 * kEps * bounds->at(k));
    if (vnorm(p) <= floor) continue;
    int e = box_extent(k);
    required = std::max(required, e);
    if (opt.cap >= 0 && e > opt.cap)
      dropped.emplace(k, p);
    else
      kept.emplace(k, p);
  }
  double dnorm = 0.0;
  if (!dropped.empty()) dnorm = gevrey_norm(SpectralField(d, dropped, false), opt.report_index);
  if (report) {
    report->required_extent = required;
    report->dropped_norm = dnorm;
    report->used_fft = used_fft;
  }
  if (!dropped.empty() && opt.policy == CapPolicy::Error)
    throw SupportCapOverflow(opt.cap, required, dnorm, opt.context);
  SpectralField out(d, std::move(kept), false);
  // Symmetric pruning keeps conjugate pairs together, so the flag survives.
  out.set_real_flag(real);
  return out;
}

inline std::size_t grid_index(const WaveVector& k, int M) {
  auto w = [M](int x) { return static_cast<std::size_t>(((x % M) + M) % M); };
  return (w(k[0]) * M + w(k[1])) * M + w(k[2]);
}

}  // namespace

int fft_size_at_least(int m) {
  for (int n = std::max(m, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return n;
  }
}

SpectralField bilinear_B_direct(const SpectralField& u, const SpectralField& v, const BilinearOptions& opt,
                                BilinearReport* report) {
  if (!same_domain(u, v)) throw InvalidInput("bilinear_B: fields live on different domains");
  const DomainConfig& d = u.empty() ? v.domain() : u.domain();
  SpectralField::Map raw;
  std::map<WaveVector, double> bounds;
  std::vector<std::pair<WaveVector, Vec3d>> vk;
  vk.reserve(v.size());
  for (const auto& [k2, b] : v.modes()) vk.emplace_back(k2, d.k_L(k2));
  for (const auto& [k1, a] : u.modes()) {
    double na = vnorm(a);
    for (const auto& [k2, kl2] : vk) {
      WaveVector k{k1[0] + k2[0], k1[1] + k2[1], k1[2] + k2[2]};
      if (k == WaveVector{0, 0, 0}) continue;
      const Vec3c& b = v.modes().at(k2);
      cd s = cd(0.0, 1.0) * (a[0] * kl2[0] + a[1] * kl2[1] + a[2] * kl2[2]);
      Vec3c& acc = raw[k];
      for (int i = 0; i < 3; ++i) acc[i] += s * b[i];
      bounds[k] += na * vnorm(kl2) * vnorm(b);
    }
  }
  return finish(d, std::move(raw), &bounds, 0.0, u.real_flag() && v.real_flag(), opt, report, false);
}

SpectralField bilinear_B_fft(const SpectralField& u, const SpectralField& v, const BilinearOptions& opt,
                             BilinearReport* report) {
  if (!same_domain(u, v)) throw InvalidInput("bilinear_B: fields live on different domains");
  const DomainConfig& d = u.empty() ? v.domain() : u.domain();
  if (u.empty() || v.empty()) return finish(d, {}, nullptr, 0.0, true, opt, report, true);
  const int nu = u.extent(), nv = v.extent();
  const int nout = nu + nv;
  const int M = fft_size_at_least(nu + nv + nout + 1);
  const std::size_t n = static_cast<std::size_t>(M) * M * M;
  const detail::FftPlans& pp = detail::fft_plans(M);
  const bool self = (&u == &v) || u == v;

  auto to_grid = [&](const SpectralField& f, int comp, const Vec3d* deriv_dir, int deriv_axis, FftBuffer& buf) {
    std::fill(buf.data(), buf.data() + n, cd(0.0));
    for (const auto& [k, c] : f.modes()) {
      cd val = c[comp];
      if (deriv_dir) val *= cd(0.0, d.k_L(k)[deriv_axis]);
      buf.data()[grid_index(k, M)] = val;
    }
    fftw_execute_dft(pp.bwd, buf.raw(), buf.raw());
  };

  std::vector<std::unique_ptr<FftBuffer>> ug;
  for (int j = 0; j < 3; ++j) {
    ug.push_back(std::make_unique<FftBuffer>(n));
    to_grid(u, j, nullptr, 0, *ug[j]);
  }
  // Sup-norm bound of (u·∇)v, used to set the rounding floor.
  double su = 0.0, sgv = 0.0;
  for (const auto& [k, c] : u.modes()) su += vnorm(c);
  for (const auto& [k, c] : v.modes()) sgv += vnorm(c) * vnorm(d.k_L(k));
  const double floor = 64.0 * kEps * std::log2(static_cast<double>(n)) * su * sgv;

  SpectralField::Map raw;
  const double inv = 1.0 / static_cast<double>(n);
  auto collect = [&](const std::array<FftBuffer*, 3>& comp) {
    for (int a = -nout; a <= nout; ++a)
      for (int b = -nout; b <= nout; ++b)
        for (int c = -nout; c <= nout; ++c) {
          WaveVector k{a, b, c};
          if (a == 0 && b == 0 && c == 0) continue;
          std::size_t idx = grid_index(k, M);
          raw[k] = {comp[0]->data()[idx] * inv, comp[1]->data()[idx] * inv, comp[2]->data()[idx] * inv};
        }
  };

  if (self) {
    // Divergence form: ((u·∇)u)_i = Σ_j ∂_j(u_j u_i) for solenoidal u.
    FftBuffer prod(n);
    std::array<std::unique_ptr<FftBuffer>, 3> out;
    for (auto& o : out) {
      o = std::make_unique<FftBuffer>(n);
      std::fill(o->data(), o->data() + n, cd(0.0));
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        for (std::size_t x = 0; x < n; ++x) prod.data()[x] = ug[i]->data()[x] * ug[j]->data()[x];
        fftw_execute_dft(pp.fwd, prod.raw(), prod.raw());
        for (int a = -nout; a <= nout; ++a)
          for (int b = -nout; b <= nout; ++b)
            for (int c = -nout; c <= nout; ++c) {
              WaveVector k{a, b, c};
              std::size_t idx = grid_index(k, M);
              Vec3d kl = d.k_L(k);
              cd val = prod.data()[idx];
              out[i]->data()[idx] += cd(0.0, kl[j]) * val;
              if (j != i) out[j]->data()[idx] += cd(0.0, kl[i]) * val;
            }
      }
    collect({out[0].get(), out[1].get(), out[2].get()});
  } else {
    // Gradient form: ((u·∇)v)_i = Σ_j u_j ∂_j v_i.
    FftBuffer grad(n);
    std::array<std::unique_ptr<FftBuffer>, 3> out;
    Vec3d dummy{};
    for (int i = 0; i < 3; ++i) {
      out[i] = std::make_unique<FftBuffer>(n);
      std::fill(out[i]->data(), out[i]->data() + n, cd(0.0));
      for (int j = 0; j < 3; ++j) {
        to_grid(v, i, &dummy, j, grad);
        for (std::size_t x = 0; x < n; ++x) out[i]->data()[x] += ug[j]->data()[x] * grad.data()[x];
      }
      fftw_execute_dft(pp.fwd, out[i]->raw(), out[i]->raw());
    }
    collect({out[0].get(), out[1].get(), out[2].get()});
  }
  return finish(d, std::move(raw), nullptr, floor, u.real_flag() && v.real_flag(), opt, report, true);
}

SpectralField bilinear_B(const SpectralField& u, const SpectralField& v, const BilinearOptions& opt,
                         BilinearReport* report) {
  if (std::max(u.size(), v.size()) >= opt.dense_threshold) return bilinear_B_fft(u, v, opt, report);
  return bilinear_B_direct(u, v, opt, report);
}

}  // namespace gevrey
