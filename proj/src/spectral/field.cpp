#include <algorithm>
#include <cmath>

#include "gevrey/error.hpp"
#include "gevrey/spectral.hpp"

namespace gevrey {

namespace {

double norm2(const Vec3c& c) { return std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]); }

bool is_zero(const Vec3c& c) { return c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0; }

void check_domains(const SpectralField& a, const SpectralField& b) {
  if (!a.empty() && !b.empty() && !(a.domain() == b.domain()))
    throw InvalidInput("fields live on different domains");
}

Vec3c project_mode(const Vec3c& c, const Vec3d& kl) {
  double kk = kl[0] * kl[0] + kl[1] * kl[1] + kl[2] * kl[2];
  cd dot = c[0] * kl[0] + c[1] * kl[1] + c[2] * kl[2];
  cd s = dot / kk;
  return {c[0] - s * kl[0], c[1] - s * kl[1], c[2] - s * kl[2]};
}

}  // namespace

SpectralField::SpectralField(const DomainConfig& d, Map coeffs, bool real_flag)
    : domain_(d), coeffs_(std::move(coeffs)), real_(real_flag) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (it->first == WaveVector{0, 0, 0}) throw InvalidInput("field has a k = 0 mode (fields are zero-mean)");
    it = is_zero(it->second) ? coeffs_.erase(it) : std::next(it);
  }
}

SpectralField SpectralField::from_modes(const DomainConfig& d, const Map& coeffs, bool real_flag) {
  SpectralField f(d, coeffs, false);
  if (f.divergence_defect() > 1e-12) throw InvalidInput("field is not divergence-free");
  if (real_flag) {
    if (f.reality_defect() > 1e-12) throw InvalidInput("field flagged real lacks conjugate symmetry");
    f.real_ = true;
  }
  return f;
}

SpectralField SpectralField::real_mode(const DomainConfig& d, const WaveVector& k, const Vec3c& c) {
  Vec3c p = project_mode(c, d.k_L(k));
  Map m;
  m[k] = p;
  Vec3c q{std::conj(p[0]), std::conj(p[1]), std::conj(p[2])};
  if (m.count(neg(k))) throw InvalidInput("real_mode: k must be nonzero");
  m[neg(k)] = q;
  return SpectralField(d, std::move(m), true);
}

Vec3c SpectralField::at(const WaveVector& k) const {
  auto it = coeffs_.find(k);
  return it == coeffs_.end() ? Vec3c{} : it->second;
}

int SpectralField::extent() const {
  int e = 0;
  for (const auto& [k, c] : coeffs_) e = std::max(e, box_extent(k));
  return e;
}

double SpectralField::reality_defect() const {
  double mx = 0.0, dev = 0.0;
  for (const auto& [k, c] : coeffs_) {
    mx = std::max(mx, std::sqrt(norm2(c)));
    Vec3c o = at(neg(k));
    Vec3c diff{o[0] - std::conj(c[0]), o[1] - std::conj(c[1]), o[2] - std::conj(c[2])};
    dev = std::max(dev, std::sqrt(norm2(diff)));
  }
  return mx == 0.0 ? 0.0 : dev / mx;
}

double SpectralField::divergence_defect() const {
  double worst = 0.0;
  for (const auto& [k, c] : coeffs_) {
    Vec3d kl = domain_.k_L(k);
    cd dot = c[0] * kl[0] + c[1] * kl[1] + c[2] * kl[2];
    double scale = std::sqrt(kl[0] * kl[0] + kl[1] * kl[1] + kl[2] * kl[2]) * std::sqrt(norm2(c));
    if (scale > 0.0) worst = std::max(worst, std::abs(dot) / scale);
  }
  return worst;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_domains(*this, o);
  bool was_real = real_ || coeffs_.empty();
  if (coeffs_.empty()) domain_ = o.domain_;
  for (const auto& [k, c] : o.coeffs_) {
    auto [it, inserted] = coeffs_.try_emplace(k, c);
    if (!inserted) {
      for (int i = 0; i < 3; ++i) it->second[i] += c[i];
      if (is_zero(it->second)) coeffs_.erase(it);
    }
  }
  real_ = was_real && (o.real_ || o.coeffs_.empty());
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) { return *this += -o; }

SpectralField& SpectralField::operator*=(cd s) {
  if (s == 0.0) {
    coeffs_.clear();
    real_ = true;
    return *this;
  }
  for (auto& [k, c] : coeffs_)
    for (auto& x : c) x *= s;
  real_ = real_ && s.imag() == 0.0;
  return *this;
}

SpectralField SpectralField::conj() const {
  Map m;
  for (const auto& [k, c] : coeffs_) m[neg(k)] = {std::conj(c[0]), std::conj(c[1]), std::conj(c[2])};
  SpectralField f(domain_, std::move(m), real_);
  return f;
}

SpectralField SpectralField::real_part() const {
  SpectralField f = (*this + conj()) * cd(0.5);
  f.real_ = true;
  return f;
}

SpectralField SpectralField::imag_part() const {
  SpectralField f = (*this - conj()) * cd(0.0, -0.5);
  f.real_ = true;
  return f;
}

SpectralField SpectralField::scaled(const std::function<cd(const WaveVector&, double)>& fn) const {
  Map m;
  for (const auto& [k, c] : coeffs_) {
    cd s = fn(k, stokes_eigenvalue(k, domain_));
    if (s != 0.0) m[k] = {c[0] * s, c[1] * s, c[2] * s};
  }
  return SpectralField(domain_, std::move(m), false);
}

SpectralField SpectralField::pruned(double tol) const {
  Map m;
  for (const auto& [k, c] : coeffs_)
    if (std::sqrt(norm2(c)) > tol) m.emplace(k, c);
  return SpectralField(domain_, std::move(m), real_);
}

cd inner(const SpectralField& u, const SpectralField& v) {
  check_domains(u, v);
  cd s = 0.0;
  for (const auto& [k, a] : u.modes()) {
    auto it = v.modes().find(k);
    if (it == v.modes().end()) continue;
    for (int i = 0; i < 3; ++i) s += a[i] * std::conj(it->second[i]);
  }
  return s;
}

double h_norm(const SpectralField& u) {
  double s = 0.0;
  for (const auto& [k, c] : u.modes()) s += norm2(c);
  return std::sqrt(s);
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  const SpectralField d = a - b;
  for (const auto& [k, c] : d.modes()) worst = std::max(worst, std::sqrt(norm2(c)));
  return worst;
}

SpectralField leray_project(const SpectralField& f) {
  SpectralField::Map m;
  for (const auto& [k, c] : f.modes()) {
    Vec3c p = project_mode(c, f.domain().k_L(k));
    if (!is_zero(p)) m.emplace(k, p);
  }
  return SpectralField(f.domain(), std::move(m), f.real_flag());
}

double gevrey_norm(const SpectralField& f, const GevreyIndex& g) {
  // Accumulate in log-scaled form so that large weights on tiny modes do not overflow early.
  double s = 0.0;
  for (const auto& [k, c] : f.modes()) {
    double lw = g.log_weight(stokes_eigenvalue(k, f.domain()));
    s += std::exp(2.0 * lw) * norm2(c);
  }
  return std::sqrt(s);
}

SpectralField apply_resolvent(const SpectralField& f, double omega) {
  SpectralField::Map m;
  for (const auto& [k, c] : f.modes()) {
    cd d(stokes_eigenvalue(k, f.domain()), omega);
    m.emplace(k, Vec3c{c[0] / d, c[1] / d, c[2] / d});
  }
  return SpectralField(f.domain(), std::move(m), f.real_flag() && omega == 0.0);
}

SpectralField apply_A(const SpectralField& f) {
  SpectralField::Map m;
  for (const auto& [k, c] : f.modes()) {
    double l = stokes_eigenvalue(k, f.domain());
    m.emplace(k, Vec3c{c[0] * l, c[1] * l, c[2] * l});
  }
  return SpectralField(f.domain(), std::move(m), f.real_flag());
}

SpectralField project_P_Lambda(const SpectralField& f, double Lambda) {
  SpectralField::Map m;
  for (const auto& [k, c] : f.modes())
    if (stokes_eigenvalue(k, f.domain()) <= Lambda) m.emplace(k, c);
  return SpectralField(f.domain(), std::move(m), f.real_flag());
}

SpectralField project_box(const SpectralField& f, int n) {
  SpectralField::Map m;
  for (const auto& [k, c] : f.modes())
    if (box_extent(k) <= n) m.emplace(k, c);
  return SpectralField(f.domain(), std::move(m), f.real_flag());
}

}  // namespace gevrey
