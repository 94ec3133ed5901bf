#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace gevrey {

using cd = std::complex<double>;
using Vec3c = std::array<cd, 3>;
using Vec3d = std::array<double, 3>;
using WaveVector = std::array<int, 3>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Periodic box [0,ℓ₁]×[0,ℓ₂]×[0,ℓ₃] with max ℓ = 2π and a truncation bound N.
struct DomainConfig {
  Vec3d lengths{kTwoPi, kTwoPi, kTwoPi};
  int N = 8;

  /// Validates lengths and N. With `rescale` the lengths are scaled so that max ℓ = 2π.
  static DomainConfig make(const Vec3d& lengths, int N, bool rescale = false);

  Vec3d k_L(const WaveVector& k) const;
  bool operator==(const DomainConfig& o) const { return lengths == o.lengths; }
};

/// λ = |k_L|² for k ≠ 0.
double stokes_eigenvalue(const WaveVector& k, const DomainConfig& d);

inline int box_extent(const WaveVector& k) {
  int a = k[0] < 0 ? -k[0] : k[0];
  int b = k[1] < 0 ? -k[1] : k[1];
  int c = k[2] < 0 ? -k[2] : k[2];
  return a > b ? (a > c ? a : c) : (b > c ? b : c);
}

inline WaveVector neg(const WaveVector& k) { return {-k[0], -k[1], -k[2]}; }

struct GevreyIndex {
  double alpha = 0.0;
  double sigma = 0.0;
  GevreyIndex() = default;
  GevreyIndex(double a, double s);
  /// ln(λ^α e^{σ√λ}); throws OverflowError above 700.
  double log_weight(double lambda) const;
  double weight(double lambda) const;
};

/// Truncated zero-mean Fourier coefficient map k ↦ û_k ∈ ℂ³.
///
/// A field is a value: all operations return new fields. The reality flag
/// records û_{−k} = conj(û_k); it is set by constructors that guarantee it
/// and propagated by operations that preserve it.
class SpectralField {
public:
  using Map = std::map<WaveVector, Vec3c>;

  SpectralField() = default;
  explicit SpectralField(const DomainConfig& d) : domain_(d) {}
  SpectralField(const DomainConfig& d, Map coeffs, bool real_flag = false);

  /// Builds a field from modes, enforcing zero mean and solenoidality
  /// (relative 1e-12) and, when `real_flag`, conjugate symmetry.
  static SpectralField from_modes(const DomainConfig& d, const Map& coeffs, bool real_flag);

  /// Real field c e^{ik·x} + conj(c) e^{−ik·x}, Leray-projected.
  static SpectralField real_mode(const DomainConfig& d, const WaveVector& k, const Vec3c& c);

  const DomainConfig& domain() const { return domain_; }
  const Map& modes() const { return coeffs_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  bool real_flag() const { return real_; }
  void set_real_flag(bool r) { real_ = r; }

  Vec3c at(const WaveVector& k) const;
  int extent() const;

  /// Measured conjugate-symmetry defect max|û_{−k} − conj û_k| / max|û|.
  double reality_defect() const;
  /// Measured max|k_L·û_k| / (|k_L||û_k|).
  double divergence_defect() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cd s);
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(SpectralField a, cd s) { return a *= s; }
  friend SpectralField operator*(cd s, SpectralField a) { return a *= s; }
  SpectralField operator-() const { return *this * cd(-1.0); }

  /// Physical conjugation: (conj w)_k = conj(w_{−k}).
  SpectralField conj() const;
  /// Physical real and imaginary parts (w ± conj w)/2, (w − conj w)/(2i).
  SpectralField real_part() const;
  SpectralField imag_part() const;

  /// Applies f(k, λ) multiplicatively to every mode.
  SpectralField scaled(const std::function<cd(const WaveVector&, double)>& f) const;
  /// Removes modes with |û| ≤ tol.
  SpectralField pruned(double tol) const;

  friend bool operator==(const SpectralField& a, const SpectralField& b) {
    return a.coeffs_ == b.coeffs_ && a.domain_ == b.domain_;
  }

private:
  DomainConfig domain_;
  Map coeffs_;
  bool real_ = false;
  friend class FieldBuilder;
};

/// H inner product Σ û_k · conj(v̂_k).
cd inner(const SpectralField& u, const SpectralField& v);
double h_norm(const SpectralField& u);
double max_abs_diff(const SpectralField& a, const SpectralField& b);

SpectralField leray_project(const SpectralField& f);
double gevrey_norm(const SpectralField& f, const GevreyIndex& g);
/// Divides each coefficient by (λ + iω).
SpectralField apply_resolvent(const SpectralField& f, double omega);
/// Multiplies each coefficient by λ.
SpectralField apply_A(const SpectralField& f);
/// Keeps modes with λ ≤ Λ; Λ = +∞ is the identity.
SpectralField project_P_Lambda(const SpectralField& f, double Lambda);
/// Keeps modes with max|k_i| ≤ n.
SpectralField project_box(const SpectralField& f, int n);

enum class CapPolicy { Error, Truncate };

struct BilinearOptions {
  /// Output modes with max|k_i| > cap are dropped; cap < 0 disables the limit.
  int cap = -1;
  CapPolicy policy = CapPolicy::Error;
  /// Direct summation when both inputs have fewer active modes than this.
  std::size_t dense_threshold = 512;
  /// Index used to measure the norm of dropped energy.
  GevreyIndex report_index{};
  std::string context;
};

struct BilinearReport {
  int required_extent = 0;
  double dropped_norm = 0.0;
  bool used_fft = false;
};

/// B(u,v) = P[(u·∇)v] by exact convolution over the stored supports.
SpectralField bilinear_B(const SpectralField& u, const SpectralField& v,
                         const BilinearOptions& opt = {}, BilinearReport* report = nullptr);

/// Reference summation path, exposed for oracle comparisons.
SpectralField bilinear_B_direct(const SpectralField& u, const SpectralField& v,
                                const BilinearOptions& opt = {}, BilinearReport* report = nullptr);
SpectralField bilinear_B_fft(const SpectralField& u, const SpectralField& v,
                             const BilinearOptions& opt = {}, BilinearReport* report = nullptr);

/// Smallest n ≥ m whose prime factors are 2, 3, 5.
int fft_size_at_least(int m);

}  // namespace gevrey
