#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "gevrey/spectral.hpp"

namespace gevrey {

/// Dense Galerkin box {k : 0 < max|k_i| ≤ N} with FFT evaluation of P_N B(u,u).
class GalerkinBox {
public:
  GalerkinBox(const DomainConfig& d, int N);

  int N() const { return N_; }
  int grid() const { return M_; }
  std::size_t size() const { return k_.size(); }
  const DomainConfig& domain() const { return d_; }
  const std::vector<WaveVector>& wavevectors() const { return k_; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  /// −1 when k lies outside the box.
  int index_of(const WaveVector& k) const;

  std::vector<Vec3c> to_dense(const SpectralField& f) const;
  SpectralField to_field(const std::vector<Vec3c>& u, bool real) const;

  /// out = P_N B(u, u). `real` selects the real-to-complex transforms and
  /// requires a conjugate-symmetric u. Uses the box's scratch buffers, so one
  /// box must not be shared between threads.
  void nonlinear(const std::vector<Vec3c>& u, std::vector<Vec3c>& out, bool real) const;

private:
  DomainConfig d_;
  int N_, M_;
  std::vector<WaveVector> k_;
  std::vector<Vec3d> kl_;
  std::vector<double> lambda_;
  std::vector<std::size_t> grid_idx_;
  std::vector<int> lookup_;
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

enum class Scheme { IFRK4, IMEXEuler };

struct SolverConfig {
  int band = 2;  ///< Galerkin box half-width
  double dt = 1e-3;
  double t0 = 0.0;
  double t1 = 1.0;
  Scheme scheme = Scheme::IFRK4;
  bool nonlinear = true;
  std::vector<double> samples;  ///< sorted sample times within [t0, t1]
};

/// Forcing callback writing P_N f(t) into a dense vector of the box.
using DenseForcing = std::function<void(double t, std::vector<Vec3c>& out)>;

struct Trajectory {
  std::vector<double> t;
  std::vector<SpectralField> u;
  double energy_drift = 0.0;  ///< relative violation of the energy identity
  std::size_t steps = 0;
  int band = 0;
  DomainConfig domain;
};

/// du/dt = −Au − P_N B(u,u) + P_N f(t) with the Stokes part integrated exactly.
Trajectory integrate(const SpectralField& u0, const DenseForcing& f, const SolverConfig& cfg);

/// Forcing from a fixed field (constant in time) or nothing.
DenseForcing zero_forcing();

std::vector<double> log_grid(double a, double b, int n);

}  // namespace gevrey
