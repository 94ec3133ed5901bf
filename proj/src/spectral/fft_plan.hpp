#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <new>

namespace gevrey::detail {

struct FftPlans {
  int M = 0;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~FftPlans();
};

/// Cached M×M×M complex plans; creation is serialized, execution is re-entrant
/// through fftw_execute_dft on aligned buffers.
const FftPlans& fft_plans(int M);

class FftBuffer {
public:
  explicit FftBuffer(std::size_t n) : n_(n), p_(fftw_alloc_complex(n)) {
    if (!p_) throw std::bad_alloc();
  }
  ~FftBuffer() { fftw_free(p_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  fftw_complex* raw() { return p_; }
  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(p_); }
  std::size_t size() const { return n_; }

private:
  std::size_t n_;
  fftw_complex* p_;
};

}  // namespace gevrey::detail
