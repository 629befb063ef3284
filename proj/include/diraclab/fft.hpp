#pragma once

#include <complex>
#include <vector>

namespace diraclab {

/// In-place 3D DFT of `howmany` interleaved components on an n^3 cube
/// (component stride `howmany`, x-fastest). Plans are cached per shape and
/// created under a lock; execution is re-entrant. Backward is unnormalized.
class Fft3 {
 public:
  Fft3(int n, int howmany);

  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

  int size() const { return n_; }

 private:
  int n_;
  int howmany_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Signed integer wavenumber index for DFT bin i of an n-point transform: i or i - n.
inline int fft_mode(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace diraclab
