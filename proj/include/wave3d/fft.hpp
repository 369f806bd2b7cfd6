#ifndef WAVE3D_FFT_HPP
#define WAVE3D_FFT_HPP

#include <complex>
#include <vector>

namespace wave3d {

// Thin wrapper over FFTW with per-instance plans. Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so results are deterministic and buffers can
// live in ordinary std::vectors. Plan creation is serialized internally;
// execution on distinct instances is thread-safe.
class Fft3D {
public:
  explicit Fft3D(int N);
  ~Fft3D();

  Fft3D(const Fft3D&) = delete;
  Fft3D& operator=(const Fft3D&) = delete;

  int N() const { return n_; }

  // In-place unnormalized transforms: forward uses exp(-i), backward exp(+i).
  // backward(forward(x)) == N^3 * x.
  void forward(std::vector<std::complex<double>>& data) const;
  void backward(std::vector<std::complex<double>>& data) const;

private:
  int n_;
  void* plan_fwd_;
  void* plan_bwd_;
};

}  // namespace wave3d

#endif
