#include "wave3d/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace wave3d {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft3D::Fft3D(int N) : n_(N) {
  if (N < 2) throw std::invalid_argument("Fft3D: N must be >= 2");
  std::lock_guard<std::mutex> lock(planner_mutex());
  // A scratch buffer is enough for planning; execution binds caller arrays.
  fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(N) * N * N);
  plan_fwd_ = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_FORWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  plan_bwd_ = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_BACKWARD,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!plan_fwd_ || !plan_bwd_) throw std::runtime_error("Fft3D: planning failed");
}

Fft3D::~Fft3D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Fft3D::forward(std::vector<std::complex<double>>& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), p, p);
}

void Fft3D::backward(std::vector<std::complex<double>>& data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(plan_bwd_), p, p);
}

}  // namespace wave3d
