#include "diraclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace diraclab {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

// Plans live for the process lifetime; FFTW_ESTIMATE keeps them deterministic.
fftw_plan cached_plan(int n, int howmany, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  const auto key = std::make_tuple(n, howmany, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::size_t total = static_cast<std::size_t>(n) * n * n * howmany;
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
  const int dims[3] = {n, n, n};
  fftw_plan plan = fftw_plan_many_dft(3, dims, howmany, buf, nullptr, howmany, 1, buf, nullptr, howmany, 1, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (!plan) throw std::runtime_error("FFTW could not create a plan");
  cache.emplace(key, plan);
  return plan;
}

}  // namespace

Fft3::Fft3(int n, int howmany)
    : n_(n),
      howmany_(howmany),
      forward_plan_(cached_plan(n, howmany, FFTW_FORWARD)),
      backward_plan_(cached_plan(n, howmany, FFTW_BACKWARD)) {}

void Fft3::forward(std::complex<double>* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), d, d);
}

void Fft3::backward(std::complex<double>* data) const {
  auto* d = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), d, d);
}

}  // namespace diraclab
