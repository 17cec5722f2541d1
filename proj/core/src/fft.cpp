#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "tpex/errors.hpp"

namespace tpex::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in,
                                      FftSign sign) {
  const auto n = static_cast<int>(in.size());
  if (n == 0) return {};
  auto* buffer = fftw_alloc_complex(in.size());
  if (buffer == nullptr) throw Error("fftw allocation failed");

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buffer, buffer,
                            sign == FftSign::negative ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  auto* data = reinterpret_cast<std::complex<double>*>(buffer);
  std::copy(in.begin(), in.end(), data);
  fftw_execute(plan);
  std::vector<std::complex<double>> out(data, data + in.size());
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buffer);
  return out;
}

std::vector<std::complex<double>> dft(std::span<const double> in, FftSign sign) {
  std::vector<std::complex<double>> complex_in(in.begin(), in.end());
  return dft(complex_in, sign);
}

}  // namespace tpex::detail
