#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tpex::detail {

enum class FftSign { negative, positive };

/// Unnormalized DFT: out[k] = sum_n in[n] exp(sign * 2 pi i k n / N).
/// Plans are built with FFTW_ESTIMATE so results are reproducible run to
/// run; plan creation is serialized internally.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> in,
                                      FftSign sign);

std::vector<std::complex<double>> dft(std::span<const double> in, FftSign sign);

}  // namespace tpex::detail
