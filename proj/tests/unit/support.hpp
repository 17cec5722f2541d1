#pragma once

// Shared helpers for the unit tests: a seeded generator for property tests
// and reference implementations that avoid the library's own code paths.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "tpex/interferometer.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex::testing {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  /// Non-negative random weights on a random sub-band of a grid, normalized.
  SumFrequencySpectrum band_limited(double lo_thz, double hi_thz, double step_thz,
                                    std::size_t max_bins) {
    const double start = uniform(lo_thz, hi_thz - step_thz * static_cast<double>(max_bins));
    const auto grid = make_frequency_grid(start, step_thz, index(2, max_bins));
    std::vector<double> w(grid.count());
    for (auto& x : w) x = uniform(0.0, 1.0);
    w[index(0, w.size() - 1)] += 0.5;
    return normalized(SumFrequencySpectrum{grid, w});
  }

 private:
  std::mt19937_64 rng_;
};

/// Direct cosine sum, the defining formula of the correlation trace.
inline std::vector<double> direct_trace(const SumFrequencySpectrum& s, const TimeGrid& g) {
  std::vector<double> out(g.count());
  for (std::size_t n = 0; n < g.count(); ++n) {
    long double acc = 0.0L;
    for (std::size_t k = 0; k < s.weights.size(); ++k)
      acc += static_cast<long double>(s.weights[k]) *
             std::cos(2.0L * static_cast<long double>(kPi) * s.grid.at(k) * g.at(n));
    out[n] = static_cast<double>(acc * s.grid.step());
  }
  return out;
}

/// Direct O(N^2) transform F(nu_k) = dt * sum_n G(t_n) exp(+2 pi i nu_k t_n)
/// with nu_k = k / (N dt).
inline std::complex<double> direct_amplitude(const std::vector<double>& g, const TimeGrid& grid,
                                             long long k) {
  const double nu = static_cast<double>(k) / grid.window();
  std::complex<long double> acc = 0.0L;
  for (std::size_t n = 0; n < g.size(); ++n) {
    // Reduce the phase exactly in cycles before calling sin/cos.
    const long double cycles = static_cast<long double>(nu) * grid.at(n);
    const long double frac = cycles - std::round(cycles);
    const long double phase = 2.0L * static_cast<long double>(kPi) * frac;
    acc += static_cast<long double>(g[n]) * std::complex<long double>(std::cos(phase), std::sin(phase));
  }
  return {static_cast<double>(acc.real() * grid.step()),
          static_cast<double>(acc.imag() * grid.step())};
}

/// Simpson quadrature on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace tpex::testing
