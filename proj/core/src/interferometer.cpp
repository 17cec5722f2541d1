#include "tpex/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "parallel.hpp"
#include "tpex/errors.hpp"

namespace tpex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(2 pi i x) with x reduced to [-1/2, 1/2] first; nu * t reaches ~1e4
// cycles at the default grid and the reduction keeps the phase error at the
// level of the product's rounding.
std::complex<double> cycles_phasor(double cycles) {
  const double frac = cycles - std::round(cycles);
  return std::polar(1.0, kTwoPi * frac);
}

// Re-anchor the phasor recurrence this often to bound rounding drift.
constexpr std::size_t kResyncInterval = 32;

double cosine_sum(const SumFrequencySpectrum& spectrum, std::size_t first,
                  std::size_t last, double t) {
  const auto& grid = spectrum.grid;
  const std::complex<double> advance = cycles_phasor(grid.step() * t);
  std::complex<double> phasor;
  double total = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    if ((k - first) % kResyncInterval == 0)
      phasor = cycles_phasor(grid.at(k) * t);
    else
      phasor *= advance;
    total += spectrum.weights[k] * phasor.real();
  }
  return grid.step() * total;
}

}  // namespace

TimeGrid::TimeGrid(double start_ps, double step_ps, std::size_t count)
    : start_(start_ps), step_(step_ps), count_(count) {
  if (!std::isfinite(start_ps) || !std::isfinite(step_ps))
    throw InvalidArgument("time grid bounds must be finite");
  if (!(step_ps > 0.0)) throw InvalidArgument("time grid step must be positive");
  if (count < 2) throw InvalidArgument("time grid needs at least 2 points");
}

TimeGrid centered_time_grid(double step_ps, std::size_t count) {
  return TimeGrid(-static_cast<double>(count / 2) * step_ps, step_ps, count);
}

TimeGrid default_time_grid() { return centered_time_grid(5e-4, 1u << 16); }

double nyquist_frequency(const TimeGrid& grid) noexcept {
  return 0.5 / grid.step();
}

std::optional<double> band_max(const SumFrequencySpectrum& spectrum) {
  for (std::size_t k = spectrum.weights.size(); k-- > 0;)
    if (spectrum.weights[k] > 0.0) return spectrum.grid.at(k);
  return std::nullopt;
}

Interferogram simulate_interferogram(const SumFrequencySpectrum& spectrum,
                                     const TimeGrid& grid,
                                     const SynthesisOptions& options) {
  if (spectrum.weights.size() != spectrum.grid.count())
    throw InvalidArgument("spectrum weights do not match the grid");
  for (double w : spectrum.weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidArgument("spectral weights must be finite and non-negative");
  const double mass = spectrum.mass();
  if (!(mass > 0.0) || mass > 1.0 + 1e-9)
    throw InvalidArgument(
        "spectrum must be normalized, or sub-normalized after absorption");

  Interferogram out{grid, std::vector<double>(grid.count()), band_max(spectrum)};

  std::size_t first = 0;
  while (spectrum.weights[first] == 0.0) ++first;
  const std::size_t last = spectrum.grid.nearest_index(*out.band_max_thz);

  detail::parallel_for(grid.count(), options.threads,
                       [&](std::size_t begin, std::size_t end) {
                         for (std::size_t n = begin; n < end; ++n) {
                           const double c =
                               cosine_sum(spectrum, first, last, grid.at(n));
                           out.values[n] = 0.5 * (mass + c);
                         }
                       });
  return out;
}

CorrelationTrace correlation_trace(const Interferogram& interferogram,
                                   SignConvention convention) {
  CorrelationTrace out{interferogram.grid,
                       std::vector<double>(interferogram.values.size()),
                       interferogram.band_max_thz};
  const double sign = convention == SignConvention::bunching ? 1.0 : -1.0;
  for (std::size_t n = 0; n < out.values.size(); ++n)
    out.values[n] = sign * (2.0 * interferogram.values[n] - 1.0);
  return out;
}

Interferogram interferogram_from_trace(const CorrelationTrace& trace,
                                       SignConvention convention) {
  Interferogram out{trace.grid, std::vector<double>(trace.values.size()),
                    trace.band_max_thz};
  const double sign = convention == SignConvention::bunching ? 1.0 : -1.0;
  for (std::size_t n = 0; n < out.values.size(); ++n)
    out.values[n] = 0.5 * (1.0 + sign * trace.values[n]);
  return out;
}

std::vector<double> analytic_envelope(const CorrelationTrace& trace) {
  const std::size_t n = trace.values.size();
  auto spectrum = detail::dft(std::span<const double>(trace.values),
                              detail::FftSign::negative);
  // Keep positive frequencies only (doubled); DC and, for even n, the
  // Nyquist bin carry no oscillation and are dropped.
  spectrum[0] = 0.0;
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < n; ++k) {
    if (k < (n + 1) / 2)
      spectrum[k] *= 2.0;
    else
      spectrum[k] = 0.0;
  }
  if (n % 2 == 0) spectrum[half] = 0.0;
  const auto analytic = detail::dft(spectrum, detail::FftSign::positive);
  std::vector<double> envelope(n);
  for (std::size_t k = 0; k < n; ++k)
    envelope[k] = std::abs(analytic[k]) / static_cast<double>(n);
  return envelope;
}

double envelope_coherence_time(const CorrelationTrace& trace) {
  const auto envelope = analytic_envelope(trace);
  const auto peak_it = std::max_element(envelope.begin(), envelope.end());
  const double half = 0.5 * *peak_it;
  if (!(half > 0.0)) throw NoSignalError("trace has no envelope");
  const auto peak = static_cast<std::size_t>(peak_it - envelope.begin());

  std::size_t left = peak;
  while (left > 0 && envelope[left - 1] > half) --left;
  std::size_t right = peak;
  while (right + 1 < envelope.size() && envelope[right + 1] > half) ++right;
  if (left == 0 || right + 1 == envelope.size())
    throw WindowTooShortError(
        "coherence envelope does not fall to half maximum inside the window");

  const double x_left =
      static_cast<double>(left - 1) +
      (half - envelope[left - 1]) / (envelope[left] - envelope[left - 1]);
  const double x_right =
      static_cast<double>(right) +
      (envelope[right] - half) / (envelope[right] - envelope[right + 1]);
  return (x_right - x_left) * trace.grid.step();
}

double dominant_oscillation_frequency(const CorrelationTrace& trace) {
  if (trace.band_max_thz && *trace.band_max_thz >= nyquist_frequency(trace.grid))
    throw AliasingError("delay step " + std::to_string(trace.grid.step()) +
                        " ps aliases a band reaching " +
                        std::to_string(*trace.band_max_thz) + " THz");
  const bool silent = std::all_of(trace.values.begin(), trace.values.end(),
                                  [](double g) { return g == 0.0; });
  if (silent) throw NoSignalError("correlation trace is identically zero");

  const std::size_t n = trace.values.size();
  const auto spectrum = detail::dft(std::span<const double>(trace.values),
                                    detail::FftSign::negative);
  std::size_t best = 0;
  double best_power = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double power = std::norm(spectrum[k]);
    if (power > best_power) {
      best_power = power;
      best = k;
    }
  }
  if (best == 0) throw NoSignalError("correlation trace has no oscillating part");
  return static_cast<double>(best) / trace.grid.window();
}

}  // namespace tpex
