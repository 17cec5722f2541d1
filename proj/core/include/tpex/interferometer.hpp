#pragma once

// N00N-state interference P(t) and second-order correlation trace G(t)
// synthesized from a sum-frequency spectrum.

#include <cstddef>
#include <optional>
#include <vector>

#include "tpex/spectral_model.hpp"

namespace tpex {

/// Uniform delay axis in ps.
class TimeGrid {
public:
  /// Throws InvalidArgument unless step > 0 and count >= 2.
  TimeGrid(double start_ps, double step_ps, std::size_t count);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double at(std::size_t n) const noexcept {
    return start_ + static_cast<double>(n) * step_;
  }
  /// count * step, the span covered by the samples.
  double window() const noexcept {
    return static_cast<double>(count_) * step_;
  }

  friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
  double start_;
  double step_;
  std::size_t count_;
};

/// 2^16 points at 0.5 fs, centred on zero delay: 32.768 ps window,
/// 0.0305 THz bins, Nyquist at 1000 THz.
TimeGrid default_time_grid();

/// Delay grid of `count` points with the given step, centred on t = 0.
TimeGrid centered_time_grid(double step_ps, std::size_t count);

struct Interferogram {
  TimeGrid grid;
  std::vector<double> values;
  /// Highest frequency carrying weight in the source spectrum, if known.
  std::optional<double> band_max_thz;
};

struct CorrelationTrace {
  TimeGrid grid;
  std::vector<double> values;
  std::optional<double> band_max_thz;
};

enum class SignConvention {
  /// G = 2P - 1: G equals the cosine transform of F and G(0) = +1.
  bunching,
  /// G = 1 - 2P as printed in the original derivation.
  literal,
};

struct SynthesisOptions {
  /// 0 selects hardware concurrency. Results are bit-identical for any value.
  unsigned threads = 0;
};

/// P(t) = 1/2 [m + step * sum_nu F(nu) cos(2 pi nu t)] with m the spectrum
/// mass. For a normalized spectrum m = 1; a sub-normalized (transmitted)
/// spectrum counts absorbed pairs as lost coincidences.
/// Throws InvalidArgument for negative weights or mass outside (0, 1].
Interferogram simulate_interferogram(const SumFrequencySpectrum& spectrum,
                                     const TimeGrid& grid,
                                     const SynthesisOptions& options = {});

CorrelationTrace correlation_trace(
    const Interferogram& interferogram,
    SignConvention convention = SignConvention::bunching);

/// Inverse of correlation_trace.
Interferogram interferogram_from_trace(
    const CorrelationTrace& trace,
    SignConvention convention = SignConvention::bunching);

/// FWHM in ps of the analytic-signal envelope |G + i H[G]|.
/// Throws WindowTooShortError if either half-maximum crossing lies outside
/// the window, NoSignalError for an all-zero trace.
double envelope_coherence_time(const CorrelationTrace& trace);

/// Envelope |G + i H[G]| via the positive-frequency reconstruction.
std::vector<double> analytic_envelope(const CorrelationTrace& trace);

/// Frequency in THz of the strongest non-DC bin of the power spectrum of G.
/// Ties go to the lower frequency.
/// Throws AliasingError when the trace's band maximum is at or above the
/// Nyquist frequency, NoSignalError when G carries no power.
double dominant_oscillation_frequency(const CorrelationTrace& trace);

/// Nyquist frequency 1 / (2 step) of a delay grid.
double nyquist_frequency(const TimeGrid& grid) noexcept;

/// Highest grid frequency with non-zero weight; nullopt for an empty spectrum.
std::optional<double> band_max(const SumFrequencySpectrum& spectrum);

}  // namespace tpex
