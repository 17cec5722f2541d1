#pragma once

// Two-photon absorption by the sample, applied as a transmission filter on
// the sum-frequency spectrum. Each excited level absorbs pairs whose sum
// frequency matches its transition frequency, broadened to a unit-peak
// Gaussian line.

#include <string>
#include <vector>

#include "tpex/spectral_model.hpp"

namespace tpex {

struct AbsorptionLine {
  /// Transition frequency of the excited level from the ground state.
  double center_thz = 0.0;
  double fwhm_thz = 0.0;
  /// Peak absorption in [0, 1].
  double strength = 0.0;
};

class Sample {
public:
  Sample() = default;
  /// Validates each line and sorts them by center frequency.
  Sample(std::string name, std::vector<AbsorptionLine> lines);

  const std::string& name() const noexcept { return name_; }
  const std::vector<AbsorptionLine>& lines() const noexcept { return lines_; }
  bool transparent() const noexcept { return lines_.empty(); }

private:
  std::string name_;
  std::vector<AbsorptionLine> lines_;
};

struct TransmissionProfile {
  std::vector<double> values;
  /// Set when the summed line profiles exceeded 1 somewhere.
  bool clamped = false;
};

/// T(nu) = clamp(1 - sum_lines strength * L(nu), 0, 1).
TransmissionProfile transmission_profile(const Sample& sample,
                                         const FrequencyGrid& grid);

struct TransmittedSpectrum {
  /// incident * T, deliberately not renormalized.
  SumFrequencySpectrum spectrum;
  double surviving_fraction = 1.0;
  bool clamped = false;
};

TransmittedSpectrum transmitted_spectrum(const SumFrequencySpectrum& incident,
                                         const Sample& sample);

/// Absorbed probability mass per line, in the order of sample.lines().
std::vector<double> excitation_probabilities(
    const SumFrequencySpectrum& incident, const Sample& sample);

/// max(reference - measured, 0) on a shared grid, in the reference's scale.
SumFrequencySpectrum recover_absorption_spectrum(
    const SumFrequencySpectrum& reference,
    const SumFrequencySpectrum& measured);

}  // namespace tpex
