#include "tpex/absorption.hpp"

#include <algorithm>
#include <cmath>

#include "tpex/errors.hpp"

namespace tpex {

namespace {

void require_normalized(const SumFrequencySpectrum& spectrum) {
  if (std::abs(spectrum.mass() - 1.0) > 1e-9)
    throw InvalidArgument("incident spectrum must be normalized");
}

}  // namespace

Sample::Sample(std::string name, std::vector<AbsorptionLine> lines)
    : name_(std::move(name)), lines_(std::move(lines)) {
  for (const auto& line : lines_) {
    if (!std::isfinite(line.center_thz))
      throw InvalidArgument("absorption line center must be finite");
    if (!(line.fwhm_thz > 0.0))
      throw InvalidArgument("absorption linewidth must be positive");
    if (!(line.strength >= 0.0 && line.strength <= 1.0))
      throw InvalidArgument("absorption strength must lie in [0, 1]");
  }
  std::stable_sort(lines_.begin(), lines_.end(),
                   [](const AbsorptionLine& a, const AbsorptionLine& b) {
                     return a.center_thz < b.center_thz;
                   });
}

TransmissionProfile transmission_profile(const Sample& sample,
                                         const FrequencyGrid& grid) {
  TransmissionProfile out{std::vector<double>(grid.count(), 1.0)};
  for (std::size_t k = 0; k < grid.count(); ++k) {
    double absorbed = 0.0;
    for (const auto& line : sample.lines())
      absorbed += line.strength *
                  gaussian_profile(grid.at(k), line.center_thz, line.fwhm_thz);
    double t = 1.0 - absorbed;
    if (t < 0.0) {
      t = 0.0;
      out.clamped = true;
    }
    out.values[k] = std::min(t, 1.0);
  }
  return out;
}

TransmittedSpectrum transmitted_spectrum(const SumFrequencySpectrum& incident,
                                         const Sample& sample) {
  require_normalized(incident);
  const auto profile = transmission_profile(sample, incident.grid);
  TransmittedSpectrum out{incident, incident.mass(), profile.clamped};
  out.spectrum.normalized = sample.transparent() && incident.normalized;
  if (sample.transparent()) return out;

  for (std::size_t k = 0; k < profile.values.size(); ++k)
    out.spectrum.weights[k] *= profile.values[k];
  out.surviving_fraction = out.spectrum.mass();
  return out;
}

std::vector<double> excitation_probabilities(
    const SumFrequencySpectrum& incident, const Sample& sample) {
  require_normalized(incident);
  const auto& grid = incident.grid;
  std::vector<double> out;
  out.reserve(sample.lines().size());
  for (const auto& line : sample.lines()) {
    double total = 0.0;
    for (std::size_t k = 0; k < grid.count(); ++k)
      total += incident.weights[k] * line.strength *
               gaussian_profile(grid.at(k), line.center_thz, line.fwhm_thz);
    out.push_back(grid.step() * total);
  }
  return out;
}

SumFrequencySpectrum recover_absorption_spectrum(
    const SumFrequencySpectrum& reference,
    const SumFrequencySpectrum& measured) {
  if (!(reference.grid == measured.grid) ||
      reference.weights.size() != measured.weights.size())
    throw InvalidArgument("reference and measured spectra use different grids");
  SumFrequencySpectrum out{reference.grid,
                           std::vector<double>(reference.weights.size())};
  for (std::size_t k = 0; k < out.weights.size(); ++k)
    out.weights[k] = std::max(reference.weights[k] - measured.weights[k], 0.0);
  return out;
}

}  // namespace tpex
