#pragma once

// Discretized pump spectra, SPDC joint spectral intensities and their
// sum-frequency marginals.
//
// Frequencies are ordinary frequencies in THz throughout; delays elsewhere in
// the library are in ps, so nu * t is a number of cycles.

#include <cstddef>
#include <span>
#include <vector>

namespace tpex {

/// Uniform frequency axis: start + k * step for k in [0, count).
class FrequencyGrid {
public:
  /// Throws InvalidArgument unless step > 0 and count >= 2.
  FrequencyGrid(double start_thz, double step_thz, std::size_t count);

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double stop() const noexcept { return at(count_ - 1); }
  double at(std::size_t k) const noexcept {
    return start_ + static_cast<double>(k) * step_;
  }
  std::vector<double> values() const;

  /// Index of the grid point nearest to nu, clamped to the grid.
  std::size_t nearest_index(double nu_thz) const noexcept;
  bool contains(double nu_thz) const noexcept;

  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
  double start_;
  double step_;
  std::size_t count_;
};

FrequencyGrid make_frequency_grid(double start_thz, double step_thz,
                                  std::size_t count);

/// Discretized sum-frequency density F(nu) in 1/THz.
struct SumFrequencySpectrum {
  FrequencyGrid grid;
  std::vector<double> weights;
  /// Set when the constructor guaranteed step * sum(weights) == 1.
  bool normalized = false;
  /// Set when a Gaussian constituent is cut off inside +-3 fwhm.
  bool truncated = false;

  /// step * sum(weights).
  double mass() const noexcept;
  std::size_t argmax() const noexcept;
};

/// Returns a copy rescaled so that step * sum(weights) == 1.
/// Throws InvalidArgument for a spectrum with zero mass.
SumFrequencySpectrum normalized(SumFrequencySpectrum spectrum);

/// |f(nu_s, nu_i)|^2, row-major with one row per signal frequency.
struct JointSpectralIntensity {
  FrequencyGrid signal_grid;
  FrequencyGrid idler_grid;
  std::vector<double> density;

  double at(std::size_t signal, std::size_t idler) const noexcept {
    return density[signal * idler_grid.count() + idler];
  }
  double mass() const noexcept;
};

struct CombLine {
  double center_thz = 0.0;
  double fwhm_thz = 0.0;
  double weight = 0.0;
};

/// Unit-peak Gaussian exp(-4 ln2 (nu - center)^2 / fwhm^2).
double gaussian_profile(double nu_thz, double center_thz,
                        double fwhm_thz) noexcept;

SumFrequencySpectrum gaussian_pump_spectrum(const FrequencyGrid& grid,
                                            double center_thz,
                                            double fwhm_thz);

/// Weighted sum of per-line Gaussians. Each line is normalized to unit
/// area on the grid before weighting so integrated line areas follow the
/// weights.
SumFrequencySpectrum comb_pump_spectrum(const FrequencyGrid& grid,
                                        std::span<const CombLine> lines);

/// Double-Gaussian JSI: pump envelope along nu_s + nu_i times a Gaussian
/// phase-matching function along nu_s - nu_i.
JointSpectralIntensity gaussian_jsi(const FrequencyGrid& signal_grid,
                                    const FrequencyGrid& idler_grid,
                                    double pump_center_thz,
                                    double pump_fwhm_thz,
                                    double phasematch_fwhm_thz,
                                    unsigned threads = 0);

/// Bins the JSI along anti-diagonals nu_s + nu_i onto output_grid with
/// nearest-bin assignment. Throws CoverageError when more than 1e-6 of the
/// mass falls outside the grid.
SumFrequencySpectrum sum_frequency_marginal(const JointSpectralIntensity& jsi,
                                            const FrequencyGrid& output_grid);

/// Linear interpolation of a density onto another grid; zero outside.
SumFrequencySpectrum resample(const SumFrequencySpectrum& spectrum,
                              const FrequencyGrid& grid);

/// Full width at half maximum of the peak containing the global maximum,
/// from linearly interpolated half-maximum crossings. Returns 0 when a
/// crossing is missing.
double measured_fwhm(const SumFrequencySpectrum& spectrum);

}  // namespace tpex
