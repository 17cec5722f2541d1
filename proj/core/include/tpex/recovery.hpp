#pragma once

// Recovery of the sum-frequency spectrum from a correlation trace by
// discrete Fourier transform, folding to the physical half-axis, feature
// detection and reconstruction error metrics.

#include <complex>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "tpex/interferometer.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex {

enum class WindowKind { rectangular, hann };

/// Parses "rect"/"rectangular" or "hann"; throws InvalidArgument otherwise.
WindowKind parse_window_kind(std::string_view name);

struct RecoveryOptions {
  WindowKind window = WindowKind::rectangular;
  /// Heterodyne reference: G is multiplied by exp(+2 pi i nu_ref t) before
  /// the transform so the band around nu_ref lands near baseband. The value
  /// is snapped to a whole number of frequency bins, which makes the shift an
  /// exact relabelling of the unshifted result.
  std::optional<double> downshift_thz;
};

/// Two-sided DFT of a correlation trace.
///
/// amplitudes[j] is the value at baseband frequency grid.at(j); the physical
/// frequency of that bin is grid.at(j) + offset_thz. Without a downshift the
/// grid runs from -floor(N/2) to ceil(N/2) - 1 bins and offset_thz is zero.
struct RecoveredSpectrum {
  FrequencyGrid grid;
  std::vector<std::complex<double>> amplitudes;
  double offset_thz = 0.0;
  double window_ps = 0.0;
  double time_step_ps = 0.0;

  std::size_t size() const noexcept { return amplitudes.size(); }
  /// Physical frequency of element j.
  double physical_frequency(std::size_t j) const noexcept {
    return grid.at(j) + offset_thz;
  }
  /// Amplitude at physical bin index k in [-floor(N/2), ceil(N/2)), with
  /// the periodic wrap of the DFT applied.
  std::complex<double> at_physical_bin(long long k) const noexcept;
  double bin_width() const noexcept { return grid.step(); }
};

/// F(nu_k) = step_t * sum_n w(t_n) G(t_n) exp(+2 pi i nu_k t_n).
/// Throws InvalidArgument for traces shorter than 2 samples.
RecoveredSpectrum fourier_recover(const CorrelationTrace& trace,
                                  const RecoveryOptions& options = {});

/// Largest |a(-nu) - conj(a(nu))| relative to the largest |a|.
double hermitian_defect(const RecoveredSpectrum& recovered);

/// One-sided spectrum on nu >= 0: |a(0)| at DC, |a(nu)| + |a(-nu)| (twice
/// |a(nu)| for Hermitian input) above it, and the unpaired even-N Nyquist bin
/// once, so the folded mass equals the two-sided sum of |a|.
/// Throws AsymmetryError when the Hermitian defect exceeds 1e-6.
SumFrequencySpectrum fold_one_sided(const RecoveredSpectrum& recovered,
                                    bool renormalize = false);

enum class FeatureKind { peak, dip };

struct Feature {
  double center_thz = 0.0;
  /// Height above the feature's base; for dips, depth below the baseline.
  double height = 0.0;
  double fwhm_thz = 0.0;
  FeatureKind kind = FeatureKind::peak;
  /// Prominence of the feature in the analysed signal.
  double prominence = 0.0;
};

using PeakReport = std::vector<Feature>;

std::string_view to_string(FeatureKind kind) noexcept;

/// Local maxima of `spectrum` (or of baseline - spectrum, reported as dips)
/// whose topographic prominence is at least min_prominence. Centres and
/// heights are refined by three-point parabolic interpolation; plateaus
/// resolve to their lowest-frequency sample. Throws InvalidArgument when
/// min_prominence <= 0 or the baseline grid differs.
PeakReport detect_features(const SumFrequencySpectrum& spectrum,
                           const SumFrequencySpectrum* baseline,
                           double min_prominence);

/// DFT bin width 1 / window.
double resolution_limit(double window_ps);

struct SpectrumDistance {
  double l2_rel = 0.0;
  double linf_rel = 0.0;
};

/// Relative L2 and L-infinity distances of a from b after normalizing both
/// to unit mass. Throws InvalidArgument for mismatched grids.
SpectrumDistance spectrum_distance(const SumFrequencySpectrum& a,
                                   const SumFrequencySpectrum& b);

/// Integrated mass around each of the ascending `centers_thz`. Neighbouring
/// lines are split at their midpoint; the outermost lines extend
/// outer_half_width_thz beyond their centre.
std::vector<double> integrated_line_areas(const SumFrequencySpectrum& spectrum,
                                          const std::vector<double>& centers_thz,
                                          double outer_half_width_thz);

}  // namespace tpex
