#pragma once

// Finite coincidence-counting statistics on the interferogram and the
// scaling of reconstruction error with the number of detected pairs.

#include <cstdint>
#include <optional>
#include <vector>

#include "tpex/interferometer.hpp"
#include "tpex/recovery.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex {

struct CountRecord {
  double delay_ps = 0.0;
  std::uint64_t coincidences = 0;
  std::uint64_t pairs_sent = 1;
};

enum class CountingModel {
  /// coincidences ~ Binomial(pairs, p) per delay bin.
  binomial,
  /// coincidences = round(pairs * p); no shot noise.
  expected,
};

struct NoiseConfig {
  std::uint64_t pairs_per_bin = 10000;
  std::uint64_t seed = 0;
  /// Additive probability floor per bin.
  double dark_rate = 0.0;
  /// Single-photon detection efficiency; coincidences scale with its square.
  double efficiency = 1.0;
  CountingModel model = CountingModel::binomial;
  /// 0 selects hardware concurrency; output does not depend on it.
  unsigned threads = 0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
};

struct CountSeries {
  std::vector<CountRecord> records;
  /// Set when efficiency^2 * P + dark_rate exceeded 1 in some bin.
  bool clamped = false;
};

/// Draws coincidence counts per delay bin. Bin n of stream `stream` uses its
/// own generator keyed by (seed, stream, n), so the output is independent of
/// thread count.
CountSeries sample_counts(const Interferogram& interferogram,
                          const NoiseConfig& config, std::uint64_t stream = 0);

/// P = clamp((c / pairs - dark_rate) / efficiency^2, 0, 1) and G = 2P - 1.
/// Throws NonUniformGridError when delays are not evenly spaced.
CorrelationTrace estimate_trace(const std::vector<CountRecord>& records,
                                double efficiency, double dark_rate = 0.0);

struct ScalingRow {
  std::uint64_t n_trials = 0;
  double std_height = 0.0;
  double std_center = 0.0;
  double mean_height = 0.0;
  double mean_center = 0.0;
};

struct ScalingStudy {
  std::vector<ScalingRow> rows;
  /// Least-squares slope of log(std_height) against log(n_trials); empty
  /// with fewer than two rows of non-zero spread.
  std::optional<double> height_exponent;
  std::optional<double> center_exponent;
};

struct StudyOptions {
  TimeGrid time_grid = default_time_grid();
  RecoveryOptions recovery;
  /// Peak search is restricted to this band of the folded spectrum when set.
  std::optional<double> band_lo_thz;
  std::optional<double> band_hi_thz;
};

/// For each N in trial_counts, repeats the counting and recovery pipeline
/// with N pairs per delay bin and reports the spread of the recovered peak
/// height and centre. Throws InvalidArgument for repeats < 2 or an empty
/// trial list.
ScalingStudy error_scaling_study(const SumFrequencySpectrum& spectrum,
                                 const std::vector<std::uint64_t>& trial_counts,
                                 std::size_t repeats, const NoiseConfig& config,
                                 const StudyOptions& options = {});

/// Least-squares slope of log(y) on log(x) over the pairs with y > 0.
std::optional<double> fit_power_law(const std::vector<double>& x,
                                     const std::vector<double>& y);

}  // namespace tpex
