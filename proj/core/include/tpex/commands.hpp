#pragma once

// The pipelines behind the command-line verbs. Each writes its artifacts
// into an output directory and is deterministic for a fixed scenario and
// seed, independent of the thread count.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tpex/noise.hpp"
#include "tpex/recovery.hpp"
#include "tpex/scenario.hpp"

namespace tpex {

struct RunOptions {
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

/// Writes spectrum.csv, transmitted.csv, interferogram.csv and trace.csv
/// (plus reference_trace.csv when the sample absorbs, counts.csv and
/// estimated_trace.csv when noise is configured, jsi.csv on request and a
/// summary.json). Scenarios with several pumps write one subdirectory per
/// pump label. Returns the directories written.
std::vector<std::filesystem::path> run_simulate(const Scenario& scenario,
                                                const std::filesystem::path& out_dir,
                                                const RunOptions& options = {});

struct RecoverRequest {
  std::filesystem::path trace;
  /// Trace measured without the sample; enables dip detection against it.
  std::optional<std::filesystem::path> reference_trace;
  RecoveryOptions recovery;
  /// Absolute prominence threshold; defaults to 5% of the strongest interior
  /// value of the analysed signal.
  std::optional<double> min_prominence;
  /// Restricts feature detection to this band when set.
  std::optional<double> band_lo_thz;
  std::optional<double> band_hi_thz;
};

/// Writes recovered.csv, folded.csv and peaks.json; with a reference trace
/// also reference_folded.csv and absorption.csv, and peaks.json lists dips.
PeakReport run_recover(const RecoverRequest& request,
                       const std::filesystem::path& out_dir);

/// Writes scaling.csv and scaling_fit.json for the first pump of the
/// scenario, filtered by its sample.
ScalingStudy run_noise_study(const Scenario& scenario,
                             const std::filesystem::path& out_dir,
                             const RunOptions& options = {});

/// Default prominence threshold used by run_recover.
double default_min_prominence(const SumFrequencySpectrum& spectrum,
                              const SumFrequencySpectrum* baseline);

}  // namespace tpex
