#pragma once

// Scenario documents: one JSON object describing the pump, sample, delay
// grid, optional counting noise and recovery settings of a run.
//
//   {
//     "version": 1,
//     "name": "fig4",
//     "spectral_grid": {"start_thz": 735.75, "step_thz": 0.005, "count": 1801},
//     "pump": {"type": "gaussian", "center_thz": 740.25, "fwhm_thz": 1.5},
//     "sample": {"name": "...", "lines": [...]}            (or a file path)
//     "time_grid": {"step_ps": 0.0005, "count": 65536},    (start_ps optional)
//     "noise": {"pairs_per_bin": 10000, "seed": 1, ...},
//     "study": {"trial_counts": [1000, 10000], "repeats": 50},
//     "recovery": {"window": "rect", "downshift_thz": 740, "min_prominence": 0.1},
//     "outputs": "out/fig4"
//   }
//
// "pump" may also be an array; each entry is then simulated separately into
// a subdirectory named by its "label". Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tpex/absorption.hpp"
#include "tpex/interferometer.hpp"
#include "tpex/noise.hpp"
#include "tpex/recovery.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex {

inline constexpr int kScenarioVersion = 1;

enum class PumpKind { gaussian, comb, jsi };

struct PumpSpec {
  PumpKind kind = PumpKind::gaussian;
  std::string label;
  double center_thz = 0.0;
  double fwhm_thz = 0.0;
  std::vector<CombLine> lines;
  double phasematch_fwhm_thz = 0.0;
  std::optional<FrequencyGrid> signal_grid;
  std::optional<FrequencyGrid> idler_grid;
  bool write_jsi = false;
};

struct StudySpec {
  std::vector<std::uint64_t> trial_counts{1000, 10000, 100000};
  std::size_t repeats = 50;
};

struct RecoverySpec {
  WindowKind window = WindowKind::rectangular;
  std::optional<double> downshift_thz;
  std::optional<double> min_prominence;
};

struct Scenario {
  int version = kScenarioVersion;
  std::string name;
  FrequencyGrid spectral_grid{0.0, 1.0, 2};
  std::vector<PumpSpec> pumps;
  Sample sample;
  TimeGrid time_grid = default_time_grid();
  std::optional<NoiseConfig> noise;
  StudySpec study;
  RecoverySpec recovery;
  std::string outputs = "out";
};

/// Parses a scenario document; relative sample paths resolve against
/// base_dir. Throws ParseError for malformed documents or unknown keys.
Scenario parse_scenario(std::string_view json_text,
                        const std::filesystem::path& base_dir = ".");
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);

/// Throws AliasingError when a pump band reaches the delay grid's Nyquist
/// frequency, InvalidArgument for other inconsistencies.
void validate_scenario(const Scenario& scenario);

/// Incident sum-frequency spectrum of one pump on the scenario grid.
SumFrequencySpectrum build_pump_spectrum(const Scenario& scenario,
                                         const PumpSpec& pump,
                                         unsigned threads = 0);

/// Signal/idler grids used for a JSI pump without explicit grids: centred on
/// half the pump frequency, aligned so nu_s + nu_i falls on spectral-grid
/// points.
std::pair<FrequencyGrid, FrequencyGrid> default_jsi_grids(const Scenario& scenario,
                                                          const PumpSpec& pump);

std::vector<std::string> preset_names();
/// Throws InvalidArgument for an unknown name.
Scenario preset(std::string_view name);

}  // namespace tpex
