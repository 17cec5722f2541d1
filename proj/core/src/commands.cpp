#include "tpex/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tpex/errors.hpp"
#include "tpex/io.hpp"

namespace tpex {

namespace fs = std::filesystem;

namespace {

using ordered_json = nlohmann::ordered_json;

CorrelationTrace load_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trace " + path.string());
  return io::read_trace_csv(in);
}

SumFrequencySpectrum band_limited(const SumFrequencySpectrum& spectrum,
                                  std::optional<double> lo,
                                  std::optional<double> hi) {
  if (!lo && !hi) return spectrum;
  auto out = spectrum;
  for (std::size_t k = 0; k < out.weights.size(); ++k) {
    const double nu = out.grid.at(k);
    if ((lo && nu < *lo) || (hi && nu > *hi)) out.weights[k] = 0.0;
  }
  return out;
}

void simulate_one(const Scenario& scenario, const PumpSpec& pump, const fs::path& dir,
                  const RunOptions& options) {
  fs::create_directories(dir);
  const auto incident = build_pump_spectrum(scenario, pump, options.threads);
  const auto transmitted = transmitted_spectrum(incident, scenario.sample);
  const SynthesisOptions synth{options.threads};
  const auto interferogram =
      simulate_interferogram(transmitted.spectrum, scenario.time_grid, synth);
  const auto trace = correlation_trace(interferogram);

  io::write_file(dir / "spectrum.csv", io::write_spectrum_csv, incident);
  io::write_file(dir / "transmitted.csv", io::write_spectrum_csv, transmitted.spectrum);
  io::write_file(dir / "interferogram.csv", io::write_interferogram_csv, interferogram);
  io::write_file(dir / "trace.csv", io::write_trace_csv, trace);

  if (!scenario.sample.transparent()) {
    const auto reference = correlation_trace(
        simulate_interferogram(incident, scenario.time_grid, synth));
    io::write_file(dir / "reference_trace.csv", io::write_trace_csv, reference);
  }
  if (pump.kind == PumpKind::jsi && pump.write_jsi) {
    auto [signal, idler] = default_jsi_grids(scenario, pump);
    if (pump.signal_grid) signal = *pump.signal_grid;
    if (pump.idler_grid) idler = *pump.idler_grid;
    io::write_file(dir / "jsi.csv", io::write_jsi_csv,
                   gaussian_jsi(signal, idler, pump.center_thz, pump.fwhm_thz,
                                pump.phasematch_fwhm_thz, options.threads));
  }

  ordered_json summary;
  summary["scenario"] = scenario.name;
  if (!pump.label.empty()) summary["pump"] = pump.label;
  summary["surviving_fraction"] = transmitted.surviving_fraction;
  summary["transmission_clamped"] = transmitted.clamped;
  summary["excitation_probabilities"] =
      excitation_probabilities(incident, scenario.sample);
  summary["spectrum_truncated"] = incident.truncated;
  summary["nyquist_thz"] = nyquist_frequency(scenario.time_grid);
  summary["resolution_thz"] = resolution_limit(scenario.time_grid.window());

  if (scenario.noise) {
    auto config = *scenario.noise;
    if (options.seed) config.seed = *options.seed;
    config.threads = options.threads;
    const auto counts = sample_counts(interferogram, config);
    io::write_file(dir / "counts.csv", io::write_counts_csv, counts.records);
    io::write_file(dir / "estimated_trace.csv", io::write_trace_csv,
                   estimate_trace(counts.records, config.efficiency, config.dark_rate));
    summary["seed"] = config.seed;
    summary["count_probability_clamped"] = counts.clamped;
  }
  io::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace

double default_min_prominence(const SumFrequencySpectrum& spectrum,
                              const SumFrequencySpectrum* baseline) {
  double top = 0.0;
  for (std::size_t k = 1; k + 1 < spectrum.weights.size(); ++k) {
    const double v = baseline ? baseline->weights[k] - spectrum.weights[k]
                              : spectrum.weights[k];
    top = std::max(top, v);
  }
  return 0.05 * top;
}

std::vector<fs::path> run_simulate(const Scenario& scenario, const fs::path& out_dir,
                                   const RunOptions& options) {
  validate_scenario(scenario);
  std::vector<fs::path> written;
  if (scenario.pumps.size() == 1) {
    simulate_one(scenario, scenario.pumps.front(), out_dir, options);
    written.push_back(out_dir);
  } else {
    for (const auto& pump : scenario.pumps) {
      simulate_one(scenario, pump, out_dir / pump.label, options);
      written.push_back(out_dir / pump.label);
    }
  }
  return written;
}

PeakReport run_recover(const RecoverRequest& request, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const auto trace = load_trace(request.trace);
  const auto recovered = fourier_recover(trace, request.recovery);
  const auto folded = fold_one_sided(recovered);
  io::write_file(out_dir / "recovered.csv", io::write_recovered_csv, recovered);
  io::write_file(out_dir / "folded.csv", io::write_spectrum_csv, folded);

  std::optional<SumFrequencySpectrum> baseline;
  if (request.reference_trace) {
    const auto reference = load_trace(*request.reference_trace);
    const double step = trace.grid.step();
    if (reference.grid.count() != trace.grid.count() ||
        std::abs(reference.grid.step() - step) > 1e-9 * step ||
        std::abs(reference.grid.start() - trace.grid.start()) > 1e-6 * step)
      throw InvalidArgument("reference trace uses a different delay grid");
    baseline = fold_one_sided(fourier_recover(reference, request.recovery));
    baseline->grid = folded.grid;
    io::write_file(out_dir / "reference_folded.csv", io::write_spectrum_csv, *baseline);
    io::write_file(out_dir / "absorption.csv", io::write_spectrum_csv,
                   recover_absorption_spectrum(*baseline, folded));
  }

  const auto analysed = band_limited(folded, request.band_lo_thz, request.band_hi_thz);
  std::optional<SumFrequencySpectrum> analysed_baseline;
  if (baseline)
    analysed_baseline = band_limited(*baseline, request.band_lo_thz, request.band_hi_thz);
  const auto* base = analysed_baseline ? &*analysed_baseline : nullptr;

  const double threshold =
      request.min_prominence ? *request.min_prominence
                             : default_min_prominence(analysed, base);
  PeakReport report;
  if (threshold > 0.0) report = detect_features(analysed, base, threshold);
  io::write_text_file(out_dir / "peaks.json", io::peaks_to_json(report));
  return report;
}

ScalingStudy run_noise_study(const Scenario& scenario, const fs::path& out_dir,
                             const RunOptions& options) {
  validate_scenario(scenario);
  fs::create_directories(out_dir);
  const auto& pump = scenario.pumps.front();
  const auto incident = build_pump_spectrum(scenario, pump, options.threads);
  const auto transmitted = transmitted_spectrum(incident, scenario.sample);

  NoiseConfig config = scenario.noise.value_or(NoiseConfig{});
  if (options.seed) config.seed = *options.seed;
  config.threads = options.threads;

  StudyOptions study_options;
  study_options.time_grid = scenario.time_grid;
  study_options.recovery.window = scenario.recovery.window;
  study_options.recovery.downshift_thz = scenario.recovery.downshift_thz;
  study_options.band_lo_thz = scenario.spectral_grid.start();
  study_options.band_hi_thz = scenario.spectral_grid.stop();

  const auto study = error_scaling_study(transmitted.spectrum, scenario.study.trial_counts,
                                         scenario.study.repeats, config, study_options);
  io::write_file(out_dir / "scaling.csv", io::write_scaling_csv, study);

  ordered_json fit;
  fit["repeats"] = scenario.study.repeats;
  fit["seed"] = config.seed;
  fit["height_exponent"] =
      study.height_exponent ? ordered_json(*study.height_exponent) : ordered_json(nullptr);
  fit["center_exponent"] =
      study.center_exponent ? ordered_json(*study.center_exponent) : ordered_json(nullptr);
  io::write_text_file(out_dir / "scaling_fit.json", fit.dump(2) + "\n");
  return study;
}

}  // namespace tpex
