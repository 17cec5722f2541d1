// tpex: forward simulation and spectral recovery for N00N-state two-photon
// excitation spectroscopy.
//
//   tpex simulate    --config scenario.json | --preset fig4  [--out DIR] [--seed N]
//   tpex recover     TRACE.csv [--reference REF.csv] [--window hann|rect]
//                    [--downshift-thz NU] [--min-prominence X] [--out DIR]
//   tpex noise-study --config scenario.json | --preset fig2  [--trials 1000,10000]
//                    [--repeats 50] [--seed N] [--out DIR]
//   tpex presets list | presets show NAME
//
// Exit codes: 0 success, 1 other failure, 2 malformed config/CSV or usage,
// 3 aliasing delay grid, 4 non-uniform delay grid.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tpex/commands.hpp"
#include "tpex/errors.hpp"
#include "tpex/io.hpp"
#include "tpex/scenario.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kAliasing = 3,
  kNonUniform = 4,
};

struct ScenarioArgs {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  std::string window;
  std::optional<double> downshift;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
  auto* config = cmd->add_option("--config", args.config, "Scenario JSON document");
  auto* preset = cmd->add_option("--preset", args.preset, "Bundled scenario preset");
  config->excludes(preset);
  cmd->add_option("--out", args.out, "Output directory (default: scenario outputs)");
  cmd->add_option("--seed", args.seed, "Override the noise seed");
  cmd->add_option("--threads", args.threads, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--window", args.window, "Recovery window: hann or rect");
  cmd->add_option("--downshift-thz", args.downshift, "Heterodyne reference frequency");
}

tpex::Scenario resolve_scenario(const ScenarioArgs& args) {
  if (args.config.empty() && args.preset.empty())
    throw tpex::ParseError("one of --config or --preset is required");
  tpex::Scenario scenario;
  if (args.config.empty()) {
    try {
      scenario = tpex::preset(args.preset);
    } catch (const tpex::InvalidArgument& e) {
      throw tpex::ParseError(e.what());
    }
  } else {
    scenario = tpex::load_scenario(args.config);
  }
  if (!args.window.empty()) scenario.recovery.window = tpex::parse_window_kind(args.window);
  if (args.downshift) scenario.recovery.downshift_thz = args.downshift;
  return scenario;
}

std::filesystem::path output_dir(const ScenarioArgs& args, const tpex::Scenario& s) {
  return std::filesystem::path(args.out.empty() ? s.outputs : args.out);
}

std::vector<std::uint64_t> parse_trials(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const auto end = text.find(',', begin);
    const auto token = text.substr(begin, end == std::string::npos ? end : end - begin);
    try {
      std::size_t used = 0;
      const double value = std::stod(token, &used);
      if (used != token.size() || !(value >= 1.0))
        throw tpex::ParseError("bad trial count '" + token + "'");
      out.push_back(static_cast<std::uint64_t>(value));
    } catch (const std::logic_error&) {
      throw tpex::ParseError("bad trial count '" + token + "'");
    }
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum interferometric two-photon excitation spectroscopy toolkit", "tpex"};
  app.require_subcommand(1);

  ScenarioArgs sim_args;
  auto* simulate = app.add_subcommand("simulate", "Forward-simulate spectra and traces");
  add_scenario_options(simulate, sim_args);

  std::string trace_path, reference_path, rec_out = "recovered", rec_window = "rect";
  std::optional<double> rec_downshift, min_prominence, band_lo, band_hi;
  auto* recover = app.add_subcommand("recover", "Recover a spectrum from a trace CSV");
  recover->add_option("trace", trace_path, "Correlation trace CSV (t_ps,g)")->required();
  recover->add_option("--reference", reference_path, "Trace recorded without the sample");
  recover->add_option("--out", rec_out, "Output directory");
  recover->add_option("--window", rec_window, "Window: hann or rect");
  recover->add_option("--downshift-thz", rec_downshift, "Heterodyne reference frequency");
  recover->add_option("--min-prominence", min_prominence, "Absolute prominence threshold");
  recover->add_option("--band-lo-thz", band_lo, "Lower edge of the feature search band");
  recover->add_option("--band-hi-thz", band_hi, "Upper edge of the feature search band");

  ScenarioArgs study_args;
  std::string trials;
  std::optional<std::size_t> repeats;
  auto* study = app.add_subcommand("noise-study", "Error scaling with pairs per bin");
  add_scenario_options(study, study_args);
  study->add_option("--trials", trials, "Comma-separated pairs-per-bin values");
  study->add_option("--repeats", repeats, "Repeats per trial count (at least 2)")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));

  auto* presets = app.add_subcommand("presets", "Bundled scenarios");
  presets->require_subcommand(1);
  auto* presets_list = presets->add_subcommand("list", "List preset names");
  std::string show_name;
  auto* presets_show = presets->add_subcommand("show", "Print a preset as JSON");
  presets_show->add_option("name", show_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*simulate) {
      const auto scenario = resolve_scenario(sim_args);
      const auto dirs = tpex::run_simulate(scenario, output_dir(sim_args, scenario),
                                           {sim_args.threads, sim_args.seed});
      for (const auto& d : dirs) std::cout << "wrote " << d.string() << "\n";
    } else if (*recover) {
      tpex::RecoverRequest request;
      request.trace = trace_path;
      if (!reference_path.empty()) request.reference_trace = reference_path;
      request.recovery.window = tpex::parse_window_kind(rec_window);
      request.recovery.downshift_thz = rec_downshift;
      request.min_prominence = min_prominence;
      request.band_lo_thz = band_lo;
      request.band_hi_thz = band_hi;
      const auto report = tpex::run_recover(request, rec_out);
      std::cout << "wrote " << rec_out << " (" << report.size() << " features)\n";
    } else if (*study) {
      auto scenario = resolve_scenario(study_args);
      if (!trials.empty()) scenario.study.trial_counts = parse_trials(trials);
      if (repeats) scenario.study.repeats = *repeats;
      if (scenario.study.repeats < 20)
        std::cerr << "warning: fewer than 20 repeats give unreliable spreads\n";
      const auto out = output_dir(study_args, scenario);
      const auto result =
          tpex::run_noise_study(scenario, out, {study_args.threads, study_args.seed});
      std::cout << "n_trials,std_height,std_center\n";
      for (const auto& row : result.rows)
        std::cout << row.n_trials << ',' << tpex::io::format_number(row.std_height) << ','
                  << tpex::io::format_number(row.std_center) << "\n";
      std::cout << "height exponent: "
                << (result.height_exponent
                        ? tpex::io::format_number(*result.height_exponent)
                        : std::string("not available"))
                << "\n";
    } else if (*presets_list) {
      for (const auto& name : tpex::preset_names()) std::cout << name << "\n";
    } else if (*presets_show) {
      std::cout << tpex::scenario_to_json(tpex::preset(show_name));
    }
  } catch (const tpex::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const tpex::AliasingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAliasing;
  } catch (const tpex::NonUniformGridError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonUniform;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
