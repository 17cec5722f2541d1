#include "tpex/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include <json.hpp>

#include "tpex/errors.hpp"
#include "tpex/io.hpp"

namespace tpex {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view context) {
  if (!obj.is_object()) throw ParseError(std::string(context) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParseError("unknown key '" + key + "' in " + std::string(context));
  }
}

FrequencyGrid parse_frequency_grid(const json& obj, std::string_view context) {
  check_keys(obj, {"start_thz", "step_thz", "count"}, context);
  return FrequencyGrid(obj.at("start_thz").get<double>(),
                       obj.at("step_thz").get<double>(),
                       obj.at("count").get<std::size_t>());
}

TimeGrid parse_time_grid(const json& obj) {
  check_keys(obj, {"start_ps", "step_ps", "count"}, "time_grid");
  const auto step = obj.at("step_ps").get<double>();
  const auto count = obj.at("count").get<std::size_t>();
  if (obj.contains("start_ps"))
    return TimeGrid(obj.at("start_ps").get<double>(), step, count);
  return centered_time_grid(step, count);
}

PumpSpec parse_pump(const json& obj) {
  if (!obj.is_object()) throw ParseError("pump must be an object");
  PumpSpec pump;
  const auto type = obj.at("type").get<std::string>();
  pump.label = obj.value("label", std::string{});
  if (type == "gaussian") {
    check_keys(obj, {"type", "label", "center_thz", "fwhm_thz"}, "gaussian pump");
    pump.kind = PumpKind::gaussian;
    pump.center_thz = obj.at("center_thz").get<double>();
    pump.fwhm_thz = obj.at("fwhm_thz").get<double>();
  } else if (type == "comb") {
    check_keys(obj, {"type", "label", "lines"}, "comb pump");
    pump.kind = PumpKind::comb;
    for (const auto& line : obj.at("lines")) {
      check_keys(line, {"center_thz", "fwhm_thz", "weight"}, "comb line");
      pump.lines.push_back({line.at("center_thz").get<double>(),
                            line.at("fwhm_thz").get<double>(),
                            line.at("weight").get<double>()});
    }
  } else if (type == "jsi") {
    check_keys(obj,
               {"type", "label", "center_thz", "fwhm_thz", "phasematch_fwhm_thz",
                "signal_grid", "idler_grid", "write_jsi"},
               "jsi pump");
    pump.kind = PumpKind::jsi;
    pump.center_thz = obj.at("center_thz").get<double>();
    pump.fwhm_thz = obj.at("fwhm_thz").get<double>();
    pump.phasematch_fwhm_thz = obj.at("phasematch_fwhm_thz").get<double>();
    if (obj.contains("signal_grid"))
      pump.signal_grid = parse_frequency_grid(obj.at("signal_grid"), "signal_grid");
    if (obj.contains("idler_grid"))
      pump.idler_grid = parse_frequency_grid(obj.at("idler_grid"), "idler_grid");
    pump.write_jsi = obj.value("write_jsi", false);
  } else {
    throw ParseError("unknown pump type '" + type + "'");
  }
  return pump;
}

NoiseConfig parse_noise(const json& obj) {
  check_keys(obj, {"pairs_per_bin", "seed", "dark_rate", "efficiency", "model"}, "noise");
  NoiseConfig config;
  config.pairs_per_bin = obj.value("pairs_per_bin", config.pairs_per_bin);
  config.seed = obj.value("seed", config.seed);
  config.dark_rate = obj.value("dark_rate", config.dark_rate);
  config.efficiency = obj.value("efficiency", config.efficiency);
  const auto model = obj.value("model", std::string("binomial"));
  if (model == "binomial")
    config.model = CountingModel::binomial;
  else if (model == "expected")
    config.model = CountingModel::expected;
  else
    throw ParseError("unknown counting model '" + model + "'");
  config.validate();
  return config;
}

ordered_json grid_to_json(const FrequencyGrid& grid) {
  ordered_json out;
  out["start_thz"] = grid.start();
  out["step_thz"] = grid.step();
  out["count"] = grid.count();
  return out;
}

ordered_json pump_to_json(const PumpSpec& pump) {
  ordered_json out;
  switch (pump.kind) {
    case PumpKind::gaussian:
      out["type"] = "gaussian";
      break;
    case PumpKind::comb:
      out["type"] = "comb";
      break;
    case PumpKind::jsi:
      out["type"] = "jsi";
      break;
  }
  if (!pump.label.empty()) out["label"] = pump.label;
  if (pump.kind == PumpKind::comb) {
    out["lines"] = ordered_json::array();
    for (const auto& line : pump.lines)
      out["lines"].push_back(
          {{"center_thz", line.center_thz}, {"fwhm_thz", line.fwhm_thz}, {"weight", line.weight}});
    return out;
  }
  out["center_thz"] = pump.center_thz;
  out["fwhm_thz"] = pump.fwhm_thz;
  if (pump.kind == PumpKind::jsi) {
    out["phasematch_fwhm_thz"] = pump.phasematch_fwhm_thz;
    if (pump.signal_grid) out["signal_grid"] = grid_to_json(*pump.signal_grid);
    if (pump.idler_grid) out["idler_grid"] = grid_to_json(*pump.idler_grid);
    if (pump.write_jsi) out["write_jsi"] = true;
  }
  return out;
}

double pump_band_top(const Scenario& scenario) { return scenario.spectral_grid.stop(); }

}  // namespace

Scenario parse_scenario(std::string_view json_text,
                        const std::filesystem::path& base_dir) {
  try {
    const auto doc = json::parse(json_text);
    check_keys(doc,
               {"version", "name", "spectral_grid", "pump", "sample", "time_grid",
                "noise", "study", "recovery", "outputs"},
               "scenario");
    Scenario s;
    s.version = doc.at("version").get<int>();
    if (s.version != kScenarioVersion)
      throw ParseError("unsupported scenario version " + std::to_string(s.version));
    s.name = doc.value("name", std::string{});
    s.spectral_grid = parse_frequency_grid(doc.at("spectral_grid"), "spectral_grid");

    const auto& pump = doc.at("pump");
    if (pump.is_array()) {
      for (const auto& entry : pump) s.pumps.push_back(parse_pump(entry));
      if (s.pumps.empty()) throw ParseError("pump list is empty");
      for (std::size_t i = 0; i < s.pumps.size(); ++i)
        if (s.pumps[i].label.empty()) s.pumps[i].label = "pump_" + std::to_string(i);
    } else {
      s.pumps.push_back(parse_pump(pump));
    }

    if (doc.contains("sample")) {
      const auto& sample = doc.at("sample");
      if (sample.is_string()) {
        std::filesystem::path path = sample.get<std::string>();
        if (path.is_relative()) path = base_dir / path;
        if (!std::filesystem::is_regular_file(path))
          throw ParseError("sample file " + path.string() + " not found");
        s.sample = io::sample_from_json(io::read_text_file(path));
      } else {
        s.sample = io::sample_from_json(sample.dump());
      }
    }
    if (doc.contains("time_grid")) s.time_grid = parse_time_grid(doc.at("time_grid"));
    if (doc.contains("noise")) s.noise = parse_noise(doc.at("noise"));
    if (doc.contains("study")) {
      const auto& study = doc.at("study");
      check_keys(study, {"trial_counts", "repeats"}, "study");
      if (study.contains("trial_counts"))
        s.study.trial_counts = study.at("trial_counts").get<std::vector<std::uint64_t>>();
      s.study.repeats = study.value("repeats", s.study.repeats);
    }
    if (doc.contains("recovery")) {
      const auto& rec = doc.at("recovery");
      check_keys(rec, {"window", "downshift_thz", "min_prominence"}, "recovery");
      if (rec.contains("window"))
        s.recovery.window = parse_window_kind(rec.at("window").get<std::string>());
      if (rec.contains("downshift_thz"))
        s.recovery.downshift_thz = rec.at("downshift_thz").get<double>();
      if (rec.contains("min_prominence"))
        s.recovery.min_prominence = rec.at("min_prominence").get<double>();
    }
    s.outputs = doc.value("outputs", s.outputs);
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::is_regular_file(path))
    throw ParseError("scenario file " + path.string() + " not found");
  const auto text = io::read_text_file(path);
  return parse_scenario(text, path.parent_path());
}

std::string scenario_to_json(const Scenario& s) {
  ordered_json doc;
  doc["version"] = s.version;
  doc["name"] = s.name;
  doc["spectral_grid"] = grid_to_json(s.spectral_grid);
  if (s.pumps.size() == 1 && s.pumps.front().label.empty()) {
    doc["pump"] = pump_to_json(s.pumps.front());
  } else {
    doc["pump"] = ordered_json::array();
    for (const auto& p : s.pumps) doc["pump"].push_back(pump_to_json(p));
  }
  doc["sample"] = ordered_json::parse(io::sample_to_json(s.sample));
  doc["time_grid"] = {{"start_ps", s.time_grid.start()},
                      {"step_ps", s.time_grid.step()},
                      {"count", s.time_grid.count()}};
  if (s.noise) {
    ordered_json noise;
    noise["pairs_per_bin"] = s.noise->pairs_per_bin;
    noise["seed"] = s.noise->seed;
    noise["dark_rate"] = s.noise->dark_rate;
    noise["efficiency"] = s.noise->efficiency;
    noise["model"] = s.noise->model == CountingModel::binomial ? "binomial" : "expected";
    doc["noise"] = noise;
  }
  doc["study"] = {{"trial_counts", s.study.trial_counts}, {"repeats", s.study.repeats}};
  ordered_json rec;
  rec["window"] = s.recovery.window == WindowKind::hann ? "hann" : "rect";
  if (s.recovery.downshift_thz) rec["downshift_thz"] = *s.recovery.downshift_thz;
  if (s.recovery.min_prominence) rec["min_prominence"] = *s.recovery.min_prominence;
  doc["recovery"] = rec;
  doc["outputs"] = s.outputs;
  return doc.dump(2) + "\n";
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.pumps.empty()) throw InvalidArgument("scenario has no pump");
  const double top = pump_band_top(scenario);
  const double nyquist = nyquist_frequency(scenario.time_grid);
  if (top >= nyquist)
    throw AliasingError("spectral grid reaches " + std::to_string(top) +
                        " THz but the delay step only resolves up to " +
                        std::to_string(nyquist) + " THz");
  std::vector<std::string> labels;
  for (const auto& pump : scenario.pumps) {
    if (scenario.pumps.size() > 1) {
      if (std::find(labels.begin(), labels.end(), pump.label) != labels.end())
        throw InvalidArgument("duplicate pump label '" + pump.label + "'");
      labels.push_back(pump.label);
    }
  }
}

std::pair<FrequencyGrid, FrequencyGrid> default_jsi_grids(const Scenario& scenario,
                                                          const PumpSpec& pump) {
  const auto& grid = scenario.spectral_grid;
  const double step = grid.step();
  const double half_span = 1.5 * (pump.fwhm_thz + pump.phasematch_fwhm_thz);
  const auto half_points = static_cast<long long>(std::ceil(half_span / step));
  const auto j = std::llround((0.5 * pump.center_thz - 0.5 * grid.start()) / step) -
                 half_points;
  const double start = 0.5 * grid.start() + static_cast<double>(j) * step;
  const auto count = static_cast<std::size_t>(2 * half_points + 1);
  FrequencyGrid axis(start, step, count);
  return {axis, axis};
}

SumFrequencySpectrum build_pump_spectrum(const Scenario& scenario,
                                         const PumpSpec& pump, unsigned threads) {
  switch (pump.kind) {
    case PumpKind::gaussian:
      return gaussian_pump_spectrum(scenario.spectral_grid, pump.center_thz,
                                    pump.fwhm_thz);
    case PumpKind::comb:
      return comb_pump_spectrum(scenario.spectral_grid, pump.lines);
    case PumpKind::jsi: {
      auto [signal, idler] = default_jsi_grids(scenario, pump);
      if (pump.signal_grid) signal = *pump.signal_grid;
      if (pump.idler_grid) idler = *pump.idler_grid;
      const auto jsi = gaussian_jsi(signal, idler, pump.center_thz, pump.fwhm_thz,
                                    pump.phasematch_fwhm_thz, threads);
      return sum_frequency_marginal(jsi, scenario.spectral_grid);
    }
  }
  throw InvalidArgument("unknown pump kind");
}

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "gaussian", "jsi"};
}

Scenario preset(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  s.outputs = "out/" + s.name;
  s.noise = NoiseConfig{10000, 1, 0.0, 1.0, CountingModel::binomial};

  if (name == "fig2") {
    // Three narrow pump lines; each gives its own interferogram whose period
    // is the inverse line frequency.
    s.spectral_grid = FrequencyGrid(739.8, 0.001, 1001);
    for (double nu : {740.215, 740.250, 740.300}) {
      PumpSpec p;
      p.kind = PumpKind::gaussian;
      p.center_thz = nu;
      p.fwhm_thz = 0.05;
      p.label = "line_" + io::format_number(nu);
      s.pumps.push_back(p);
    }
  } else if (name == "fig3") {
    // Five-line comb with unequal weights.
    s.spectral_grid = FrequencyGrid(739.0, 0.001, 2501);
    PumpSpec p;
    p.kind = PumpKind::comb;
    p.lines = {{739.55, 0.08, 0.6},
               {739.90, 0.08, 1.0},
               {740.25, 0.08, 0.45},
               {740.60, 0.08, 0.8},
               {740.95, 0.08, 0.3}};
    s.pumps.push_back(p);
  } else if (name == "fig4") {
    // Broad pump through a sample with three two-photon levels.
    s.spectral_grid = FrequencyGrid(735.75, 0.005, 1801);
    PumpSpec p;
    p.kind = PumpKind::gaussian;
    p.center_thz = 740.25;
    p.fwhm_thz = 1.5;
    s.pumps.push_back(p);
    s.sample = Sample("three-level", {{739.70, 0.20, 0.8},
                                      {740.25, 0.30, 0.5},
                                      {740.85, 0.25, 0.3}});
  } else if (name == "gaussian") {
    s.spectral_grid = FrequencyGrid(739.5, 0.001, 1501);
    PumpSpec p;
    p.kind = PumpKind::gaussian;
    p.center_thz = 740.25;
    p.fwhm_thz = 0.1;
    s.pumps.push_back(p);
  } else if (name == "jsi") {
    s.spectral_grid = FrequencyGrid(739.75, 0.002, 501);
    PumpSpec p;
    p.kind = PumpKind::jsi;
    p.center_thz = 740.25;
    p.fwhm_thz = 0.1;
    p.phasematch_fwhm_thz = 0.4;
    s.pumps.push_back(p);
  } else {
    throw InvalidArgument("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace tpex
