#include "tpex/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tpex/errors.hpp"

namespace tpex::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    const auto end = line.find(sep, begin);
    out.push_back(line.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return out;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
    field.remove_suffix(1);
  T value{};
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty())
    throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" +
                     std::string(field) + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value))
      throw ParseError("line " + std::to_string(line_no) + ": non-finite value");
  }
  return value;
}

// Reads a CSV with the exact header; returns the data rows split into fields.
std::vector<std::vector<std::string_view>> read_table(std::istream& in,
                                                      std::string_view header,
                                                      std::vector<std::string>& storage) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw ParseError("expected CSV header '" + std::string(header) + "', got '" +
                     line + "'");
  const std::size_t columns = split(header, ',').size();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    storage.push_back(line);
  }
  std::vector<std::vector<std::string_view>> rows;
  rows.reserve(storage.size());
  for (std::size_t i = 0; i < storage.size(); ++i) {
    auto fields = split(storage[i], ',');
    if (fields.size() != columns)
      throw ParseError("line " + std::to_string(i + 2) + ": expected " +
                       std::to_string(columns) + " fields");
    rows.push_back(std::move(fields));
  }
  return rows;
}

// Start and step of an axis that must be uniform.
std::pair<double, double> uniform_axis(const std::vector<double>& axis,
                                       std::string_view what) {
  if (axis.size() < 2)
    throw ParseError(std::string(what) + " needs at least two rows");
  const double start = axis.front();
  const double step = (axis.back() - start) / static_cast<double>(axis.size() - 1);
  if (!(step > 0.0))
    throw NonUniformGridError(std::string(what) + " axis must increase");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const double expected = start + static_cast<double>(i) * step;
    if (std::abs(axis[i] - expected) > 1e-6 * step)
      throw NonUniformGridError(std::string(what) + " axis is not uniform at row " +
                                std::to_string(i + 2));
  }
  return {start, step};
}

void put(std::ostream& out, double value) { out << format_number(value); }

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buffer, ptr);
}

void write_spectrum_csv(std::ostream& out, const SumFrequencySpectrum& spectrum) {
  out << "nu_thz,weight\n";
  for (std::size_t k = 0; k < spectrum.weights.size(); ++k) {
    put(out, spectrum.grid.at(k));
    out << ',';
    put(out, spectrum.weights[k]);
    out << '\n';
  }
}

void write_jsi_csv(std::ostream& out, const JointSpectralIntensity& jsi) {
  out << "nu_s_thz,nu_i_thz,density\n";
  const std::size_t cols = jsi.idler_grid.count();
  for (std::size_t s = 0; s < jsi.signal_grid.count(); ++s) {
    for (std::size_t i = 0; i < cols; ++i) {
      put(out, jsi.signal_grid.at(s));
      out << ',';
      put(out, jsi.idler_grid.at(i));
      out << ',';
      put(out, jsi.density[s * cols + i]);
      out << '\n';
    }
  }
}

void write_interferogram_csv(std::ostream& out, const Interferogram& interferogram) {
  out << "t_ps,p\n";
  for (std::size_t n = 0; n < interferogram.values.size(); ++n) {
    put(out, interferogram.grid.at(n));
    out << ',';
    put(out, interferogram.values[n]);
    out << '\n';
  }
}

void write_trace_csv(std::ostream& out, const CorrelationTrace& trace) {
  out << "t_ps,g\n";
  for (std::size_t n = 0; n < trace.values.size(); ++n) {
    put(out, trace.grid.at(n));
    out << ',';
    put(out, trace.values[n]);
    out << '\n';
  }
}

void write_recovered_csv(std::ostream& out, const RecoveredSpectrum& recovered) {
  out << "nu_thz,amplitude_abs,amplitude_re,amplitude_im\n";
  for (std::size_t j = 0; j < recovered.size(); ++j) {
    const auto a = recovered.amplitudes[j];
    put(out, recovered.physical_frequency(j));
    out << ',';
    put(out, std::abs(a));
    out << ',';
    put(out, a.real());
    out << ',';
    put(out, a.imag());
    out << '\n';
  }
}

void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records) {
  out << "t_ps,coincidences,pairs_sent\n";
  for (const auto& r : records) {
    put(out, r.delay_ps);
    out << ',' << r.coincidences << ',' << r.pairs_sent << '\n';
  }
}

void write_scaling_csv(std::ostream& out, const ScalingStudy& study) {
  out << "n_trials,std_height,std_center\n";
  for (const auto& row : study.rows) {
    out << row.n_trials << ',';
    put(out, row.std_height);
    out << ',';
    put(out, row.std_center);
    out << '\n';
  }
}

std::string peaks_to_json(const PeakReport& report) {
  auto doc = ordered_json::array();
  for (const auto& f : report) {
    ordered_json item;
    item["center_thz"] = f.center_thz;
    item["height"] = f.height;
    item["fwhm_thz"] = f.fwhm_thz;
    item["kind"] = std::string(to_string(f.kind));
    doc.push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

PeakReport peaks_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) throw ParseError("peak report must be a JSON array");
    PeakReport report;
    for (const auto& item : doc) {
      Feature f;
      f.center_thz = item.at("center_thz").get<double>();
      f.height = item.at("height").get<double>();
      f.fwhm_thz = item.at("fwhm_thz").get<double>();
      const auto kind = item.at("kind").get<std::string>();
      if (kind == "peak")
        f.kind = FeatureKind::peak;
      else if (kind == "dip")
        f.kind = FeatureKind::dip;
      else
        throw ParseError("unknown feature kind '" + kind + "'");
      report.push_back(f);
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("peak report: ") + e.what());
  }
}

SumFrequencySpectrum read_spectrum_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_table(in, "nu_thz,weight", storage);
  std::vector<double> nu, weights;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nu.push_back(parse_field<double>(rows[i][0], i + 2));
    weights.push_back(parse_field<double>(rows[i][1], i + 2));
    if (weights.back() < 0.0)
      throw ParseError("line " + std::to_string(i + 2) + ": negative weight");
  }
  const auto [start, step] = uniform_axis(nu, "frequency");
  SumFrequencySpectrum out{FrequencyGrid(start, step, nu.size()), std::move(weights)};
  out.normalized = std::abs(out.mass() - 1.0) <= 1e-9;
  return out;
}

CorrelationTrace read_trace_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_table(in, "t_ps,g", storage);
  std::vector<double> t, g;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.push_back(parse_field<double>(rows[i][0], i + 2));
    g.push_back(parse_field<double>(rows[i][1], i + 2));
  }
  const auto [start, step] = uniform_axis(t, "delay");
  return CorrelationTrace{TimeGrid(start, step, t.size()), std::move(g), std::nullopt};
}

std::vector<CountRecord> read_counts_csv(std::istream& in) {
  std::vector<std::string> storage;
  const auto rows = read_table(in, "t_ps,coincidences,pairs_sent", storage);
  std::vector<CountRecord> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CountRecord r;
    r.delay_ps = parse_field<double>(rows[i][0], i + 2);
    r.coincidences = parse_field<std::uint64_t>(rows[i][1], i + 2);
    r.pairs_sent = parse_field<std::uint64_t>(rows[i][2], i + 2);
    if (r.pairs_sent == 0 || r.coincidences > r.pairs_sent)
      throw ParseError("line " + std::to_string(i + 2) +
                       ": need 0 <= coincidences <= pairs_sent, pairs_sent > 0");
    out.push_back(r);
  }
  return out;
}

Sample sample_from_json(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_object()) throw ParseError("sample must be a JSON object");
    for (const auto& [key, value] : doc.items())
      if (key != "name" && key != "lines")
        throw ParseError("unknown sample key '" + key + "'");
    std::vector<AbsorptionLine> lines;
    for (const auto& item : doc.at("lines")) {
      for (const auto& [key, value] : item.items())
        if (key != "center_thz" && key != "fwhm_thz" && key != "strength")
          throw ParseError("unknown absorption line key '" + key + "'");
      lines.push_back({item.at("center_thz").get<double>(),
                       item.at("fwhm_thz").get<double>(),
                       item.at("strength").get<double>()});
    }
    return Sample(doc.value("name", std::string{}), std::move(lines));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sample: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("sample: ") + e.what());
  }
}

std::string sample_to_json(const Sample& sample) {
  ordered_json doc;
  doc["name"] = sample.name();
  doc["lines"] = ordered_json::array();
  for (const auto& line : sample.lines()) {
    ordered_json item;
    item["center_thz"] = line.center_thz;
    item["fwhm_thz"] = line.fwhm_thz;
    item["strength"] = line.strength;
    doc["lines"].push_back(std::move(item));
  }
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace tpex::io
