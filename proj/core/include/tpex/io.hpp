#pragma once

// CSV and JSON serialization of spectra, traces, counts and reports.
//
// Numbers are written in the shortest form that round-trips (std::to_chars),
// with '.' as decimal separator and LF line endings, so output is
// byte-identical for identical values regardless of locale.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tpex/absorption.hpp"
#include "tpex/interferometer.hpp"
#include "tpex/noise.hpp"
#include "tpex/recovery.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex::io {

std::string format_number(double value);

// Writers. Headers are fixed:
//   spectrum     nu_thz,weight
//   jsi          nu_s_thz,nu_i_thz,density        (row-major)
//   interferogram t_ps,p
//   trace        t_ps,g
//   recovered    nu_thz,amplitude_abs,amplitude_re,amplitude_im
//   counts       t_ps,coincidences,pairs_sent
//   scaling      n_trials,std_height,std_center
void write_spectrum_csv(std::ostream& out, const SumFrequencySpectrum& spectrum);
void write_jsi_csv(std::ostream& out, const JointSpectralIntensity& jsi);
void write_interferogram_csv(std::ostream& out, const Interferogram& interferogram);
void write_trace_csv(std::ostream& out, const CorrelationTrace& trace);
void write_recovered_csv(std::ostream& out, const RecoveredSpectrum& recovered);
void write_counts_csv(std::ostream& out, const std::vector<CountRecord>& records);
void write_scaling_csv(std::ostream& out, const ScalingStudy& study);

/// JSON array of {"center_thz", "height", "fwhm_thz", "kind"}.
std::string peaks_to_json(const PeakReport& report);

// Readers throw ParseError for malformed input and NonUniformGridError when
// an axis that must be uniform is not.
SumFrequencySpectrum read_spectrum_csv(std::istream& in);
CorrelationTrace read_trace_csv(std::istream& in);
std::vector<CountRecord> read_counts_csv(std::istream& in);
PeakReport peaks_from_json(std::string_view text);

/// {"name": str, "lines": [{"center_thz", "fwhm_thz", "strength"}]}
Sample sample_from_json(std::string_view text);
std::string sample_to_json(const Sample& sample);

// File helpers around the stream functions.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

template <typename Writer, typename Value>
void write_file(const std::filesystem::path& path, Writer writer, const Value& value);

}  // namespace tpex::io

#include <fstream>

#include "tpex/errors.hpp"

template <typename Writer, typename Value>
void tpex::io::write_file(const std::filesystem::path& path, Writer writer,
                          const Value& value) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  writer(out, value);
  if (!out) throw Error("failed writing " + path.string());
}
