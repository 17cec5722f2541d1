#include "tpex/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "tpex/errors.hpp"

namespace tpex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> cycles_phasor(double cycles) {
  return std::polar(1.0, kTwoPi * (cycles - std::round(cycles)));
}

long long floor_half(std::size_t n) { return static_cast<long long>(n / 2); }

// Position of the parabola vertex through (-1, y0), (0, y1), (1, y2), and the
// value there. Falls back to the centre sample when the samples are not
// concave.
std::pair<double, double> parabolic_vertex(double y0, double y1, double y2) {
  const double denom = y0 - 2.0 * y1 + y2;
  if (!(denom < 0.0)) return {0.0, y1};
  const double delta = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
  return {delta, y1 - 0.25 * (y0 - y2) * delta};
}

}  // namespace

WindowKind parse_window_kind(std::string_view name) {
  if (name == "rect" || name == "rectangular") return WindowKind::rectangular;
  if (name == "hann") return WindowKind::hann;
  throw InvalidArgument("unknown window '" + std::string(name) +
                        "' (expected hann or rect)");
}

std::complex<double> RecoveredSpectrum::at_physical_bin(long long k) const noexcept {
  const auto n = static_cast<long long>(amplitudes.size());
  const auto shift = static_cast<long long>(std::llround(offset_thz / grid.step()));
  long long j = k - shift + floor_half(amplitudes.size());
  j %= n;
  if (j < 0) j += n;
  return amplitudes[static_cast<std::size_t>(j)];
}

RecoveredSpectrum fourier_recover(const CorrelationTrace& trace,
                                  const RecoveryOptions& options) {
  const std::size_t n = trace.values.size();
  if (n < 2 || n != trace.grid.count())
    throw InvalidArgument("trace needs at least two samples on its grid");

  const double dt = trace.grid.step();
  const double t0 = trace.grid.start();
  const double window = trace.grid.window();
  const double bin = 1.0 / window;
  const auto size = static_cast<long long>(n);

  long long shift = 0;
  if (options.downshift_thz) {
    if (!std::isfinite(*options.downshift_thz))
      throw InvalidArgument("downshift frequency must be finite");
    shift = std::llround(*options.downshift_thz / bin);
  }

  std::vector<std::complex<double>> input(n);
  const double centre = t0 + static_cast<double>(n / 2) * dt;
  // Cycles of the reference frequency at t0, reduced so the per-sample phase
  // (shift * n mod N) / N stays exact.
  const double start_cycles = static_cast<double>(shift) * t0 / window;
  for (std::size_t i = 0; i < n; ++i) {
    double value = trace.values[i];
    if (options.window == WindowKind::hann) {
      const double c = std::cos(std::numbers::pi * (trace.grid.at(i) - centre) / window);
      value *= c * c;
    }
    std::complex<double> sample(value, 0.0);
    if (shift != 0) {
      const long long turns = ((shift % size) * static_cast<long long>(i)) % size;
      sample *= cycles_phasor(start_cycles + static_cast<double>(turns) /
                                                 static_cast<double>(size));
    }
    input[i] = sample;
  }

  const auto transformed = detail::dft(input, detail::FftSign::positive);

  RecoveredSpectrum out{
      FrequencyGrid(-static_cast<double>(floor_half(n)) * bin, bin, n),
      std::vector<std::complex<double>>(n),
      static_cast<double>(shift) * bin,
      window,
      dt,
  };
  for (std::size_t j = 0; j < n; ++j) {
    const long long b = static_cast<long long>(j) - floor_half(n);
    const auto k = static_cast<std::size_t>(((b % size) + size) % size);
    // Re-reference the DFT (taken from n = 0) to the actual start delay.
    const double cycles = static_cast<double>(b) * t0 / window;
    out.amplitudes[j] = dt * cycles_phasor(cycles) * transformed[k];
  }
  return out;
}

double hermitian_defect(const RecoveredSpectrum& recovered) {
  const std::size_t n = recovered.size();
  double scale = 0.0;
  for (const auto& a : recovered.amplitudes) scale = std::max(scale, std::abs(a));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  // Bins k and -k pair up for k < ceil(N/2); the even-N Nyquist bin has no
  // partner.
  const auto limit = static_cast<long long>((n + 1) / 2);
  for (long long k = 0; k < limit; ++k) {
    const auto pos = recovered.at_physical_bin(k);
    const auto neg = recovered.at_physical_bin(-k);
    worst = std::max(worst, std::abs(neg - std::conj(pos)));
  }
  return worst / scale;
}

SumFrequencySpectrum fold_one_sided(const RecoveredSpectrum& recovered,
                                    bool renormalize) {
  const double defect = hermitian_defect(recovered);
  if (defect > 1e-6)
    throw AsymmetryError("recovered spectrum breaks Hermitian symmetry by " +
                         std::to_string(defect));

  const std::size_t n = recovered.size();
  const std::size_t half = n / 2;
  SumFrequencySpectrum out{FrequencyGrid(0.0, recovered.bin_width(), half + 1),
                           std::vector<double>(half + 1)};
  out.weights[0] = std::abs(recovered.at_physical_bin(0));
  for (std::size_t k = 1; k <= half; ++k) {
    const auto kk = static_cast<long long>(k);
    if (n % 2 == 0 && k == half)
      out.weights[k] = std::abs(recovered.at_physical_bin(-kk));
    else
      out.weights[k] = std::abs(recovered.at_physical_bin(kk)) +
                       std::abs(recovered.at_physical_bin(-kk));
  }
  if (renormalize) return normalized(std::move(out));
  return out;
}

std::string_view to_string(FeatureKind kind) noexcept {
  return kind == FeatureKind::peak ? "peak" : "dip";
}

PeakReport detect_features(const SumFrequencySpectrum& spectrum,
                           const SumFrequencySpectrum* baseline,
                           double min_prominence) {
  if (!(min_prominence > 0.0))
    throw InvalidArgument("min_prominence must be positive");
  if (baseline && !(baseline->grid == spectrum.grid))
    throw InvalidArgument("baseline grid differs from the spectrum grid");

  const std::size_t n = spectrum.weights.size();
  std::vector<double> signal(spectrum.weights);
  if (baseline)
    for (std::size_t k = 0; k < n; ++k)
      signal[k] = baseline->weights[k] - spectrum.weights[k];
  const auto kind = baseline ? FeatureKind::dip : FeatureKind::peak;
  const auto& grid = spectrum.grid;

  PeakReport report;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (!(signal[i] > signal[i - 1])) {
      ++i;
      continue;
    }
    // Walk across a plateau; it is a maximum only if it then descends.
    std::size_t plateau_end = i;
    while (plateau_end + 1 < n && signal[plateau_end + 1] == signal[i]) ++plateau_end;
    if (plateau_end + 1 >= n || !(signal[plateau_end + 1] < signal[i])) {
      i = plateau_end + 1;
      continue;
    }

    const double h = signal[i];
    double left_min = h;
    std::size_t left = i;
    while (left > 0 && signal[left - 1] <= h) {
      --left;
      left_min = std::min(left_min, signal[left]);
    }
    double right_min = h;
    std::size_t right = plateau_end;
    while (right + 1 < n && signal[right + 1] <= h) {
      ++right;
      right_min = std::min(right_min, signal[right]);
    }
    const double base = std::max(left_min, right_min);
    const double prominence = h - base;

    if (prominence >= min_prominence) {
      const double level = h - 0.5 * prominence;
      std::size_t a = i;
      while (a > left && signal[a - 1] > level) --a;
      double x_left = static_cast<double>(a);
      if (a > 0 && signal[a - 1] <= level)
        x_left = static_cast<double>(a - 1) +
                 (level - signal[a - 1]) / (signal[a] - signal[a - 1]);
      std::size_t b = plateau_end;
      while (b < right && signal[b + 1] > level) ++b;
      double x_right = static_cast<double>(b);
      if (b + 1 < n && signal[b + 1] <= level)
        x_right = static_cast<double>(b) +
                  (signal[b] - level) / (signal[b] - signal[b + 1]);

      auto [delta, peak_value] =
          parabolic_vertex(signal[i - 1], signal[i], signal[i + 1]);
      if (plateau_end > i) delta = 0.0;
      Feature f;
      f.center_thz = grid.at(i) + delta * grid.step();
      f.height = kind == FeatureKind::peak ? std::max(peak_value, 0.0) : peak_value;
      f.fwhm_thz = (x_right - x_left) * grid.step();
      f.kind = kind;
      f.prominence = prominence;
      report.push_back(f);
    }
    i = plateau_end + 1;
  }
  return report;
}

double resolution_limit(double window_ps) {
  if (!(window_ps > 0.0)) throw InvalidArgument("window must be positive");
  return 1.0 / window_ps;
}

SpectrumDistance spectrum_distance(const SumFrequencySpectrum& a,
                                   const SumFrequencySpectrum& b) {
  if (!(a.grid == b.grid) || a.weights.size() != b.weights.size())
    throw InvalidArgument("spectra use different grids");
  const double ma = a.mass();
  const double mb = b.mass();
  if (!(ma > 0.0) || !(mb > 0.0))
    throw InvalidArgument("cannot compare spectra with zero mass");

  double diff2 = 0.0, ref2 = 0.0, diff_max = 0.0, ref_max = 0.0;
  for (std::size_t k = 0; k < a.weights.size(); ++k) {
    const double x = a.weights[k] / ma;
    const double y = b.weights[k] / mb;
    diff2 += (x - y) * (x - y);
    ref2 += y * y;
    diff_max = std::max(diff_max, std::abs(x - y));
    ref_max = std::max(ref_max, std::abs(y));
  }
  return {std::sqrt(diff2 / ref2), diff_max / ref_max};
}

std::vector<double> integrated_line_areas(const SumFrequencySpectrum& spectrum,
                                          const std::vector<double>& centers_thz,
                                          double outer_half_width_thz) {
  if (!std::is_sorted(centers_thz.begin(), centers_thz.end()))
    throw InvalidArgument("line centers must be ascending");
  if (!(outer_half_width_thz > 0.0))
    throw InvalidArgument("outer half width must be positive");
  std::vector<double> areas(centers_thz.size(), 0.0);
  const auto& grid = spectrum.grid;
  for (std::size_t j = 0; j < centers_thz.size(); ++j) {
    const double lo = j == 0 ? centers_thz[j] - outer_half_width_thz
                             : 0.5 * (centers_thz[j - 1] + centers_thz[j]);
    const double hi = j + 1 == centers_thz.size()
                          ? centers_thz[j] + outer_half_width_thz
                          : 0.5 * (centers_thz[j] + centers_thz[j + 1]);
    double total = 0.0;
    for (std::size_t k = 0; k < grid.count(); ++k) {
      const double nu = grid.at(k);
      if (nu >= lo && nu < hi) total += spectrum.weights[k];
    }
    areas[j] = total * grid.step();
  }
  return areas;
}

}  // namespace tpex
