#include "tpex/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "parallel.hpp"
#include "tpex/errors.hpp"

namespace tpex {

namespace {

constexpr double kFourLn2 = 4.0 * std::numbers::ln2;

double checked_sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

bool covers(const FrequencyGrid& grid, double center, double fwhm) {
  return grid.start() <= center - 3.0 * fwhm &&
         grid.stop() >= center + 3.0 * fwhm;
}

std::vector<double> unit_area_line(const FrequencyGrid& grid, double center,
                                   double fwhm) {
  std::vector<double> line(grid.count());
  for (std::size_t k = 0; k < grid.count(); ++k)
    line[k] = gaussian_profile(grid.at(k), center, fwhm);
  const double area = grid.step() * checked_sum(line);
  if (!(area > 0.0))
    throw InvalidArgument("line at " + std::to_string(center) +
                          " THz has no support on the grid");
  for (double& v : line) v /= area;
  return line;
}

}  // namespace

FrequencyGrid::FrequencyGrid(double start_thz, double step_thz,
                             std::size_t count)
    : start_(start_thz), step_(step_thz), count_(count) {
  if (!std::isfinite(start_thz) || !std::isfinite(step_thz))
    throw InvalidArgument("frequency grid bounds must be finite");
  if (!(step_thz > 0.0))
    throw InvalidArgument("frequency grid step must be positive");
  if (count < 2) throw InvalidArgument("frequency grid needs at least 2 points");
}

std::vector<double> FrequencyGrid::values() const {
  std::vector<double> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = at(k);
  return out;
}

std::size_t FrequencyGrid::nearest_index(double nu_thz) const noexcept {
  const double position = std::round((nu_thz - start_) / step_);
  if (!(position > 0.0)) return 0;
  if (position >= static_cast<double>(count_ - 1)) return count_ - 1;
  return static_cast<std::size_t>(position);
}

bool FrequencyGrid::contains(double nu_thz) const noexcept {
  return nu_thz >= start_ - 0.5 * step_ && nu_thz <= stop() + 0.5 * step_;
}

FrequencyGrid make_frequency_grid(double start_thz, double step_thz,
                                  std::size_t count) {
  return FrequencyGrid(start_thz, step_thz, count);
}

double SumFrequencySpectrum::mass() const noexcept {
  return grid.step() * checked_sum(weights);
}

std::size_t SumFrequencySpectrum::argmax() const noexcept {
  // max_element returns the first maximum, i.e. ties go to lower frequency.
  return static_cast<std::size_t>(
      std::max_element(weights.begin(), weights.end()) - weights.begin());
}

SumFrequencySpectrum normalized(SumFrequencySpectrum spectrum) {
  const double m = spectrum.mass();
  if (!(m > 0.0) || !std::isfinite(m))
    throw InvalidArgument("cannot normalize a spectrum with zero mass");
  for (double& w : spectrum.weights) w /= m;
  spectrum.normalized = true;
  return spectrum;
}

double JointSpectralIntensity::mass() const noexcept {
  return signal_grid.step() * idler_grid.step() * checked_sum(density);
}

double gaussian_profile(double nu_thz, double center_thz,
                        double fwhm_thz) noexcept {
  const double x = (nu_thz - center_thz) / fwhm_thz;
  return std::exp(-kFourLn2 * x * x);
}

SumFrequencySpectrum gaussian_pump_spectrum(const FrequencyGrid& grid,
                                            double center_thz,
                                            double fwhm_thz) {
  const CombLine line{center_thz, fwhm_thz, 1.0};
  return comb_pump_spectrum(grid, std::span(&line, 1));
}

SumFrequencySpectrum comb_pump_spectrum(const FrequencyGrid& grid,
                                        std::span<const CombLine> lines) {
  if (lines.empty()) throw InvalidArgument("comb needs at least one line");
  double total_weight = 0.0;
  for (const auto& line : lines) {
    if (!(line.fwhm_thz > 0.0))
      throw InvalidArgument("line fwhm must be positive");
    if (!(line.weight >= 0.0) || !std::isfinite(line.weight))
      throw InvalidArgument("line weight must be non-negative");
    total_weight += line.weight;
  }
  if (!(total_weight > 0.0))
    throw InvalidArgument("comb needs at least one line with positive weight");

  SumFrequencySpectrum out{grid, std::vector<double>(grid.count(), 0.0)};
  for (const auto& line : lines) {
    if (line.weight == 0.0) continue;
    if (!covers(grid, line.center_thz, line.fwhm_thz)) out.truncated = true;
    const auto shape = unit_area_line(grid, line.center_thz, line.fwhm_thz);
    const double w = line.weight / total_weight;
    for (std::size_t k = 0; k < shape.size(); ++k) out.weights[k] += w * shape[k];
  }
  out = normalized(std::move(out));
  return out;
}

JointSpectralIntensity gaussian_jsi(const FrequencyGrid& signal_grid,
                                    const FrequencyGrid& idler_grid,
                                    double pump_center_thz,
                                    double pump_fwhm_thz,
                                    double phasematch_fwhm_thz,
                                    unsigned threads) {
  if (!(pump_fwhm_thz > 0.0) || !(phasematch_fwhm_thz > 0.0))
    throw InvalidArgument("JSI widths must be positive");

  const std::size_t rows = signal_grid.count();
  const std::size_t cols = idler_grid.count();
  JointSpectralIntensity jsi{signal_grid, idler_grid,
                             std::vector<double>(rows * cols)};
  detail::parallel_for(rows, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const double nu_s = signal_grid.at(s);
      for (std::size_t i = 0; i < cols; ++i) {
        const double nu_i = idler_grid.at(i);
        jsi.density[s * cols + i] =
            gaussian_profile(nu_s + nu_i, pump_center_thz, pump_fwhm_thz) *
            gaussian_profile(nu_s - nu_i, 0.0, phasematch_fwhm_thz);
      }
    }
  });

  const double m = jsi.mass();
  if (!(m > 0.0))
    throw InvalidArgument("JSI has no support on the given grids");
  for (double& d : jsi.density) d /= m;
  return jsi;
}

SumFrequencySpectrum sum_frequency_marginal(const JointSpectralIntensity& jsi,
                                            const FrequencyGrid& output_grid) {
  const std::size_t rows = jsi.signal_grid.count();
  const std::size_t cols = jsi.idler_grid.count();
  if (jsi.density.size() != rows * cols)
    throw InvalidArgument("JSI density does not match its grids");

  const double cell = jsi.signal_grid.step() * jsi.idler_grid.step();
  std::vector<double> binned(output_grid.count(), 0.0);
  double inside = 0.0;
  double outside = 0.0;
  for (std::size_t s = 0; s < rows; ++s) {
    const double nu_s = jsi.signal_grid.at(s);
    for (std::size_t i = 0; i < cols; ++i) {
      const double d = jsi.density[s * cols + i];
      if (d < 0.0 || !std::isfinite(d))
        throw InvalidArgument("JSI density must be finite and non-negative");
      if (d == 0.0) continue;
      const double nu_p = nu_s + jsi.idler_grid.at(i);
      const double mass = d * cell;
      if (!output_grid.contains(nu_p)) {
        outside += mass;
        continue;
      }
      binned[output_grid.nearest_index(nu_p)] += mass;
      inside += mass;
    }
  }
  const double total = inside + outside;
  if (!(total > 0.0)) throw InvalidArgument("JSI carries no mass");
  if (outside > 1e-6 * total)
    throw CoverageError("output grid misses " + std::to_string(outside / total) +
                        " of the sum-frequency mass");

  SumFrequencySpectrum out{output_grid, std::move(binned)};
  for (double& w : out.weights) w /= output_grid.step();
  return normalized(std::move(out));
}

SumFrequencySpectrum resample(const SumFrequencySpectrum& spectrum,
                              const FrequencyGrid& grid) {
  SumFrequencySpectrum out{grid, std::vector<double>(grid.count(), 0.0)};
  const auto& src = spectrum.grid;
  for (std::size_t k = 0; k < grid.count(); ++k) {
    const double x = (grid.at(k) - src.start()) / src.step();
    if (x < 0.0 || x > static_cast<double>(src.count() - 1)) continue;
    const auto lo = std::min(static_cast<std::size_t>(x), src.count() - 2);
    const double frac = x - static_cast<double>(lo);
    out.weights[k] = (1.0 - frac) * spectrum.weights[lo] +
                     frac * spectrum.weights[lo + 1];
  }
  out.truncated = spectrum.truncated;
  return out;
}

double measured_fwhm(const SumFrequencySpectrum& spectrum) {
  const auto& w = spectrum.weights;
  const std::size_t peak = spectrum.argmax();
  const double half = 0.5 * w[peak];
  if (!(half > 0.0)) return 0.0;

  std::size_t left = peak;
  while (left > 0 && w[left - 1] > half) --left;
  if (left == 0) return 0.0;
  std::size_t right = peak;
  while (right + 1 < w.size() && w[right + 1] > half) ++right;
  if (right + 1 == w.size()) return 0.0;

  // Crossings lie in (left - 1, left] and [right, right + 1).
  const double x_left =
      static_cast<double>(left - 1) + (half - w[left - 1]) / (w[left] - w[left - 1]);
  const double x_right =
      static_cast<double>(right) + (w[right] - half) / (w[right] - w[right + 1]);
  return (x_right - x_left) * spectrum.grid.step();
}

}  // namespace tpex
