#include "tpex/noise.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"
#include "tpex/errors.hpp"

namespace tpex {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream,
                            std::uint64_t bin) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ bin);
}

// SplitMix64 as a UniformRandomBitGenerator: cheap to construct, which
// matters with one generator per delay bin.
class KeyedEngine {
public:
  using result_type = std::uint64_t;
  explicit KeyedEngine(std::uint64_t key) noexcept : state_(key) {}
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept {
    const auto out = splitmix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return out;
  }

private:
  std::uint64_t state_;
};

struct PeakEstimate {
  double height = 0.0;
  double center = 0.0;
};

PeakEstimate strongest_peak(const SumFrequencySpectrum& folded,
                            const StudyOptions& options) {
  const auto& grid = folded.grid;
  const auto& w = folded.weights;
  std::size_t lo = 1;
  std::size_t hi = w.size() - 1;
  if (options.band_lo_thz) lo = std::max(lo, grid.nearest_index(*options.band_lo_thz));
  if (options.band_hi_thz) hi = std::min(hi, grid.nearest_index(*options.band_hi_thz));
  if (lo > hi) throw InvalidArgument("peak search band is empty");

  std::size_t best = lo;
  for (std::size_t k = lo + 1; k <= hi; ++k)
    if (w[k] > w[best]) best = k;

  PeakEstimate out{w[best], grid.at(best)};
  if (best > 0 && best + 1 < w.size()) {
    const double y0 = w[best - 1], y1 = w[best], y2 = w[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom < 0.0) {
      const double delta = std::clamp(0.5 * (y0 - y2) / denom, -0.5, 0.5);
      out.center += delta * grid.step();
      out.height = y1 - 0.25 * (y0 - y2) * delta;
    }
  }
  return out;
}

std::pair<double, double> mean_and_std(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  if (*lo == *hi) return {*lo, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var)};
}

}  // namespace

void NoiseConfig::validate() const {
  if (pairs_per_bin == 0) throw InvalidArgument("pairs_per_bin must be positive");
  if (!(dark_rate >= 0.0) || !std::isfinite(dark_rate))
    throw InvalidArgument("dark_rate must be non-negative");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw InvalidArgument("efficiency must lie in (0, 1]");
}

CountSeries sample_counts(const Interferogram& interferogram,
                          const NoiseConfig& config, std::uint64_t stream) {
  config.validate();
  const std::size_t n = interferogram.values.size();
  CountSeries out{std::vector<CountRecord>(n)};
  std::vector<char> clamped(n, 0);
  const double gain = config.efficiency * config.efficiency;
  const std::uint64_t pairs = config.pairs_per_bin;

  detail::parallel_for(n, config.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double p = gain * interferogram.values[i] + config.dark_rate;
      if (p > 1.0) {
        p = 1.0;
        clamped[i] = 1;
      }
      p = std::max(p, 0.0);
      std::uint64_t c = 0;
      if (config.model == CountingModel::expected) {
        c = static_cast<std::uint64_t>(std::llround(p * static_cast<double>(pairs)));
      } else {
        KeyedEngine engine(substream_key(config.seed, stream, i));
        std::binomial_distribution<std::uint64_t> draw(pairs, p);
        c = draw(engine);
      }
      out.records[i] = {interferogram.grid.at(i), std::min(c, pairs), pairs};
    }
  });
  out.clamped = std::any_of(clamped.begin(), clamped.end(), [](char c) { return c != 0; });
  return out;
}

CorrelationTrace estimate_trace(const std::vector<CountRecord>& records,
                                double efficiency, double dark_rate) {
  if (records.size() < 2) throw InvalidArgument("need at least two count records");
  if (!(efficiency > 0.0 && efficiency <= 1.0))
    throw InvalidArgument("efficiency must lie in (0, 1]");

  const double t0 = records.front().delay_ps;
  const double step =
      (records.back().delay_ps - t0) / static_cast<double>(records.size() - 1);
  if (!(step > 0.0)) throw NonUniformGridError("delays must increase");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double expected = t0 + static_cast<double>(i) * step;
    if (std::abs(records[i].delay_ps - expected) > 1e-6 * step)
      throw NonUniformGridError("count records are not on a uniform delay grid");
  }

  CorrelationTrace out{TimeGrid(t0, step, records.size()),
                       std::vector<double>(records.size()), std::nullopt};
  const double gain = efficiency * efficiency;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.pairs_sent == 0 || r.coincidences > r.pairs_sent)
      throw InvalidArgument("count record needs 0 <= coincidences <= pairs_sent");
    const double rate =
        static_cast<double>(r.coincidences) / static_cast<double>(r.pairs_sent);
    const double p = std::clamp((rate - dark_rate) / gain, 0.0, 1.0);
    out.values[i] = 2.0 * p - 1.0;
  }
  return out;
}

std::optional<double> fit_power_law(const std::vector<double>& x,
                                     const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

ScalingStudy error_scaling_study(const SumFrequencySpectrum& spectrum,
                                 const std::vector<std::uint64_t>& trial_counts,
                                 std::size_t repeats, const NoiseConfig& config,
                                 const StudyOptions& options) {
  config.validate();
  if (trial_counts.empty()) throw InvalidArgument("trial list is empty");
  if (repeats < 2) throw InvalidArgument("need at least two repeats");

  const auto exact = simulate_interferogram(spectrum, options.time_grid,
                                            SynthesisOptions{config.threads});
  ScalingStudy study;
  std::vector<double> ns, height_std, center_std;
  for (std::size_t a = 0; a < trial_counts.size(); ++a) {
    NoiseConfig run = config;
    run.pairs_per_bin = trial_counts[a];
    run.validate();
    std::vector<double> heights, centers;
    heights.reserve(repeats);
    centers.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
      const std::uint64_t stream = splitmix64(trial_counts[a]) ^ r;
      const auto counts = sample_counts(exact, run, stream);
      const auto trace = estimate_trace(counts.records, run.efficiency, run.dark_rate);
      const auto folded = fold_one_sided(fourier_recover(trace, options.recovery));
      const auto peak = strongest_peak(folded, options);
      heights.push_back(peak.height);
      centers.push_back(peak.center);
    }
    const auto [mh, sh] = mean_and_std(heights);
    const auto [mc, sc] = mean_and_std(centers);
    study.rows.push_back({trial_counts[a], sh, sc, mh, mc});
    ns.push_back(static_cast<double>(trial_counts[a]));
    height_std.push_back(sh);
    center_std.push_back(sc);
  }
  study.height_exponent = fit_power_law(ns, height_std);
  study.center_exponent = fit_power_law(ns, center_std);
  return study;
}

}  // namespace tpex
