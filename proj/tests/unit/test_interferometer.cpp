#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "tpex/errors.hpp"
#include "tpex/interferometer.hpp"

namespace tpex {
namespace {

using testing::Gen;
using testing::kLn2;
using testing::kPi;

SumFrequencySpectrum single_line(double nu0) {
  const auto g = make_frequency_grid(nu0 - 0.01, 0.001, 21);
  std::vector<double> w(g.count(), 0.0);
  w[10] = 1.0 / g.step();
  return SumFrequencySpectrum{g, w, true};
}

CorrelationTrace trace_of(const SumFrequencySpectrum& s, const TimeGrid& grid) {
  return correlation_trace(simulate_interferogram(s, grid));
}

TEST(TimeGrid, DefaultGridParameters) {
  const auto g = default_time_grid();
  EXPECT_EQ(g.count(), 65536u);
  EXPECT_DOUBLE_EQ(g.window(), 32.768);
  EXPECT_DOUBLE_EQ(g.at(g.count() / 2), 0.0);
  EXPECT_DOUBLE_EQ(nyquist_frequency(g), 1000.0);
  EXPECT_THROW(TimeGrid(0.0, 0.0, 10), InvalidArgument);
}

TEST(Interferogram, FullCoincidenceAtZeroDelay) {
  const auto grid = centered_time_grid(5e-4, 1024);
  const auto s = gaussian_pump_spectrum(make_frequency_grid(739.0, 0.002, 1001), 740.0, 0.3);
  const auto p = simulate_interferogram(s, grid);
  EXPECT_NEAR(p.values[512], 1.0, 1e-9);
  EXPECT_NEAR(correlation_trace(p).values[512], 1.0, 1e-9);
  EXPECT_NEAR(correlation_trace(p, SignConvention::literal).values[512], -1.0, 1e-9);
}

TEST(Interferogram, SingleLineIsPureCosine) {
  const double nu0 = 740.215;
  const auto grid = centered_time_grid(5e-4, 8192);
  const auto g = trace_of(single_line(nu0), grid);
  for (std::size_t n = 0; n < grid.count(); ++n) {
    const long double expected =
        std::cos(2.0L * static_cast<long double>(kPi) * nu0 * grid.at(n));
    ASSERT_NEAR(g.values[n], static_cast<double>(expected), 1e-9);
  }
}

TEST(Interferogram, MatchesDirectCosineSum) {
  Gen gen(606);
  const auto grid = centered_time_grid(5e-4, 512);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = gen.band_limited(700.0, 760.0, 0.013, 300);
    const auto g = trace_of(s, grid);
    const auto expected = testing::direct_trace(s, grid);
    for (std::size_t n = 0; n < grid.count(); ++n) ASSERT_NEAR(g.values[n], expected[n], 1e-10);
  }
}

TEST(Interferogram, AdjacentMaximaSeparatedByOnePeriod) {
  const double nu0 = 740.215;
  const TimeGrid grid(0.0, 1e-5, 1000);
  const auto p = simulate_interferogram(single_line(nu0), grid);
  std::vector<double> maxima;
  for (std::size_t n = 1; n + 1 < p.values.size(); ++n)
    if (p.values[n] > p.values[n - 1] && p.values[n] >= p.values[n + 1])
      maxima.push_back(grid.at(n));
  ASSERT_GE(maxima.size(), 3u);
  for (std::size_t j = 0; j + 1 < maxima.size(); ++j)
    EXPECT_NEAR(maxima[j + 1] - maxima[j], 1.0 / nu0, grid.step());
  EXPECT_NEAR(1.0 / nu0, 1.35096e-3, 1e-8);
}

TEST(Interferogram, SuperpositionOfCombLines) {
  const auto f = make_frequency_grid(739.0, 0.001, 2001);
  const std::vector<CombLine> lines{{739.5, 0.05, 0.7}, {740.2, 0.08, 0.2}, {740.6, 0.03, 1.1}};
  const auto grid = centered_time_grid(5e-4, 2048);
  const auto comb = simulate_interferogram(comb_pump_spectrum(f, lines), grid);
  std::vector<double> mixed(grid.count(), 0.0);
  for (const auto& line : lines) {
    const auto p = simulate_interferogram(
        comb_pump_spectrum(f, std::vector<CombLine>{{line.center_thz, line.fwhm_thz, 1.0}}), grid);
    for (std::size_t n = 0; n < grid.count(); ++n) mixed[n] += line.weight / 2.0 * p.values[n];
  }
  for (std::size_t n = 0; n < grid.count(); ++n) ASSERT_NEAR(comb.values[n], mixed[n], 1e-12);
}

TEST(Interferogram, DependsOnJsiOnlyThroughMarginal) {
  const auto sg = make_frequency_grid(369.9, 0.002, 226);
  const auto out = make_frequency_grid(2 * 369.9, 0.002, 451);
  const auto a = gaussian_jsi(sg, sg, 740.25, 0.1, 0.4);
  // Move each anti-diagonal's mass into a single cell on the edge of the matrix.
  JointSpectralIntensity b{sg, sg, std::vector<double>(a.density.size(), 0.0)};
  const std::size_t n = sg.count();
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t d = s + i;
      const std::size_t row = d < n ? d : n - 1;
      b.density[row * n + (d - row)] += a.at(s, i);
    }
  const auto grid = centered_time_grid(5e-4, 4096);
  const auto pa = simulate_interferogram(sum_frequency_marginal(a, out), grid);
  const auto pb = simulate_interferogram(sum_frequency_marginal(b, out), grid);
  for (std::size_t k = 0; k < grid.count(); ++k) ASSERT_NEAR(pa.values[k], pb.values[k], 1e-9);
}

TEST(Interferogram, RangeProperty) {
  Gen gen(707);
  const auto grid = centered_time_grid(5e-4, 1024);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen.band_limited(100.0, 990.0, gen.uniform(0.001, 0.5), 200);
    const auto p = simulate_interferogram(s, grid);
    const auto g = correlation_trace(p);
    for (std::size_t n = 0; n < grid.count(); ++n) {
      ASSERT_GE(p.values[n], -1e-9);
      ASSERT_LE(p.values[n], 1.0 + 1e-9);
      ASSERT_LE(std::abs(g.values[n]), 1.0 + 1e-9);
    }
    ASSERT_NEAR(g.values[512], 1.0, 1e-9);
  }
}

TEST(Interferogram, SubNormalizedSpectrumLosesCoincidences) {
  auto s = gaussian_pump_spectrum(make_frequency_grid(739.0, 0.002, 1001), 740.0, 0.3);
  for (double& w : s.weights) w *= 0.6;
  const auto p = simulate_interferogram(s, centered_time_grid(5e-4, 64));
  EXPECT_NEAR(p.values[32], 0.6, 1e-12);
  for (double& w : s.weights) w *= 2.0;
  EXPECT_THROW(simulate_interferogram(s, centered_time_grid(5e-4, 64)), InvalidArgument);
  s.weights[3] = -1.0;
  EXPECT_THROW(simulate_interferogram(s, centered_time_grid(5e-4, 64)), InvalidArgument);
}

TEST(Interferogram, IndependentOfThreadCount) {
  const auto s = gaussian_pump_spectrum(make_frequency_grid(739.0, 0.001, 2001), 740.0, 0.2);
  const auto grid = centered_time_grid(5e-4, 3001);
  const auto one = simulate_interferogram(s, grid, {1});
  for (unsigned threads : {2u, 3u, 7u})
    EXPECT_EQ(simulate_interferogram(s, grid, {threads}).values, one.values);
}

TEST(CorrelationTrace, InverseRoundTrip) {
  const auto s = gaussian_pump_spectrum(make_frequency_grid(739.0, 0.002, 1001), 740.0, 0.3);
  const auto p = simulate_interferogram(s, centered_time_grid(5e-4, 256));
  for (auto conv : {SignConvention::bunching, SignConvention::literal}) {
    const auto back = interferogram_from_trace(correlation_trace(p, conv), conv);
    for (std::size_t n = 0; n < p.values.size(); ++n)
      ASSERT_NEAR(back.values[n], p.values[n], 1e-15);
  }
}

// Half-maximum width of |integral F(nu) exp(2 pi i nu t) dnu| for a
// Gaussian F, by quadrature and bisection.
double quadrature_envelope_fwhm(double fwhm) {
  auto envelope = [&](double t) {
    auto re = [&](double x) { return gaussian_profile(x, 0.0, fwhm) * std::cos(2 * kPi * x * t); };
    return testing::simpson(re, -4 * fwhm, 4 * fwhm, 4000);
  };
  const double peak = envelope(0.0);
  double lo = 0.0, hi = 10.0 / fwhm;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (envelope(mid) > 0.5 * peak ? lo : hi) = mid;
  }
  return 2.0 * lo;
}

TEST(Envelope, CoherenceTimeMatchesFourierPair) {
  const auto grid = default_time_grid();
  for (double fwhm : {0.1, 0.4, 1.5}) {
    const double step = fwhm / 40.0;
    const auto f = make_frequency_grid(740.25 - 5 * fwhm, step, 401);
    const double tau = envelope_coherence_time(trace_of(gaussian_pump_spectrum(f, 740.25, fwhm), grid));
    const double analytic = 4.0 * kLn2 / (kPi * fwhm);
    EXPECT_NEAR(tau / analytic, 1.0, 2e-3) << "fwhm " << fwhm;
    EXPECT_NEAR(quadrature_envelope_fwhm(fwhm) / analytic, 1.0, 1e-6);
  }
}

TEST(Envelope, DoublingLinewidthHalvesCoherenceTime) {
  const auto grid = default_time_grid();
  double previous = 0.0;
  for (double fwhm : {0.1, 0.2, 0.4, 0.8}) {
    const auto f = make_frequency_grid(740.25 - 5 * fwhm, fwhm / 40.0, 401);
    const double tau = envelope_coherence_time(trace_of(gaussian_pump_spectrum(f, 740.25, fwhm), grid));
    if (previous > 0.0) EXPECT_NEAR(tau / previous, 0.5, 0.025);
    previous = tau;
  }
}

TEST(Envelope, MonochromaticLineNeverDecays) {
  EXPECT_THROW(envelope_coherence_time(trace_of(single_line(740.25), default_time_grid())),
               WindowTooShortError);
}

TEST(Envelope, ZeroTraceHasNoSignal) {
  const CorrelationTrace zero{centered_time_grid(5e-4, 64), std::vector<double>(64, 0.0), {}};
  EXPECT_THROW(envelope_coherence_time(zero), NoSignalError);
  EXPECT_THROW(dominant_oscillation_frequency(zero), NoSignalError);
}

TEST(DominantFrequency, WithinOneBinOfTheLine) {
  const auto grid = default_time_grid();
  for (double nu0 : {740.215, 740.25, 740.3})
    EXPECT_NEAR(dominant_oscillation_frequency(trace_of(single_line(nu0), grid)), nu0,
                1.0 / grid.window());
}

TEST(DominantFrequency, TiesGoToLowerFrequency) {
  // An impulse has a flat power spectrum.
  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  const CorrelationTrace trace{TimeGrid(0.0, 0.5, 8), impulse, {}};
  EXPECT_DOUBLE_EQ(dominant_oscillation_frequency(trace), 1.0 / 4.0);
}

TEST(DominantFrequency, RejectsAliasedBand) {
  const auto s = gaussian_pump_spectrum(make_frequency_grid(739.0, 0.01, 201), 740.0, 0.2);
  const auto coarse = centered_time_grid(1e-3, 4096);  // Nyquist 500 THz
  EXPECT_THROW(dominant_oscillation_frequency(trace_of(s, coarse)), AliasingError);
}

TEST(BandMax, HighestWeightedBin) {
  SumFrequencySpectrum s{make_frequency_grid(0.0, 1.0, 5), {0, 1, 2, 0, 0}};
  EXPECT_DOUBLE_EQ(*band_max(s), 2.0);
  s.weights.assign(5, 0.0);
  EXPECT_FALSE(band_max(s).has_value());
}

}  // namespace
}  // namespace tpex
