#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "support.hpp"
#include "tpex/errors.hpp"
#include "tpex/spectral_model.hpp"

namespace tpex {
namespace {

using testing::Gen;
using testing::kLn2;
using testing::kPi;

TEST(FrequencyGrid, RejectsDegenerateAxes) {
  EXPECT_THROW(FrequencyGrid(740.0, 0.0, 10), InvalidArgument);
  EXPECT_THROW(FrequencyGrid(740.0, -0.1, 10), InvalidArgument);
  EXPECT_THROW(FrequencyGrid(740.0, 0.1, 1), InvalidArgument);
  EXPECT_THROW(FrequencyGrid(std::nan(""), 0.1, 10), InvalidArgument);
}

TEST(FrequencyGrid, IndexingAndLookup) {
  const FrequencyGrid g(739.0, 0.5, 5);
  EXPECT_DOUBLE_EQ(g.stop(), 741.0);
  EXPECT_EQ(g.nearest_index(739.74), 1u);
  EXPECT_EQ(g.nearest_index(700.0), 0u);
  EXPECT_EQ(g.nearest_index(800.0), 4u);
  EXPECT_TRUE(g.contains(741.2));
  EXPECT_FALSE(g.contains(741.3));
  EXPECT_EQ(g.values().size(), 5u);
}

TEST(GaussianPump, HalfMaximumAtHalfWidth) {
  const auto g = make_frequency_grid(739.75, 0.001, 1001);
  const auto s = gaussian_pump_spectrum(g, 740.25, 0.05);
  const double peak = s.weights[g.nearest_index(740.25)];
  const double half = s.weights[g.nearest_index(740.225)];
  // exp(-4 ln2 * (0.025 / 0.05)^2) = 1/2 exactly.
  EXPECT_NEAR(half / peak, 0.5, 1e-6);
  EXPECT_TRUE(s.normalized);
  EXPECT_FALSE(s.truncated);
  EXPECT_NEAR(s.mass(), 1.0, 1e-9);
}

TEST(GaussianPump, FlagsTruncationInsideThreeWidths) {
  const auto g = make_frequency_grid(740.0, 0.001, 401);
  EXPECT_TRUE(gaussian_pump_spectrum(g, 740.25, 0.1).truncated);
  EXPECT_FALSE(gaussian_pump_spectrum(g, 740.2, 0.05).truncated);
}

TEST(GaussianPump, RejectsNonPositiveWidth) {
  const auto g = make_frequency_grid(740.0, 0.001, 401);
  EXPECT_THROW(gaussian_pump_spectrum(g, 740.2, 0.0), InvalidArgument);
}

TEST(CombPump, AreasFollowWeights) {
  const auto g = make_frequency_grid(739.0, 0.001, 2001);
  const std::vector<CombLine> lines{{739.6, 0.06, 2.0}, {740.4, 0.09, 1.0}};
  const auto s = comb_pump_spectrum(g, lines);
  // Quadrature of each resolved line over its own half of the axis.
  double left = 0.0, right = 0.0;
  for (std::size_t k = 0; k < g.count(); ++k)
    (g.at(k) < 740.0 ? left : right) += s.weights[k] * g.step();
  EXPECT_NEAR(left / right, 2.0, 1e-6);
  EXPECT_NEAR(left + right, 1.0, 1e-9);
}

TEST(CombPump, ErrorCases) {
  const auto g = make_frequency_grid(739.0, 0.001, 2001);
  EXPECT_THROW(comb_pump_spectrum(g, {}), InvalidArgument);
  const std::vector<CombLine> zero{{739.6, 0.06, 0.0}};
  EXPECT_THROW(comb_pump_spectrum(g, zero), InvalidArgument);
  const std::vector<CombLine> negative{{739.6, 0.06, -1.0}};
  EXPECT_THROW(comb_pump_spectrum(g, negative), InvalidArgument);
}

TEST(CombPump, LinearityProperty) {
  Gen gen(101);
  const auto g = make_frequency_grid(738.0, 0.002, 2001);
  for (int trial = 0; trial < 200; ++trial) {
    const CombLine a{gen.uniform(739.0, 741.0), gen.uniform(0.02, 0.3), 1.0};
    const CombLine b{gen.uniform(739.0, 741.0), gen.uniform(0.02, 0.3), 1.0};
    const double alpha = gen.uniform(0.01, 5.0), beta = gen.uniform(0.01, 5.0);
    const std::vector<CombLine> both{{a.center_thz, a.fwhm_thz, alpha},
                                     {b.center_thz, b.fwhm_thz, beta}};
    const auto combined = comb_pump_spectrum(g, both);
    const auto sa = comb_pump_spectrum(g, std::vector<CombLine>{a});
    const auto sb = comb_pump_spectrum(g, std::vector<CombLine>{b});
    SumFrequencySpectrum sum{g, std::vector<double>(g.count())};
    for (std::size_t k = 0; k < g.count(); ++k)
      sum.weights[k] = alpha * sa.weights[k] + beta * sb.weights[k];
    sum = normalized(sum);
    for (std::size_t k = 0; k < g.count(); ++k)
      ASSERT_NEAR(combined.weights[k], sum.weights[k], 1e-12);
  }
}

TEST(Normalization, ConstructorsProduceUnitMass) {
  Gen gen(202);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = make_frequency_grid(gen.uniform(735.0, 739.0), gen.uniform(0.001, 0.01),
                                       gen.index(200, 2000));
    const double center = gen.uniform(g.start(), g.stop());
    const auto s = gaussian_pump_spectrum(g, center, gen.uniform(0.01, 1.0));
    ASSERT_TRUE(s.normalized);
    ASSERT_NEAR(s.mass(), 1.0, 1e-9);
    for (double w : s.weights) ASSERT_GE(w, 0.0);
  }
  EXPECT_THROW(normalized(SumFrequencySpectrum{make_frequency_grid(0, 1, 3), {0, 0, 0}}),
               InvalidArgument);
}

// JSI on grids whose sum frequencies fall exactly on the output grid.
struct JsiSetup {
  FrequencyGrid signal = make_frequency_grid(370.125 - 0.6, 0.002, 601);
  FrequencyGrid idler = signal;
  FrequencyGrid output = make_frequency_grid(2 * (370.125 - 0.6), 0.002, 1201);
};

TEST(Jsi, SymmetricUnderExchange) {
  const JsiSetup setup;
  const auto jsi = gaussian_jsi(setup.signal, setup.idler, 740.25, 0.1, 0.4);
  const std::size_t n = setup.signal.count();
  for (std::size_t s = 0; s < n; s += 7)
    for (std::size_t i = 0; i < n; i += 5) ASSERT_DOUBLE_EQ(jsi.at(s, i), jsi.at(i, s));
  EXPECT_NEAR(jsi.mass(), 1.0, 1e-12);
}

TEST(Jsi, MarginalMatchesBruteForceAndAnalyticPump) {
  const JsiSetup setup;
  const auto jsi = gaussian_jsi(setup.signal, setup.idler, 740.25, 0.1, 0.4);
  const auto marginal = sum_frequency_marginal(jsi, setup.output);

  // Brute force: accumulate every cell on its anti-diagonal index s + i.
  const std::size_t n = setup.signal.count();
  std::vector<double> brute(2 * n - 1, 0.0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < n; ++i) brute[s + i] += jsi.at(s, i);
  double brute_total = 0.0;
  for (double b : brute) brute_total += b;
  for (std::size_t k = 0; k < brute.size(); ++k)
    ASSERT_NEAR(marginal.weights[k] * setup.output.step(), brute[k] / brute_total, 1e-12);

  EXPECT_NEAR(measured_fwhm(marginal), 0.1, setup.output.step());

  // The product-Gaussian model marginalizes to the pump Gaussian itself.
  const auto analytic = gaussian_pump_spectrum(setup.output, 740.25, 0.1);
  const double peak = analytic.weights[analytic.argmax()];
  double worst = 0.0;
  for (std::size_t k = 0; k < analytic.weights.size(); ++k)
    worst = std::max(worst, std::abs(marginal.weights[k] - analytic.weights[k]) / peak);
  EXPECT_LT(worst, 1e-4);
  EXPECT_NEAR(marginal.mass(), 1.0, 1e-9);
}

TEST(Jsi, CoverageError) {
  const JsiSetup setup;
  const auto jsi = gaussian_jsi(setup.signal, setup.idler, 740.25, 0.1, 0.4);
  EXPECT_THROW(sum_frequency_marginal(jsi, make_frequency_grid(740.25, 0.002, 200)),
               CoverageError);
}

TEST(Jsi, MarginalConservesMassProperty) {
  Gen gen(303);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sg = make_frequency_grid(gen.uniform(369.0, 371.0), 0.01, gen.index(2, 40));
    const auto ig = make_frequency_grid(gen.uniform(369.0, 371.0), 0.01, gen.index(2, 40));
    JointSpectralIntensity jsi{sg, ig, std::vector<double>(sg.count() * ig.count())};
    for (auto& d : jsi.density) d = gen.uniform(0.0, 1.0);
    const auto out = make_frequency_grid(sg.start() + ig.start() - 0.05, 0.01,
                                         sg.count() + ig.count() + 10);
    const auto m = sum_frequency_marginal(jsi, out);
    ASSERT_NEAR(m.mass(), 1.0, 1e-9);
  }
}

TEST(Resample, LinearInterpolationAndZeroOutside) {
  const SumFrequencySpectrum s{make_frequency_grid(0.0, 1.0, 3), {0.0, 2.0, 4.0}};
  const auto r = resample(s, make_frequency_grid(-1.0, 0.5, 8));
  const std::vector<double> expected{0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.0, 0.0};
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_DOUBLE_EQ(r.weights[k], expected[k]);
}

TEST(MeasuredFwhm, AnalyticGaussianAndMissingCrossing) {
  const auto g = make_frequency_grid(739.0, 0.0005, 3001);
  EXPECT_NEAR(measured_fwhm(gaussian_pump_spectrum(g, 739.75, 0.123)), 0.123, 1e-4);
  const auto edge = make_frequency_grid(739.74, 0.0005, 3001);
  EXPECT_EQ(measured_fwhm(gaussian_pump_spectrum(edge, 739.75, 0.123)), 0.0);
}

TEST(GaussianProfile, AreaMatchesClosedForm) {
  const double fwhm = 0.37;
  const double area = testing::simpson(
      [&](double nu) { return gaussian_profile(nu, 740.0, fwhm); }, 738.0, 742.0);
  EXPECT_NEAR(area, fwhm * std::sqrt(kPi / (4.0 * kLn2)), 1e-9);
}

}  // namespace
}  // namespace tpex
