#include <gtest/gtest.h>

#include <cmath>

#include "pairsim/squeezing.hpp"

using namespace pairsim;

namespace {

SqueezingSpec single(double xi, double eta) { return {xi, {1.0}, {eta}}; }

double sum(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s);
}

}  // namespace

TEST(MeanPhotonNumber, Reductions) {
  EXPECT_EQ(mean_photon_number(single(0.0, 1.0)), 0.0);
  EXPECT_EQ(mean_photon_number(single(0.7, 0.0)), 0.0);
  EXPECT_NEAR(mean_photon_number(single(0.1, 1.0)), 1.00334e-2, 1e-7);
  for (double xi : {0.05, 0.3, 1.2}) EXPECT_NEAR(mean_photon_number(single(xi, 1.0)), std::pow(std::sinh(xi), 2), 1e-12);
}

TEST(MeanPhotonNumber, MultimodeUsesPerModeSqueezing) {
  const SqueezingSpec s{0.4, {0.5, 0.3, 0.2}, {0.9, 0.8, 0.7}};
  double expect = 0.0;
  const double r[] = {0.5, 0.3, 0.2}, e[] = {0.9, 0.8, 0.7};
  for (int k = 0; k < 3; ++k) expect += e[k] * e[k] * std::pow(std::sinh(0.4 * std::sqrt(r[k])), 2);
  EXPECT_NEAR(mean_photon_number(s), expect, 1e-15);
}

TEST(TriggerProbability, Reductions) {
  EXPECT_EQ(trigger_probability(single(0.0, 1.0)), 0.0);
  EXPECT_NEAR(trigger_probability(single(0.9, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(trigger_probability(single(0.5, 1.0)), 0.113181, 1e-6);
  for (double xi : {0.05, 0.5, 1.5}) EXPECT_NEAR(trigger_probability(single(xi, 1.0)), 1.0 - 1.0 / std::cosh(xi), 1e-12);
}

TEST(TriggerProbability, SmallSqueezingLimit) {
  for (double xi : {0.001, 0.01, 0.03, 0.05}) {
    const auto s = single(xi, 1.0);
    EXPECT_LT(std::abs(trigger_probability(s) - mean_photon_number(s) / 2.0), std::pow(xi, 4));
  }
}

TEST(TriggerProbability, ProductStaysPhysicalForManyModes) {
  std::vector<double> r(50, 1.0 / 50);
  const SqueezingSpec s{3.0, r, {1.0}};
  const double p = trigger_probability(s);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
}

TEST(Statistics, MonotoneInTransmissionAndSqueezing) {
  const std::vector<double> r{0.6, 0.3, 0.1};
  double last_p = -1.0, last_n = -1.0;
  for (double eta = 0.0; eta <= 1.0 + 1e-12; eta += 0.05) {
    const SqueezingSpec s{0.8, r, {std::min(eta, 1.0)}};
    EXPECT_GE(trigger_probability(s), last_p);
    EXPECT_GE(mean_photon_number(s), last_n);
    last_p = trigger_probability(s);
    last_n = mean_photon_number(s);
  }
  last_p = last_n = -1.0;
  for (double xi = 0.0; xi <= 2.0; xi += 0.1) {
    const SqueezingSpec s{xi, r, {0.6}};
    EXPECT_GE(trigger_probability(s), last_p);
    EXPECT_GE(mean_photon_number(s), last_n);
    last_p = trigger_probability(s);
    last_n = mean_photon_number(s);
  }
}

TEST(FockDiagonal, VacuumAndEvenPhotonNumbers) {
  const auto vac = lossy_density_diagonal(single(0.0, 0.7), 0);
  EXPECT_EQ(vac[0], 1.0);
  for (std::size_t m = 1; m < vac.size(); ++m) EXPECT_EQ(vac[m], 0.0);
  const auto pure = lossy_density_diagonal(single(0.6, 1.0), 0);
  for (std::size_t m = 1; m < pure.size(); m += 2) EXPECT_EQ(pure[m], 0.0);
  EXPECT_NEAR(pure[0], 1.0 / std::cosh(0.6), 1e-15);
  EXPECT_NEAR(pure[2], std::pow(std::tanh(0.6), 2) / (2 * std::cosh(0.6)), 1e-15);
}

TEST(FockDiagonal, LossyDistributionIsNormalized) {
  for (double xi : {0.1, 0.5, 1.0, 1.5})
    for (double eta : {0.0, 0.3, 0.7, 0.95, 1.0}) {
      const auto p = lossy_density_diagonal(single(xi, eta), 0);
      for (double v : p) EXPECT_GE(v, 0.0);
      EXPECT_NEAR(sum(p), 1.0, 1e-9) << xi << ' ' << eta;
    }
}

TEST(FockDiagonal, VacuumMatchesTriggerProbability) {
  for (double xi : {0.2, 0.8})
    for (double eta : {0.2, 0.6, 0.9}) {
      const auto s = single(xi, eta);
      EXPECT_NEAR(lossy_density_diagonal(s, 0)[0], 1.0 - trigger_probability(s), 1e-10);  // truncation tail
    }
}

TEST(FockDiagonal, MeanMatchesMeanPhotonNumber) {
  const auto s = single(0.9, 0.8);
  const auto p = lossy_density_diagonal(s, 0);
  double mean = 0.0;
  for (std::size_t m = 0; m < p.size(); ++m) mean += static_cast<double>(m) * p[m];
  EXPECT_NEAR(mean, mean_photon_number(s), 1e-8);
}

TEST(FockDiagonal, TruncationPolicy) {
  const auto s = single(2.0, 0.9);
  try {
    lossy_density_diagonal(s, 0, {20, false});
    FAIL() << "expected TruncationError";
  } catch (const TruncationError& e) {
    EXPECT_GT(e.suggested_max_n(), 20);
    const auto p = lossy_density_diagonal(s, 0, {e.suggested_max_n(), false});
    EXPECT_NEAR(sum(p), 1.0, 1e-9);
  }
  const auto extended = lossy_density_diagonal(s, 0);
  EXPECT_GT(extended.size(), 41u);
  EXPECT_NEAR(sum(extended), 1.0, 1e-9);
  EXPECT_THROW(lossy_density_diagonal(s, 0, {-1, true}), InvalidArgument);
  EXPECT_THROW(lossy_density_diagonal(s, 3), InvalidArgument);
}

TEST(SqueezingSpec, Validation) {
  EXPECT_THROW(mean_photon_number(SqueezingSpec{-1.0, {1.0}, {1.0}}), InvalidArgument);
  EXPECT_THROW(mean_photon_number(SqueezingSpec{1.0, {1.0}, {1.2}}), InvalidArgument);
  EXPECT_THROW(mean_photon_number(SqueezingSpec{1.0, {0.5, 0.5}, {1.0, 1.0, 1.0}}), InvalidArgument);
  const SqueezingSpec s{0.5, {0.64, 0.36}, {1.0}};
  EXPECT_DOUBLE_EQ(s.xi(0), 0.4);
  EXPECT_DOUBLE_EQ(s.xi(1), 0.3);
}
