#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pairsim/dispersion.hpp"

using namespace pairsim;

TEST(KOfOmega, ReferenceAndLinearTerms) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, -2e-24, 0.0};
  EXPECT_EQ(k_of_omega(m, 1.2e15), 1e7);
  const DispersionModel lin{1.2e15, 0.0, 4e-8, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(k_of_omega(lin, 1.2e15 + 3e12) - k_of_omega(lin, 1.2e15), 4e-8 * 3e12);
}

TEST(KOfOmega, HandEvaluatedPolynomial) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, -2e-24, 0.0};
  EXPECT_NEAR(k_of_omega(m, 1.2e15 + 1e12), 1e7 + 4e4 - 1.0, 1e-6);
}

TEST(DeltaK, LinearDispersionCancels) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, 0.0, 0.0};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5e12, 5e12);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(delta_k(m, 1.2e15 + u(rng), 1.2e15 + u(rng), 1.2e15 + u(rng)), 0.0);
}

TEST(DeltaK, Beta2DegenerateClosedForm) {
  const double w0 = 1.2e15;
  const DispersionModel m{w0, 0.0, 0.0, -2e-24, 0.0};
  const double dp = 4.7e12;
  EXPECT_NEAR(delta_k(m, w0, w0, w0 + dp), 2e-24 * dp * dp, 1e-12 * 2e-24 * dp * dp);
}

TEST(DeltaK, SignalIdlerSymmetry) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, -2e-24, 3.5e-35};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5e12, 5e12);
  for (int k = 0; k < 200; ++k) {
    const double s = 1.2e15 + u(rng), i = 1.2e15 + u(rng), p = 1.2e15 + u(rng);
    EXPECT_EQ(delta_k(m, s, i, p), delta_k(m, i, s, p));
    EXPECT_EQ(phase_matching(m, 0.015, s, i, p), phase_matching(m, 0.015, i, s, p));
  }
}

TEST(DeltaK, MatchesDirectDifferenceOfWavevectors) {
  const DispersionModel m{1.2e15, 0.0, 0.0, -2e-24, 3.5e-35};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5e12, 5e12);
  for (int k = 0; k < 100; ++k) {
    const double s = 1.2e15 + u(rng), i = 1.2e15 + u(rng), p = 1.2e15 + u(rng);
    const double direct = k_of_omega(m, s) + k_of_omega(m, i) - k_of_omega(m, p) - k_of_omega(m, s + i - p);
    EXPECT_NEAR(delta_k(m, s, i, p), direct, 1e-9 + 1e-9 * std::abs(direct));
  }
}

TEST(Sinc, SeriesBranchIsAccurate) {
  EXPECT_EQ(sinc(0.0), 1.0);
  for (double x : {1e-5, 5e-5, 9.9e-5, -3e-5}) {
    const long double exact = std::sin(static_cast<long double>(x)) / static_cast<long double>(x);
    EXPECT_LT(std::abs(static_cast<long double>(sinc(x)) - exact) / exact, 1e-12L);
  }
  EXPECT_NEAR(sinc(1.0), std::sin(1.0), 1e-15);
}

TEST(PhaseMatching, ZeroMismatchAndSincZero) {
  const DispersionModel m{1.2e15, 0.0, 0.0, -2e-24, 0.0};
  EXPECT_EQ(phase_matching(m, 0.015, 1.2e15, 1.2e15, 1.2e15), std::complex<double>(1.0, 0.0));
  // Choose L so that dk L / 2 = pi.
  const double dp = 4e12;
  const double dk = delta_k(m, 1.2e15, 1.2e15, 1.2e15 + dp);
  EXPECT_LT(std::abs(phase_matching(m, 2 * M_PI / dk, 1.2e15, 1.2e15, 1.2e15 + dp)), 1e-12);
}

TEST(PhaseMatching, BoundedByOne) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, -2e-24, 3.5e-35};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2e13, 2e13);
  std::uniform_real_distribution<double> len(0.0, 0.05);
  for (int k = 0; k < 10000; ++k)
    EXPECT_LE(std::abs(phase_matching(m, len(rng), 1.2e15 + u(rng), 1.2e15 + u(rng), 1.2e15 + u(rng))), 1.0 + 1e-15);
}

TEST(PhaseMatching, ZeroLengthIsOne) {
  const DispersionModel m{1.2e15, 1e7, 4e-8, -2e-24, 3.5e-35};
  EXPECT_EQ(phase_matching(m, 0.0, 1.21e15, 1.19e15, 1.22e15), std::complex<double>(1.0, 0.0));
  EXPECT_THROW(phase_matching(m, -1.0, 1.2e15, 1.2e15, 1.2e15), InvalidArgument);
}
