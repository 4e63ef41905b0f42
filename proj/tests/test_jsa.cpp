#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles/naive_quadrature.hpp"
#include "pairsim/jsa.hpp"
#include "pairsim/schmidt.hpp"

using namespace pairsim;

namespace {

constexpr double nm = 1e-9;
constexpr double ghz = kTwoPi * 1e9;

double max_rel_diff(const ComplexMatrix& a, const oracle::Grid2& b) {
  double diff = 0.0, scale = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      diff = std::max(diff, std::abs(a(j, k) - b[j][k]));
      scale = std::max(scale, std::abs(b[j][k]));
    }
  return diff / scale;
}

const PumpQuadrature kSmallQuad{8.0, 1.25};  // 21 pump nodes

}  // namespace

TEST(WaveguideJsa, MatchesNaiveQuadratureOnSmallGrid) {
  const PumpLine p1{1544.08 * nm, 55 * ghz};
  const PumpLine p2{1556.18 * nm, 55 * ghz};
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const DispersionModel m{w0, 0.0, 4e-8, -2e-24, 3.5e-35};
  const auto grid = make_grid(1550.12 * nm, 2.0 * nm, 11);
  const auto jsa = build_waveguide_jsa(p1, p2, WaveguideSource{0.015, m}, grid, kSmallQuad);

  const auto ref = oracle::waveguide({oracle::omega(1544.08 * nm), 55 * ghz}, {oracle::omega(1556.18 * nm), 55 * ghz},
                                     {w0, 0.0, 4e-8, -2e-24, 3.5e-35}, 0.015,
                                     oracle::axis(grid.omega_min(), grid.omega_max(), 11), 8.0, 1.25);
  ASSERT_EQ(oracle::nodes(oracle::omega(1544.08 * nm), 1.25 * 55 * ghz, 55 * ghz, 8.0).w.size(), 21u);
  EXPECT_LT(max_rel_diff(jsa.values, ref), 1e-10);
}

TEST(WaveguideJsa, MatchesNaiveQuadratureWithDefaultQuadrature) {
  const PumpLine p1{1543.78 * nm, 40 * ghz};
  const PumpLine p2{1556.53 * nm, 70 * ghz, LineShape::Gaussian, {0.6, 0.8}};
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const DispersionModel m{w0, 0.0, 0.0, -2e-24, 3.5e-35};
  const auto grid = make_grid(1550.12 * nm, 3.0 * nm, 15);
  const auto jsa = build_waveguide_jsa(p1, p2, WaveguideSource{0.01, m}, grid);
  const auto ref = oracle::waveguide({oracle::omega(1543.78 * nm), 40 * ghz},
                                     {oracle::omega(1556.53 * nm), 70 * ghz, {0.6, 0.8}}, {w0, 0, 0, -2e-24, 3.5e-35},
                                     0.01, oracle::axis(grid.omega_min(), grid.omega_max(), 15), 8.0, 4.0);
  EXPECT_LT(max_rel_diff(jsa.values, ref), 1e-10);
}

TEST(RingJsa, MatchesNaiveQuadratureOnSmallGrid) {
  const PumpLine p1{1543.78 * nm, 55 * ghz};
  const PumpLine p2{1556.53 * nm, 55 * ghz};
  const RingSource ring{3e4, 3.2 * nm, 1550.12 * nm};
  for (std::size_t n : {11u, 15u}) {
    const auto grid = make_grid(1550.12 * nm, 0.4 * nm, n);
    const auto jsa = build_ring_jsa(p1, p2, ring, grid, kSmallQuad);
    const double w0 = oracle::omega(1550.12 * nm);
    const double fsr = 2 * oracle::kPi * oracle::kC * 3.2 * nm / (1550.12 * nm * 1550.12 * nm);
    const auto ref = oracle::ring({oracle::omega(1543.78 * nm), 55 * ghz}, {oracle::omega(1556.53 * nm), 55 * ghz},
                                  {w0, fsr, 3e4}, oracle::axis(grid.omega_min(), grid.omega_max(), int(n)), 8.0,
                                  1.25);
    EXPECT_LT(max_rel_diff(jsa.values, ref), 1e-10) << n;
  }
}

TEST(WaveguideJsa, ZeroLengthGivesAntiDiagonalContours) {
  const PumpLine p1{1544.08 * nm, 55 * ghz};
  const PumpLine p2{1556.18 * nm, 55 * ghz};
  const auto grid = make_grid(1550.12 * nm, 2.0 * nm, 41);
  const DispersionModel none{omega_from_wavelength(1550.12 * nm), 0, 0, 0, 0};
  const auto jsa = build_waveguide_jsa(p1, p2, WaveguideSource{0.0, none}, grid);
  // F depends on j + k only.
  for (int s = 0; s <= 80; ++s) {
    const int j0 = std::max(0, s - 40);
    const auto ref = jsa.values(j0, s - j0);
    for (int j = j0; j <= std::min(40, s); ++j)
      EXPECT_LE(std::abs(jsa.values(j, s - j) - ref), 1e-9 * std::abs(ref) + 1e-300);
  }
}

TEST(WaveguideJsa, FifteenMillimetreRidgeCenteredOnDegeneratePoint) {
  const PumpLine p1{1544.08 * nm, 55 * ghz};
  const PumpLine p2{1556.18 * nm, 55 * ghz};
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const auto grid = make_grid(1550.12 * nm, 4.0 * nm, 201);
  const auto jsa = build_waveguide_jsa(p1, p2, WaveguideSource{0.015, {w0, 0, 0, -2e-24, 3.5e-35}}, grid);
  const RealMatrix in = jsi(jsa);
  // Mass along the anti-diagonal band |j + k - 200| <= 40 (+-100 GHz in ws + wi) dominates.
  double band = 0.0, total = in.sum();
  for (int j = 0; j < 201; ++j)
    for (int k = 0; k < 201; ++k)
      if (std::abs(j + k - 200) <= 40) band += in(j, k);
  EXPECT_GT(band / total, 0.9);
  // Peak on the diagonal lies at the degenerate wavelength (grid center).
  int best = 0;
  for (int j = 0; j < 201; ++j)
    if (in(j, j) > in(best, best)) best = j;
  EXPECT_NEAR(grid.wavelength(best), 1550.12 * nm, 0.05 * nm);
}

TEST(Jsa, NormalizedAndExchangeSymmetric) {
  const PumpLine p1{1543.78 * nm, 55 * ghz};
  const PumpLine p2{1556.53 * nm, 55 * ghz};
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 61);
  const auto wg = build_waveguide_jsa(p1, p2, WaveguideSource{0.015, {w0, 1e7, 4e-8, -2e-24, 3.5e-35}}, grid);
  const auto ring = build_ring_jsa(p1, p2, RingSource{1.5e4, 3.2 * nm, 1550.12 * nm}, grid);
  for (const auto* f : {&wg, &ring}) {
    EXPECT_TRUE(f->norm_applied);
    EXPECT_NEAR(f->norm_squared(), 1.0, 1e-9);
    const double scale = f->values.cwiseAbs().maxCoeff();
    EXPECT_LE((f->values - f->values.transpose()).cwiseAbs().maxCoeff(), 1e-9 * scale);
    EXPECT_LE((jsi(*f) - jsi(*f).transpose()).cwiseAbs().maxCoeff(), 1e-9 * jsi(*f).maxCoeff());
    EXPECT_NEAR(jsi(*f).sum() * f->cell_area(), 1.0, 1e-9);
  }
}

TEST(Jsa, UnderResolvedQuadratureAndDegenerateOutput) {
  const PumpLine p1{1544.08 * nm, 55 * ghz};
  const PumpLine p2{1556.18 * nm, 55 * ghz};
  const auto grid = make_grid(1550.12 * nm, 1.0 * nm, 21);
  const DispersionModel none{omega_from_wavelength(1550.12 * nm), 0, 0, 0, 0};
  EXPECT_THROW(build_waveguide_jsa(p1, p2, {0.0, none}, grid, PumpQuadrature{4.0, 4.0}), UnderResolved);
  // Pumps whose energy sum misses the grid entirely.
  const PumpLine far{1400.0 * nm, 5 * ghz};
  EXPECT_THROW(build_waveguide_jsa(far, p2, {0.0, none}, grid), DegenerateInput);
}

TEST(RingResonance, PeakAndWidth) {
  const RingSource ring{1.5e4, 3.02 * nm, 1550.12 * nm};
  const auto r = ring.degenerate_resonance();
  EXPECT_EQ(r.amplitude(r.center_omega), std::complex<double>(1.0, 0.0));
  EXPECT_NEAR(r.fwhm_m(), 1550.12 * nm / 1.5e4, 1e-9 * r.fwhm_m());
  EXPECT_NEAR(std::norm(r.amplitude(r.center_omega + 0.5 * r.fwhm_omega())), 0.5, 1e-12);
  const RingSource doubled{3e4, 3.02 * nm, 1550.12 * nm};
  EXPECT_NEAR(doubled.degenerate_resonance().fwhm_m(), 0.5 * r.fwhm_m(), 1e-12 * r.fwhm_m());
}

TEST(RingResonance, PumpResonancesTwoFsrAway) {
  const RingSource ring{1.5e4, 3.02 * nm, 1550.12 * nm};
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const double fsr = ring.fsr_omega();
  EXPECT_DOUBLE_EQ(ring.resonance_for(omega_from_wavelength(1544.08 * nm)).center_omega, w0 + 2 * fsr);
  EXPECT_DOUBLE_EQ(ring.resonance_for(omega_from_wavelength(1556.18 * nm)).center_omega, w0 - 2 * fsr);
  // A uniform frequency comb lands within a quarter linewidth of the observed lines.
  EXPECT_NEAR(wavelength_from_omega(w0 + 2 * fsr), 1544.08 * nm, 0.025 * nm);
  EXPECT_NEAR(wavelength_from_omega(w0 - 2 * fsr), 1556.18 * nm, 0.025 * nm);
}

TEST(RingJsa, DetunedPumpWarns) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 41);
  const RingSource ring{3e4, 3.2 * nm, 1550.12 * nm};
  const auto on = build_ring_jsa({1543.78 * nm, 55 * ghz}, {1556.53 * nm, 55 * ghz}, ring, grid);
  EXPECT_TRUE(on.warnings.empty());
  const auto off = build_ring_jsa({1543.0 * nm, 55 * ghz}, {1556.53 * nm, 55 * ghz}, ring, grid);
  EXPECT_FALSE(off.warnings.empty());
}

TEST(RingJsa, MarginalWidthTracksQ) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 401);
  for (double q : {1.5e4, 3e4}) {
    const RingSource ring{q, 3.2 * nm, 1550.12 * nm};
    const auto jsa = build_ring_jsa({1543.78 * nm, 55 * ghz}, {1556.53 * nm, 55 * ghz}, ring, grid);
    const double fwhm = fwhm_wavelength(grid, signal_marginal(jsa));
    EXPECT_NEAR(fwhm, 1550.12 * nm / q, 0.15 * 1550.12 * nm / q) << q;
  }
}

TEST(RingJsa, CommonPumpScalingIsGlobalPhase) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 81);
  const RingSource ring{3e4, 3.2 * nm, 1550.12 * nm};
  const PumpLine p1{1543.78 * nm, 55 * ghz};
  const PumpLine p2{1556.53 * nm, 55 * ghz};
  PumpLine q1 = p1, q2 = p2;
  q1.relative_amplitude = q2.relative_amplitude = std::polar(3.7, 1.1);
  const auto a = build_ring_jsa(p1, p2, ring, grid);
  const auto b = build_ring_jsa(q1, q2, ring, grid);
  Eigen::Index ra, ca, rb, cb;
  a.values.cwiseAbs().maxCoeff(&ra, &ca);
  b.values.cwiseAbs().maxCoeff(&rb, &cb);
  EXPECT_EQ(ra, rb);
  EXPECT_EQ(ca, cb);
  const auto all = FilterSpec::all_pass();
  EXPECT_NEAR(jsa_overlap(a, b, all, all).magnitude, 1.0, 1e-12);
}

TEST(ApplyFilter, AllPassIsIdentity) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 41);
  const auto jsa = build_ring_jsa({1543.78 * nm, 55 * ghz}, {1556.53 * nm, 55 * ghz},
                                  RingSource{3e4, 3.2 * nm, 1550.12 * nm}, grid);
  const auto out = apply_filter(jsa, FilterSpec::all_pass(), FilterSpec::all_pass());
  EXPECT_NEAR(out.survival, 1.0, 1e-12);
  EXPECT_LE((out.jsa.values - jsa.values).cwiseAbs().maxCoeff(), 1e-12 * jsa.values.cwiseAbs().maxCoeff());
}

TEST(ApplyFilter, SurvivalMatchesIndependentSum) {
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const auto grid = make_grid(1550.12 * nm, 4.0 * nm, 101);
  const auto jsa = build_waveguide_jsa({1544.08 * nm, 55 * ghz}, {1556.18 * nm, 55 * ghz},
                                       WaveguideSource{0.015, {w0, 0, 0, -2e-24, 3.5e-35}}, grid);
  const FilterSpec fs{1550.12 * nm, 0.8 * nm, FilterProfile::RaisedCosine, 0.4};
  const FilterSpec fi{1550.0 * nm, 1.0 * nm};
  const auto out = apply_filter(jsa, fs, fi);
  const auto a = sample_filter(fs, grid);
  const auto b = sample_filter(fi, grid);
  long double sum = 0.0L;
  for (int j = 0; j < 101; ++j)
    for (int k = 0; k < 101; ++k) sum += std::norm(jsa.values(j, k)) * a[j] * a[j] * b[k] * b[k];
  sum *= grid.step() * grid.step();
  EXPECT_NEAR(out.survival, static_cast<double>(sum), 1e-12);
  EXPECT_NEAR(out.jsa.norm_squared(), 1.0, 1e-9);
}

TEST(ApplyFilter, NestedFiltersAreMonotone) {
  const double w0 = omega_from_wavelength(1550.12 * nm);
  const auto grid = make_grid(1550.12 * nm, 4.0 * nm, 101);
  const auto jsa = build_waveguide_jsa({1544.08 * nm, 55 * ghz}, {1556.18 * nm, 55 * ghz},
                                       WaveguideSource{0.015, {w0, 0, 0, -2e-24, 3.5e-35}}, grid);
  double last = 1.0;
  for (double bw : {3.0, 2.0, 1.2, 0.8, 0.4, 0.1}) {
    const FilterSpec f{1550.12 * nm, bw * nm};
    const double s = apply_filter(jsa, f, f).survival;
    EXPECT_LE(s, last + 1e-15) << bw;
    last = s;
  }
}

TEST(ApplyFilter, RejectsUnnormalizedAndAnnihilated) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 21);
  auto jsa = build_ring_jsa({1543.78 * nm, 55 * ghz}, {1556.53 * nm, 55 * ghz},
                            RingSource{3e4, 3.2 * nm, 1550.12 * nm}, grid);
  const FilterSpec away{1560.0 * nm, 0.8 * nm};
  EXPECT_THROW(apply_filter(jsa, away, away), DegenerateInput);
  jsa.values *= 2.0;
  EXPECT_THROW(apply_filter(jsa, FilterSpec::all_pass(), FilterSpec::all_pass()), NotNormalized);
}

TEST(Jsi, ZeroInZeroOut) {
  const auto grid = make_grid(1550.12 * nm, 1.2 * nm, 5);
  const JointSpectralAmplitude z{grid, grid, ComplexMatrix::Zero(5, 5)};
  EXPECT_EQ(jsi(z).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_THROW(normalized(z), DegenerateInput);
}
