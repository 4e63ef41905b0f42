#pragma once

// Joint spectral amplitudes of degenerate SFWM sources pumped by two lines.
//
// Waveguide:  F(ws, wi) = int dw  a(w) b(ws + wi - w) phi(ws, wi, w)
// Microring:  F(ws, wi) = l(ws) l(wi) int dw  a(w) l_p1(w) b(ws + wi - w) l_p2(ws + wi - w)
//
// The pump integral is a trapezoid sum over a dedicated 1D grid centred on the
// first pump line; the second pump amplitude is evaluated analytically.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "pairsim/dispersion.hpp"
#include "pairsim/errors.hpp"
#include "pairsim/spectral.hpp"

namespace pairsim {

using ComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Discretized F(ws, wi); rows index the signal grid, columns the idler grid.
struct JointSpectralAmplitude {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  ComplexMatrix values;
  bool norm_applied = false;
  std::vector<std::string> warnings;

  double cell_area() const { return grid_s.step() * grid_i.step(); }

  /// sum |F|^2 dws dwi
  double norm_squared() const { return values.squaredNorm() * cell_area(); }
};

inline constexpr double kNormTolerance = 1e-9;

inline bool is_normalized(const JointSpectralAmplitude& jsa, double tol = kNormTolerance) {
  return std::abs(jsa.norm_squared() - 1.0) <= tol;
}

/// Scales to unit L2 norm; an all-zero amplitude is a degenerate input.
inline JointSpectralAmplitude normalized(JointSpectralAmplitude jsa) {
  const double n2 = jsa.norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DegenerateInput("JSA is identically zero (pumps out of band?)");
  jsa.values *= 1.0 / std::sqrt(n2);
  jsa.norm_applied = true;
  return jsa;
}

struct WaveguideSource {
  double length_m = 0.0;
  DispersionModel dispersion;

  bool operator==(const WaveguideSource&) const = default;
};

/// A single peak-normalized resonance, l(w) = 1 / (1 - 2i (w - wr) / G) with
/// G = wr / Q the intensity FWHM in angular frequency.
struct RingResonance {
  double center_omega = 0.0;
  double q_factor = 0.0;

  double center_wavelength_m() const { return wavelength_from_omega(center_omega); }
  double fwhm_omega() const { return center_omega / q_factor; }
  double fwhm_m() const { return center_wavelength_m() / q_factor; }

  std::complex<double> amplitude(double omega) const {
    return 1.0 / std::complex<double>(1.0, -2.0 * (omega - center_omega) / fwhm_omega());
  }
};

/// Microring with a uniform frequency comb anchored on the degenerate
/// resonance. Each pump couples to the comb line `pump_order` FSRs away on its
/// side of the anchor.
struct RingSource {
  double q_factor = 0.0;
  double fsr_m = 0.0;
  double resonance_wavelength_m = 0.0;
  int pump_order = 2;

  void validate() const {
    if (!(q_factor > 0.0)) throw InvalidArgument("RingSource: Q must be positive");
    if (!(fsr_m > 0.0)) throw InvalidArgument("RingSource: FSR must be positive");
    if (!(resonance_wavelength_m > 0.0)) throw InvalidArgument("RingSource: resonance wavelength must be positive");
    if (pump_order < 1) throw InvalidArgument("RingSource: pump order must be at least 1");
  }

  double fsr_omega() const { return omega_span_from_wavelength_span(fsr_m, resonance_wavelength_m); }

  RingResonance degenerate_resonance() const {
    return {omega_from_wavelength(resonance_wavelength_m), q_factor};
  }

  RingResonance resonance_for(double pump_omega) const {
    const double anchor = omega_from_wavelength(resonance_wavelength_m);
    if (pump_omega == anchor) throw InvalidArgument("RingSource: pump coincides with the degenerate resonance");
    const double side = pump_omega > anchor ? 1.0 : -1.0;
    return {anchor + side * pump_order * fsr_omega(), q_factor};
  }

  bool operator==(const RingSource&) const = default;
};

/// Trapezoid grid for the pump convolution.
struct PumpQuadrature {
  double points_per_fwhm = 8.0;
  double half_span_fwhm = 4.0;  // half-width of the pump grid, in units of pump FWHM

  bool operator==(const PumpQuadrature&) const = default;
};

struct QuadratureNodes {
  std::vector<double> omega;
  std::vector<double> weight;
};

/// Nodes centred on `center` covering +-half_span_fwhm * fwhm, with at least
/// `points_per_fwhm` points across `resolve_width` (the narrowest feature in
/// the integrand).
inline QuadratureNodes pump_nodes(double center, double fwhm, double resolve_width, const PumpQuadrature& quad) {
  if (quad.points_per_fwhm < 8.0)
    throw UnderResolved("pump quadrature: need at least 8 points per linewidth, got " +
                        std::to_string(quad.points_per_fwhm));
  if (!(quad.half_span_fwhm > 0.0)) throw InvalidArgument("pump quadrature: span must be positive");
  const double half_span = quad.half_span_fwhm * fwhm;
  const double max_step = resolve_width / quad.points_per_fwhm;
  const auto half_count = static_cast<std::size_t>(std::max(1.0, std::ceil(half_span / max_step - 1e-9)));
  const double step = half_span / static_cast<double>(half_count);
  const std::size_t n = 2 * half_count + 1;
  QuadratureNodes nodes;
  nodes.omega.resize(n);
  nodes.weight.assign(n, step);
  nodes.weight.front() *= 0.5;
  nodes.weight.back() *= 0.5;
  for (std::size_t k = 0; k < n; ++k)
    nodes.omega[k] = center + (static_cast<double>(k) - static_cast<double>(half_count)) * step;
  return nodes;
}

inline JointSpectralAmplitude build_waveguide_jsa(const PumpLine& pump1, const PumpLine& pump2,
                                                  const WaveguideSource& source, const FrequencyGrid& grid,
                                                  const PumpQuadrature& quad = {}) {
  pump1.validate();
  pump2.validate();
  if (!(source.length_m >= 0.0)) throw InvalidArgument("waveguide length must be non-negative");
  const auto nodes = pump_nodes(pump1.center_omega(), pump1.linewidth_fwhm_rad_s,
                                std::min(pump1.linewidth_fwhm_rad_s, pump2.linewidth_fwhm_rad_s), quad);

  const std::size_t n = grid.size();
  JointSpectralAmplitude jsa{grid, grid, ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  const auto omegas = grid.points();
  for (std::size_t q = 0; q < nodes.omega.size(); ++q) {
    const double wp = nodes.omega[q];
    const std::complex<double> a = nodes.weight[q] * pump1.amplitude(wp);
    if (a == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      auto row = jsa.values.row(static_cast<Eigen::Index>(j));
      for (std::size_t k = 0; k < n; ++k) {
        const double ws = omegas[j];
        const double wi = omegas[k];
        row(static_cast<Eigen::Index>(k)) +=
            a * pump2.amplitude(ws + wi - wp) * phase_matching(source.dispersion, source.length_m, ws, wi, wp);
      }
    }
  }
  return normalized(std::move(jsa));
}

inline JointSpectralAmplitude build_ring_jsa(const PumpLine& pump1, const PumpLine& pump2, const RingSource& ring,
                                             const FrequencyGrid& grid, const PumpQuadrature& quad = {}) {
  pump1.validate();
  pump2.validate();
  ring.validate();
  const RingResonance center = ring.degenerate_resonance();
  const RingResonance res1 = ring.resonance_for(pump1.center_omega());
  const RingResonance res2 = ring.resonance_for(pump2.center_omega());

  std::vector<std::string> warnings;
  for (const auto& [pump, res, label] : {std::tuple{&pump1, &res1, "pump 1"}, std::tuple{&pump2, &res2, "pump 2"}}) {
    const double detuning = std::abs(pump->center_omega() - res->center_omega) / res->fwhm_omega();
    if (detuning > 10.0)
      warnings.push_back(std::string(label) + " is detuned by " + std::to_string(detuning) +
                         " linewidths from its ring resonance (RingOff regime)");
  }

  const double resolve = std::min(
      {pump1.linewidth_fwhm_rad_s, pump2.linewidth_fwhm_rad_s, res1.fwhm_omega(), res2.fwhm_omega()});
  const auto nodes = pump_nodes(pump1.center_omega(), pump1.linewidth_fwhm_rad_s, resolve, quad);
  std::vector<std::complex<double>> weighted(nodes.omega.size());
  for (std::size_t q = 0; q < nodes.omega.size(); ++q)
    weighted[q] = nodes.weight[q] * pump1.amplitude(nodes.omega[q]) * res1.amplitude(nodes.omega[q]);

  // The pump convolution depends on ws + wi only: evaluate it once per
  // distinct index sum j + k.
  const std::size_t n = grid.size();
  std::vector<std::complex<double>> conv(2 * n - 1);
  for (std::size_t m = 0; m < conv.size(); ++m) {
    const double sum = 2.0 * grid.omega_min() + static_cast<double>(m) * grid.step();
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t q = 0; q < nodes.omega.size(); ++q) {
      const double w4 = sum - nodes.omega[q];
      acc += weighted[q] * pump2.amplitude(w4) * res2.amplitude(w4);
    }
    conv[m] = acc;
  }

  std::vector<std::complex<double>> line(n);
  for (std::size_t j = 0; j < n; ++j) line[j] = center.amplitude(grid.point(j));

  JointSpectralAmplitude jsa{grid, grid, ComplexMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      jsa.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = line[j] * line[k] * conv[j + k];
  auto out = normalized(std::move(jsa));
  out.warnings = std::move(warnings);
  return out;
}

struct FilteredJsa {
  JointSpectralAmplitude jsa;
  double survival = 1.0;  // sum |F f_s f_i|^2 dw^2 before renormalization
};

/// Multiplies by f_s(ws) f_i(wi) and renormalizes.
inline FilteredJsa apply_filter(const JointSpectralAmplitude& jsa, const FilterSpec& filter_s,
                                const FilterSpec& filter_i) {
  if (!is_normalized(jsa)) throw NotNormalized("apply_filter: input JSA must be unit-normalized");
  const auto fs = sample_filter(filter_s, jsa.grid_s);
  const auto fi = sample_filter(filter_i, jsa.grid_i);
  JointSpectralAmplitude out = jsa;
  for (Eigen::Index j = 0; j < out.values.rows(); ++j)
    for (Eigen::Index k = 0; k < out.values.cols(); ++k)
      out.values(j, k) *= fs[static_cast<std::size_t>(j)] * fi[static_cast<std::size_t>(k)];
  const double survival = out.norm_squared();
  if (!(survival >= 1e-12)) throw DegenerateInput("apply_filter: the filter annihilates the JSA");
  out.values *= 1.0 / std::sqrt(survival);
  out.norm_applied = true;
  return {std::move(out), survival};
}

/// |F|^2
inline RealMatrix jsi(const JointSpectralAmplitude& jsa) { return jsa.values.cwiseAbs2(); }

/// Signal marginal of the JSI, sum over the idler axis.
inline std::vector<double> signal_marginal(const JointSpectralAmplitude& jsa) {
  const RealMatrix intensity = jsi(jsa);
  std::vector<double> out(static_cast<std::size_t>(intensity.rows()));
  for (Eigen::Index j = 0; j < intensity.rows(); ++j) out[static_cast<std::size_t>(j)] = intensity.row(j).sum();
  return out;
}

/// Full width at half maximum, in wavelength, of a profile sampled on `grid`.
/// Crossings are located by linear interpolation between samples.
inline double fwhm_wavelength(const FrequencyGrid& grid, const std::vector<double>& profile) {
  const auto peak_it = std::max_element(profile.begin(), profile.end());
  if (peak_it == profile.end() || !(*peak_it > 0.0)) throw DegenerateInput("fwhm: empty profile");
  const double half = 0.5 * *peak_it;
  const auto peak = static_cast<std::size_t>(peak_it - profile.begin());
  std::size_t lo = peak;
  while (lo > 0 && profile[lo - 1] >= half) --lo;
  std::size_t hi = peak;
  while (hi + 1 < profile.size() && profile[hi + 1] >= half) ++hi;
  if (lo == 0 || hi + 1 == profile.size()) throw OutOfBand("fwhm: half maximum not reached inside the grid");
  auto crossing = [&](std::size_t below, std::size_t above) {
    const double t = (half - profile[below]) / (profile[above] - profile[below]);
    return grid.point(below) + t * (grid.point(above) - grid.point(below));
  };
  const double w_lo = crossing(lo - 1, lo);
  const double w_hi = crossing(hi + 1, hi);
  return std::abs(wavelength_from_omega(w_lo) - wavelength_from_omega(w_hi));
}

}  // namespace pairsim
