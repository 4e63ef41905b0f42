#pragma once

// Frequency grids, pump line amplitudes and band-pass filter profiles.
//
// Wavelength (metres) is the user-facing unit; everything internal is angular
// frequency in rad/s. Conversion happens only through omega_from_wavelength /
// wavelength_from_omega.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "pairsim/errors.hpp"

namespace pairsim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double omega_from_wavelength(double wavelength_m) {
  return kTwoPi * kSpeedOfLight / wavelength_m;
}

inline double wavelength_from_omega(double omega_rad_s) {
  return kTwoPi * kSpeedOfLight / omega_rad_s;
}

/// Converts a wavelength interval around `center_m` into the matching
/// angular-frequency interval (first-order, dw = 2 pi c dl / l^2).
inline double omega_span_from_wavelength_span(double span_m, double center_m) {
  return kTwoPi * kSpeedOfLight * span_m / (center_m * center_m);
}

/// Uniform angular-frequency axis. Points are generated by index
/// multiplication, never by accumulation.
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double omega_max, std::size_t n_points)
      : omega_min_(omega_min), omega_max_(omega_max), n_points_(n_points) {
    if (!(omega_max > omega_min) || !std::isfinite(omega_min) || !std::isfinite(omega_max))
      throw InvalidArgument("FrequencyGrid: omega_max must exceed omega_min");
    if (n_points < 2) throw InvalidArgument("FrequencyGrid: need at least 2 points");
    step_ = (omega_max_ - omega_min_) / static_cast<double>(n_points_ - 1);
  }

  double omega_min() const { return omega_min_; }
  double omega_max() const { return omega_max_; }
  std::size_t size() const { return n_points_; }
  double step() const { return step_; }

  double point(std::size_t k) const { return omega_min_ + static_cast<double>(k) * step_; }
  double wavelength(std::size_t k) const { return wavelength_from_omega(point(k)); }

  bool contains(double omega) const { return omega >= omega_min_ && omega <= omega_max_; }

  std::vector<double> points() const {
    std::vector<double> out(n_points_);
    for (std::size_t k = 0; k < n_points_; ++k) out[k] = point(k);
    return out;
  }

  bool operator==(const FrequencyGrid&) const = default;

 private:
  double omega_min_;
  double omega_max_;
  std::size_t n_points_;
  double step_ = 0.0;
};

/// Grid spanning [center - span/2, center + span/2] in wavelength, uniform in
/// angular frequency.
inline FrequencyGrid make_grid(double center_wavelength_m, double span_m, std::size_t n_points) {
  if (!(center_wavelength_m > 0.0)) throw InvalidArgument("make_grid: center wavelength must be positive");
  if (!(span_m > 0.0)) throw InvalidArgument("make_grid: span must be positive");
  if (!(span_m < 2.0 * center_wavelength_m)) throw InvalidArgument("make_grid: span exceeds twice the center wavelength");
  if (n_points < 2) throw InvalidArgument("make_grid: need at least 2 points");
  const double omega_min = omega_from_wavelength(center_wavelength_m + 0.5 * span_m);
  const double omega_max = omega_from_wavelength(center_wavelength_m - 0.5 * span_m);
  return FrequencyGrid(omega_min, omega_max, n_points);
}

enum class LineShape { Gaussian, Lorentzian };

inline double gaussian_sigma_from_fwhm(double fwhm) {
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

/// A CW pump laser line with a finite effective linewidth. `linewidth_fwhm`
/// is the full width at half maximum of the intensity |amplitude|^2.
struct PumpLine {
  double center_wavelength_m = 0.0;
  double linewidth_fwhm_rad_s = kTwoPi * 5e9;
  LineShape shape = LineShape::Gaussian;
  std::complex<double> relative_amplitude{1.0, 0.0};

  double center_omega() const { return omega_from_wavelength(center_wavelength_m); }

  void validate() const {
    if (!(center_wavelength_m > 0.0)) throw InvalidArgument("PumpLine: center wavelength must be positive");
    if (!(linewidth_fwhm_rad_s > 0.0)) throw InvalidArgument("PumpLine: linewidth must be positive");
  }

  /// Unnormalized analytic amplitude; peak modulus equals |relative_amplitude|.
  std::complex<double> amplitude(double omega) const {
    const double x = omega - center_omega();
    if (shape == LineShape::Gaussian) {
      const double sigma = gaussian_sigma_from_fwhm(linewidth_fwhm_rad_s);
      return relative_amplitude * std::exp(-x * x / (4.0 * sigma * sigma));
    }
    return relative_amplitude / std::complex<double>(1.0, -2.0 * x / linewidth_fwhm_rad_s);
  }

  bool operator==(const PumpLine&) const = default;
};

/// Complex samples of a 1D spectrum on a grid.
struct SampledSpectrum {
  FrequencyGrid grid;
  std::vector<std::complex<double>> values;

  double l2_norm_squared() const {
    double acc = 0.0;
    for (const auto& v : values) acc += std::norm(v);
    return acc * grid.step();
  }
};

enum class ResolutionPolicy { Strict, Warn };

/// Samples `line` on `grid` and scales it to unit L2 norm (sum |a|^2 dw = 1).
inline SampledSpectrum sample_pump(const PumpLine& line, const FrequencyGrid& grid,
                                   ResolutionPolicy policy = ResolutionPolicy::Strict) {
  line.validate();
  if (!grid.contains(line.center_omega()))
    throw OutOfBand("sample_pump: line center " + std::to_string(line.center_wavelength_m) +
                    " m lies outside the grid");
  if (line.linewidth_fwhm_rad_s < 2.0 * grid.step()) {
    const std::string msg = "sample_pump: linewidth is below two grid steps";
    if (policy == ResolutionPolicy::Strict) throw UnderResolved(msg);
    std::clog << "warning: " << msg << '\n';
  }
  SampledSpectrum out{grid, std::vector<std::complex<double>>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) out.values[k] = line.amplitude(grid.point(k));
  const double norm2 = out.l2_norm_squared();
  if (!(norm2 > 0.0)) throw DegenerateInput("sample_pump: sampled spectrum is identically zero");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : out.values) v *= scale;
  return out;
}

/// Overlap integral  sum a(w) conj(b(w)) dw. Spectra on grids whose ranges do
/// not intersect have zero overlap; otherwise the grids must be identical.
inline std::complex<double> spectral_overlap(const SampledSpectrum& a, const SampledSpectrum& b) {
  if (a.grid.omega_max() < b.grid.omega_min() || b.grid.omega_max() < a.grid.omega_min()) return {0.0, 0.0};
  if (!(a.grid == b.grid)) throw GridMismatch("spectral_overlap: partially overlapping grids are not supported");
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.values.size(); ++k) acc += a.values[k] * std::conj(b.values[k]);
  return acc * a.grid.step();
}

enum class FilterProfile { AllPass, IdealRectangle, RaisedCosine };

/// Band-pass filter. `bandwidth_m` is the full width in wavelength; for the
/// raised cosine it is the width at half transmission.
struct FilterSpec {
  double center_wavelength_m = 0.0;
  double bandwidth_m = 0.0;
  FilterProfile profile = FilterProfile::IdealRectangle;
  double rolloff = 0.0;

  static FilterSpec all_pass() { return FilterSpec{0.0, 0.0, FilterProfile::AllPass, 0.0}; }

  void validate() const {
    if (profile == FilterProfile::AllPass) return;
    if (!(center_wavelength_m > 0.0)) throw InvalidArgument("FilterSpec: center wavelength must be positive");
    if (!(bandwidth_m > 0.0)) throw InvalidArgument("FilterSpec: bandwidth must be positive");
    if (!(bandwidth_m < 2.0 * center_wavelength_m)) throw InvalidArgument("FilterSpec: bandwidth too large");
    if (!(rolloff >= 0.0 && rolloff <= 1.0)) throw InvalidArgument("FilterSpec: rolloff must lie in [0, 1]");
  }

  double omega_low() const { return omega_from_wavelength(center_wavelength_m + 0.5 * bandwidth_m); }
  double omega_high() const { return omega_from_wavelength(center_wavelength_m - 0.5 * bandwidth_m); }

  bool operator==(const FilterSpec&) const = default;
};

namespace detail {

inline std::vector<double> rectangle_on_grid(double omega_lo, double omega_hi, const FrequencyGrid& grid) {
  std::vector<double> f(grid.size(), 0.0);
  if (omega_hi < grid.omega_min() || omega_lo > grid.omega_max()) return f;
  const auto n = static_cast<long>(grid.size());
  // Edges snap to the nearest grid index; the low-frequency edge is inclusive.
  long k_lo = std::lround((omega_lo - grid.omega_min()) / grid.step());
  long k_hi = std::lround((omega_hi - grid.omega_min()) / grid.step());
  k_lo = std::max(k_lo, 0L);
  k_hi = std::min(k_hi, n);
  for (long k = k_lo; k < k_hi; ++k) f[static_cast<std::size_t>(k)] = 1.0;
  return f;
}

}  // namespace detail

/// Real amplitude transmission of `filter` on `grid`, values in [0, 1].
inline std::vector<double> sample_filter(const FilterSpec& filter, const FrequencyGrid& grid) {
  filter.validate();
  if (filter.profile == FilterProfile::AllPass) return std::vector<double>(grid.size(), 1.0);
  const double lo = filter.omega_low();
  const double hi = filter.omega_high();
  if (filter.profile == FilterProfile::IdealRectangle || filter.rolloff == 0.0)
    return detail::rectangle_on_grid(lo, hi, grid);

  const double center = 0.5 * (lo + hi);
  const double width = hi - lo;
  const double flat = 0.5 * (1.0 - filter.rolloff) * width;
  const double edge = 0.5 * (1.0 + filter.rolloff) * width;
  std::vector<double> f(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double x = std::abs(grid.point(k) - center);
    if (x <= flat) {
      f[k] = 1.0;
    } else if (x <= edge) {
      const double t = std::numbers::pi * (x - flat) / (filter.rolloff * width);
      f[k] = std::clamp(0.5 * (1.0 + std::cos(t)), 0.0, 1.0);
    }
  }
  return f;
}

}  // namespace pairsim
