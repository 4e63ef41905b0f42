#pragma once

// Closed-form coincidence probabilities for the reverse-HOM circuit and the
// two-MZI circuit, given the JSA overlap N e^{i delta}; fringe scans,
// visibility extraction and accidental-count correction.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pairsim/errors.hpp"

namespace pairsim {

namespace detail {

inline void check_overlap(double n) {
  if (!(n >= 0.0 && n <= 1.0)) throw InvalidArgument("overlap magnitude N must lie in [0, 1]");
}

}  // namespace detail

/// p12 = (1 + N cos(2 phi + delta)) / 2
inline double reverse_hom_coincidence(double n, double delta, double phi) {
  detail::check_overlap(n);
  return 0.5 * (1.0 + n * std::cos(2.0 * phi + delta));
}

/// Scaled so that the fringe maximum is 1.
inline double reverse_hom_coincidence_normalized(double n, double delta, double phi) {
  detail::check_overlap(n);
  return (1.0 + n * std::cos(2.0 * phi + delta)) / (1.0 + n);
}

enum class ChannelPair { P12, P13, P14, P23, P24, P34 };

inline constexpr std::array<ChannelPair, 6> kAllChannelPairs{ChannelPair::P12, ChannelPair::P13, ChannelPair::P14,
                                                             ChannelPair::P23, ChannelPair::P24, ChannelPair::P34};

inline std::string channel_pair_name(ChannelPair pair) {
  switch (pair) {
    case ChannelPair::P12: return "p12";
    case ChannelPair::P13: return "p13";
    case ChannelPair::P14: return "p14";
    case ChannelPair::P23: return "p23";
    case ChannelPair::P24: return "p24";
    case ChannelPair::P34: return "p34";
  }
  return "p??";
}

struct TwoMziProbabilities {
  double p12 = 0.0;
  double p13 = 0.0;
  double p14 = 0.0;
  double p23 = 0.0;
  double p24 = 0.0;
  double p34 = 0.0;

  double get(ChannelPair pair) const {
    switch (pair) {
      case ChannelPair::P12: return p12;
      case ChannelPair::P13: return p13;
      case ChannelPair::P14: return p14;
      case ChannelPair::P23: return p23;
      case ChannelPair::P24: return p24;
      case ChannelPair::P34: return p34;
    }
    return 0.0;
  }
};

namespace detail {

struct PairLaw {
  double sign;  // +1 or -1 in front of N cos(...)
  double c1;    // coefficient of phi1 in the cosine argument
  double c2;    // coefficient of phi2
};

inline PairLaw pair_law(ChannelPair pair) {
  switch (pair) {
    case ChannelPair::P12: return {1.0, 2.0, 0.0};
    case ChannelPair::P13:
    case ChannelPair::P24: return {1.0, 2.0, -1.0};
    case ChannelPair::P14:
    case ChannelPair::P23: return {-1.0, 2.0, -1.0};
    case ChannelPair::P34: return {1.0, 2.0, -2.0};
  }
  return {1.0, 0.0, 0.0};
}

inline double pair_probability(ChannelPair pair, double n, double delta, double phi1, double phi2, bool normalized) {
  const PairLaw law = pair_law(pair);
  const double fringe = 1.0 + law.sign * n * std::cos(law.c1 * phi1 + law.c2 * phi2 + delta);
  return normalized ? fringe / (1.0 + n) : fringe / 8.0;
}

}  // namespace detail

/// Raw (1/8-scaled) coincidence probabilities for every output pair.
inline TwoMziProbabilities two_mzi_coincidences(double n, double delta, double phi1, double phi2) {
  detail::check_overlap(n);
  TwoMziProbabilities p;
  p.p12 = detail::pair_probability(ChannelPair::P12, n, delta, phi1, phi2, false);
  p.p13 = detail::pair_probability(ChannelPair::P13, n, delta, phi1, phi2, false);
  p.p14 = detail::pair_probability(ChannelPair::P14, n, delta, phi1, phi2, false);
  p.p23 = p.p14;
  p.p24 = p.p13;
  p.p34 = detail::pair_probability(ChannelPair::P34, n, delta, phi1, phi2, false);
  return p;
}

/// Each pair rescaled so its fringe maximum is 1.
inline TwoMziProbabilities two_mzi_coincidences_normalized(double n, double delta, double phi1, double phi2) {
  detail::check_overlap(n);
  TwoMziProbabilities p;
  p.p12 = detail::pair_probability(ChannelPair::P12, n, delta, phi1, phi2, true);
  p.p13 = detail::pair_probability(ChannelPair::P13, n, delta, phi1, phi2, true);
  p.p14 = detail::pair_probability(ChannelPair::P14, n, delta, phi1, phi2, true);
  p.p23 = p.p14;
  p.p24 = p.p13;
  p.p34 = detail::pair_probability(ChannelPair::P34, n, delta, phi1, phi2, true);
  return p;
}

struct FringeScan {
  std::vector<double> phase_values;
  ChannelPair channel_pair = ChannelPair::P12;
  std::vector<double> probabilities;
  bool normalized = false;
  /// Fringe period in the scanned phase; 0 when the scanned phase does not
  /// enter the probability.
  double period = std::numbers::pi;
};

/// start, start + step, ... up to and including stop (within 1e-9 step).
inline std::vector<double> phase_range(double start, double stop, double step) {
  if (!(step > 0.0)) throw InvalidArgument("phase step must be positive");
  if (!(stop >= start)) throw InvalidArgument("phase stop must not precede start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = start + static_cast<double>(k) * step;
  return out;
}

inline FringeScan reverse_hom_scan(double n, double delta, const std::vector<double>& phases, bool normalized) {
  FringeScan scan{phases, ChannelPair::P12, {}, normalized, std::numbers::pi};
  scan.probabilities.reserve(phases.size());
  for (double phi : phases)
    scan.probabilities.push_back(normalized ? reverse_hom_coincidence_normalized(n, delta, phi)
                                            : reverse_hom_coincidence(n, delta, phi));
  return scan;
}

enum class ScanAxis { Phi1, Phi2 };

/// Scans one of the two MZI phases with the other held at `fixed_phase`.
inline FringeScan two_mzi_scan(ChannelPair pair, double n, double delta, ScanAxis axis, double fixed_phase,
                               const std::vector<double>& phases, bool normalized) {
  detail::check_overlap(n);
  const auto law = detail::pair_law(pair);
  const double coefficient = std::abs(axis == ScanAxis::Phi1 ? law.c1 : law.c2);
  FringeScan scan{phases, pair, {}, normalized, coefficient == 0.0 ? 0.0 : 2.0 * std::numbers::pi / coefficient};
  scan.probabilities.reserve(phases.size());
  for (double phi : phases) {
    const double phi1 = axis == ScanAxis::Phi1 ? phi : fixed_phase;
    const double phi2 = axis == ScanAxis::Phi2 ? phi : fixed_phase;
    scan.probabilities.push_back(detail::pair_probability(pair, n, delta, phi1, phi2, normalized));
  }
  return scan;
}

/// (max - min) / max over the scan.
inline double extract_visibility(const FringeScan& scan) {
  if (scan.probabilities.empty() || scan.probabilities.size() != scan.phase_values.size())
    throw InvalidArgument("extract_visibility: empty or inconsistent scan");
  const auto [lo_it, hi_it] = std::minmax_element(scan.phase_values.begin(), scan.phase_values.end());
  const double coverage = *hi_it - *lo_it;
  if (scan.period > 0.0 && coverage < scan.period * (1.0 - 1e-9))
    throw InsufficientCoverage("extract_visibility: scan covers " + std::to_string(coverage) +
                               " rad, less than one fringe period of " + std::to_string(scan.period) + " rad");
  const auto [pmin, pmax] = std::minmax_element(scan.probabilities.begin(), scan.probabilities.end());
  if (!(*pmax > 0.0)) throw DegenerateInput("extract_visibility: scan is identically zero");
  return (*pmax - *pmin) / *pmax;
}

/// Detector transmissions of a single MZI, (cos^2(phi/2), sin^2(phi/2)). With
/// `quadrature_offset` the phase is shifted by -pi/2.
inline std::pair<double, double> classical_transmission(double phi, bool quadrature_offset = false) {
  const double x = quadrature_offset ? phi - 0.5 * std::numbers::pi : phi;
  const double c = std::cos(0.5 * x);
  const double s = std::sin(0.5 * x);
  return {c * c, s * s};
}

/// Fraction of coincidences that are accidental, 1 / (CAR + 1).
inline double accidental_fraction(double car) {
  if (!(car > 0.0) || !std::isfinite(car)) throw InvalidArgument("CAR must be positive and finite");
  return 1.0 / (car + 1.0);
}

/// Visibility with accidental coincidences removed, min(1, V / (1 - a)).
inline double corrected_visibility(double visibility, double car) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) throw InvalidArgument("visibility must lie in [0, 1]");
  const double a = accidental_fraction(car);
  return std::min(1.0, visibility / (1.0 - a));
}

}  // namespace pairsim
