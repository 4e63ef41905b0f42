#pragma once

// Photon statistics of a multimode squeezed vacuum with per-mode loss.
// Mode lambda has squeezing xi_lambda = xi * sqrt(r_lambda) and amplitude
// transmission eta_lambda (photon survival probability eta^2).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "pairsim/errors.hpp"
#include "pairsim/schmidt.hpp"

namespace pairsim {

struct SqueezingSpec {
  double global_xi = 0.0;
  std::vector<double> schmidt;        // r_lambda
  std::vector<double> transmissions;  // eta_lambda; a single entry applies to every mode

  static SqueezingSpec from_spectrum(double xi, const SchmidtSpectrum& spectrum, double eta) {
    return {xi, spectrum.coefficients, {eta}};
  }

  void validate() const {
    if (!(global_xi >= 0.0) || !std::isfinite(global_xi)) throw InvalidArgument("SqueezingSpec: xi must be >= 0");
    if (schmidt.empty()) throw InvalidArgument("SqueezingSpec: no Schmidt modes");
    for (double r : schmidt)
      if (!(r >= 0.0)) throw InvalidArgument("SqueezingSpec: Schmidt coefficients must be nonnegative");
    if (transmissions.size() != 1 && transmissions.size() != schmidt.size())
      throw InvalidArgument("SqueezingSpec: need one transmission or one per mode");
    for (double eta : transmissions)
      if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidArgument("SqueezingSpec: transmissions must lie in [0, 1]");
  }

  std::size_t modes() const { return schmidt.size(); }
  double xi(std::size_t mode) const { return global_xi * std::sqrt(schmidt.at(mode)); }
  double eta(std::size_t mode) const { return transmissions.size() == 1 ? transmissions[0] : transmissions.at(mode); }
};

/// <n> = sum eta^2 sinh^2 xi_lambda
inline double mean_photon_number(const SqueezingSpec& spec) {
  spec.validate();
  double n = 0.0;
  for (std::size_t m = 0; m < spec.modes(); ++m) {
    const double s = std::sinh(spec.xi(m));
    n += spec.eta(m) * spec.eta(m) * s * s;
  }
  return n;
}

/// Probability that a threshold detector clicks: one minus the product of
/// per-mode vacuum probabilities sech xi / sqrt(1 - (1 - eta^2)^2 tanh^2 xi).
inline double trigger_probability(const SqueezingSpec& spec) {
  spec.validate();
  double log_no_click = 0.0;
  for (std::size_t m = 0; m < spec.modes(); ++m) {
    const double x = spec.xi(m);
    const double loss = 1.0 - spec.eta(m) * spec.eta(m);
    const double t = std::tanh(x);
    log_no_click += -std::log(std::cosh(x)) - 0.5 * std::log1p(-loss * loss * t * t);
  }
  return -std::expm1(log_no_click);
}

inline constexpr double kFockTailTolerance = 1e-10;
inline constexpr int kDefaultMaxPairs = 20;
inline constexpr int kMaxPairsCeiling = 100000;

struct FockTruncation {
  int max_n = kDefaultMaxPairs;  // highest pair number 2n kept before loss
  bool auto_extend = true;
};

namespace detail {

/// Pair-number distribution sech xi tanh^{2n} xi (2n)! / (4^n n!^2), n = 0..max_n.
inline std::vector<double> pair_distribution(double xi, int max_n) {
  std::vector<double> p(static_cast<std::size_t>(max_n) + 1);
  const double t2 = std::tanh(xi) * std::tanh(xi);
  p[0] = 1.0 / std::cosh(xi);
  for (int n = 1; n <= max_n; ++n)
    p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n) - 1] * t2 * (2.0 * n - 1.0) / (2.0 * n);
  return p;
}

inline double tail_mass(const std::vector<double>& p) {
  double kept = 0.0;
  for (double v : p) kept += v;
  return std::max(0.0, 1.0 - kept);
}

/// Smallest max_n whose tail drops below the tolerance, or -1 past the ceiling.
inline int required_pairs(double xi) {
  const double t2 = std::tanh(xi) * std::tanh(xi);
  double term = 1.0 / std::cosh(xi);
  double kept = term;
  for (int n = 1; n <= kMaxPairsCeiling; ++n) {
    if (1.0 - kept < kFockTailTolerance) return n - 1;
    term *= t2 * (2.0 * n - 1.0) / (2.0 * n);
    kept += term;
  }
  return -1;
}

}  // namespace detail

/// Photon-number probabilities P(m), m = 0..2 max_n, of one lossy Schmidt
/// mode. Each of the 2n generated photons survives independently with
/// probability eta^2.
inline std::vector<double> lossy_density_diagonal(const SqueezingSpec& spec, std::size_t mode,
                                                  FockTruncation truncation = {}) {
  spec.validate();
  if (mode >= spec.modes()) throw InvalidArgument("lossy_density_diagonal: mode index out of range");
  if (truncation.max_n < 0) throw InvalidArgument("lossy_density_diagonal: max_n must be >= 0");
  const double xi = spec.xi(mode);
  const double eta2 = spec.eta(mode) * spec.eta(mode);

  int max_n = truncation.max_n;
  auto pairs = detail::pair_distribution(xi, max_n);
  if (detail::tail_mass(pairs) >= kFockTailTolerance) {
    const int needed = detail::required_pairs(xi);
    if (!truncation.auto_extend || needed < 0)
      throw TruncationError("lossy_density_diagonal: Fock truncation at max_n=" + std::to_string(max_n) +
                                " leaves tail above 1e-10",
                            needed < 0 ? kMaxPairsCeiling : needed);
    max_n = needed;
    pairs = detail::pair_distribution(xi, max_n);
  }

  // Binomial thinning of 2n photons, evaluated in log space.
  const int top = 2 * max_n;
  const double log_keep = std::log(eta2);
  const double log_lose = std::log1p(-eta2);
  std::vector<double> out(static_cast<std::size_t>(top) + 1, 0.0);
  for (int n = 0; n <= max_n; ++n) {
    const double pn = pairs[static_cast<std::size_t>(n)];
    if (pn == 0.0) continue;
    const int photons = 2 * n;
    if (eta2 == 1.0) {
      out[static_cast<std::size_t>(photons)] += pn;
      continue;
    }
    if (eta2 == 0.0) {
      out[0] += pn;
      continue;
    }
    const double log_fact = std::lgamma(photons + 1.0);
    for (int m = 0; m <= photons; ++m) {
      const double log_binom = log_fact - std::lgamma(m + 1.0) - std::lgamma(photons - m + 1.0);
      out[static_cast<std::size_t>(m)] += pn * std::exp(log_binom + m * log_keep + (photons - m) * log_lose);
    }
  }
  return out;
}

}  // namespace pairsim
