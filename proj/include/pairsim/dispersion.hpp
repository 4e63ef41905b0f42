#pragma once

#include <cmath>
#include <complex>

#include "pairsim/errors.hpp"

namespace pairsim {

/// Taylor model of the propagation constant about `reference_omega`:
///   k(w) = beta0 + beta1 d + beta2 d^2 / 2 + beta3 d^3 / 6,  d = w - w0.
struct DispersionModel {
  double reference_omega = 0.0;  // rad/s
  double beta0 = 0.0;            // 1/m
  double beta1 = 0.0;            // s/m
  double beta2 = 0.0;            // s^2/m
  double beta3 = 0.0;            // s^3/m

  bool operator==(const DispersionModel&) const = default;
};

inline double k_of_omega(const DispersionModel& model, double omega) {
  const double d = omega - model.reference_omega;
  return model.beta0 + d * (model.beta1 + d * (0.5 * model.beta2 + d * model.beta3 / 6.0));
}

/// Phase mismatch k(ws) + k(wi) - k(wp) - k(ws + wi - wp) for a pump photon at
/// `omega_p1`; the fourth frequency follows from energy conservation.
///
/// Evaluated on offsets from the reference frequency so that the constant and
/// linear Taylor terms cancel exactly instead of through subtraction of ~1e7
/// sized wavevectors.
inline double delta_k(const DispersionModel& model, double omega_s, double omega_i, double omega_p1) {
  const double ds = omega_s - model.reference_omega;
  const double di = omega_i - model.reference_omega;
  const double dp = omega_p1 - model.reference_omega;
  const double d4 = (ds + di) - dp;
  const double quadratic = ds * ds + di * di - dp * dp - d4 * d4;
  const double cubic = ds * ds * ds + di * di * di - dp * dp * dp - d4 * d4 * d4;
  return 0.5 * model.beta2 * quadratic + model.beta3 * cubic / 6.0;
}

/// sin(x)/x with a series branch near zero.
inline double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

/// exp(i dk L / 2) sinc(dk L / 2).
inline std::complex<double> phase_matching(const DispersionModel& model, double length_m, double omega_s,
                                           double omega_i, double omega_p1) {
  if (!(length_m >= 0.0)) throw InvalidArgument("phase_matching: length must be non-negative");
  const double half = 0.5 * delta_k(model, omega_s, omega_i, omega_p1) * length_m;
  return std::polar(sinc(half), half);
}

}  // namespace pairsim
