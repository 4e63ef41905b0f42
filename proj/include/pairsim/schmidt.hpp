#pragma once

// Schmidt decomposition of a discretized JSA, purity, and the JSA overlap
// N e^{i delta} that fixes the HOM visibility V = 2N / (1 + N).

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "pairsim/errors.hpp"
#include "pairsim/jsa.hpp"

namespace pairsim {

inline constexpr double kSchmidtTruncation = 1e-12;  // relative to the leading coefficient

struct SchmidtSpectrum {
  /// Reported coefficients r, nonincreasing; entries below 1e-12 * r[0] are dropped.
  std::vector<double> coefficients;
  /// Sum over all coefficients, including the dropped tail.
  double total = 0.0;
  double dropped_mass = 0.0;
  /// Mode functions (one per column, unit L2 as functions of omega); empty
  /// unless requested.
  ComplexMatrix signal_modes;
  ComplexMatrix idler_modes;

  double purity() const {
    double p = 0.0;
    for (double r : coefficients) p += r * r;
    return p;
  }
};

enum class SchmidtModes { Skip, Compute };

inline SchmidtSpectrum schmidt_decompose(const JointSpectralAmplitude& jsa, SchmidtModes modes = SchmidtModes::Skip) {
  if (!is_normalized(jsa)) throw NotNormalized("schmidt_decompose: JSA must be unit-normalized");
  const double ds = jsa.grid_s.step();
  const double di = jsa.grid_i.step();
  const Eigen::MatrixXcd weighted = jsa.values * std::sqrt(ds * di);

  const unsigned options = modes == SchmidtModes::Compute ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0u;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted, options);
  const Eigen::VectorXd& s = svd.singularValues();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(s.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return s(a) > s(b); });

  SchmidtSpectrum out;
  for (Eigen::Index idx : order) out.total += s(idx) * s(idx);
  const double leading = order.empty() ? 0.0 : s(order.front()) * s(order.front());
  std::vector<Eigen::Index> kept;
  for (Eigen::Index idx : order) {
    const double r = s(idx) * s(idx);
    if (r >= kSchmidtTruncation * leading && r > 0.0) {
      out.coefficients.push_back(r);
      kept.push_back(idx);
    } else {
      out.dropped_mass += r;
    }
  }

  if (modes == SchmidtModes::Compute) {
    const auto cols = static_cast<Eigen::Index>(kept.size());
    out.signal_modes.resize(weighted.rows(), cols);
    out.idler_modes.resize(weighted.cols(), cols);
    // F = sum sqrt(r) u(ws) v(wi); with M = U S V^H the idler mode is conj(V).
    for (Eigen::Index c = 0; c < cols; ++c) {
      out.signal_modes.col(c) = svd.matrixU().col(kept[static_cast<std::size_t>(c)]) / std::sqrt(ds);
      out.idler_modes.col(c) = svd.matrixV().col(kept[static_cast<std::size_t>(c)]).conjugate() / std::sqrt(di);
    }
  }
  return out;
}

/// Sum of squared Schmidt coefficients.
inline double purity(const JointSpectralAmplitude& jsa) {
  const SchmidtSpectrum spectrum = schmidt_decompose(jsa);
  double p = 0.0;
  for (double r : spectrum.coefficients) p += r * r;
  return p;
}

struct OverlapResult {
  double magnitude = 0.0;  // N in [0, 1]
  double phase = 0.0;      // delta in (-pi, pi]
};

/// N e^{i delta} = sum f_s f_i F1 conj(F2) dw^2, with each JSA normalized
/// under the same detection weight f_s f_i.
inline OverlapResult jsa_overlap(const JointSpectralAmplitude& first, const JointSpectralAmplitude& second,
                                 const FilterSpec& filter_s, const FilterSpec& filter_i) {
  if (!(first.grid_s == second.grid_s) || !(first.grid_i == second.grid_i))
    throw GridMismatch("jsa_overlap: JSAs live on different grids");
  const auto fs = sample_filter(filter_s, first.grid_s);
  const auto fi = sample_filter(filter_i, first.grid_i);
  std::complex<double> cross{0.0, 0.0};
  double norm1 = 0.0;
  double norm2 = 0.0;
  for (Eigen::Index j = 0; j < first.values.rows(); ++j) {
    for (Eigen::Index k = 0; k < first.values.cols(); ++k) {
      const double w = fs[static_cast<std::size_t>(j)] * fi[static_cast<std::size_t>(k)];
      if (w == 0.0) continue;
      const auto a = first.values(j, k);
      const auto b = second.values(j, k);
      cross += w * a * std::conj(b);
      norm1 += w * std::norm(a);
      norm2 += w * std::norm(b);
    }
  }
  if (!(norm1 > 0.0) || !(norm2 > 0.0)) throw DegenerateInput("jsa_overlap: filter annihilates a JSA");
  const std::complex<double> value = cross / std::sqrt(norm1 * norm2);
  OverlapResult out;
  out.magnitude = std::min(1.0, std::abs(value));
  out.phase = out.magnitude == 0.0 ? 0.0 : std::arg(value);
  if (out.phase == -std::numbers::pi) out.phase = std::numbers::pi;
  return out;
}

inline double visibility_from_overlap(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw InvalidArgument("visibility_from_overlap: N must lie in [0, 1]");
  return 2.0 * overlap / (1.0 + overlap);
}

inline double overlap_from_visibility(double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw InvalidArgument("overlap_from_visibility: V must lie in [0, 1]");
  return visibility / (2.0 - visibility);
}

}  // namespace pairsim
