#pragma once

// Command implementations behind the pairsim CLI. Each command takes a
// validated Scenario, does the numerics, and writes plain-text / CSV output
// through the shared formatting routines.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pairsim/errors.hpp"
#include "pairsim/format.hpp"
#include "pairsim/fringes.hpp"
#include "pairsim/jsa.hpp"
#include "pairsim/scenario.hpp"
#include "pairsim/schmidt.hpp"
#include "pairsim/squeezing.hpp"

#ifndef PAIRSIM_SCENARIO_DIR
#define PAIRSIM_SCENARIO_DIR "scenarios"
#endif

namespace pairsim {

enum class OutputFormat { Csv, Txt };

struct RunOptions {
  std::optional<long> grid_points;
  bool no_filter = false;
  std::optional<double> car;
  OutputFormat format = OutputFormat::Txt;
};

inline std::string output_header(const std::string& kind, const Scenario& s) {
  return "# pairsim " + kind + " schema=" + std::to_string(kSchemaVersion) + " scenario=" + s.name +
         " hash=" + scenario_hash(s) + "\n";
}

/// Scenario with command-line overrides folded in; the hash in output headers
/// then identifies the effective configuration.
inline Scenario effective_scenario(Scenario s, const RunOptions& opts) {
  if (opts.grid_points) s.grid.points = *opts.grid_points;
  if (opts.no_filter) s.filter.enabled = false;
  if (opts.car) s.car = *opts.car;
  validate(s);
  return s;
}

inline JointSpectralAmplitude build_source_jsa(const Scenario& s, const SourceModelConfig& model,
                                               const FrequencyGrid& grid) {
  const PumpLine p1 = to_pump_line(s.pumps.at(0));
  const PumpLine p2 = to_pump_line(s.pumps.at(1));
  if (model.type == SourceType::Waveguide) return build_waveguide_jsa(p1, p2, to_waveguide(model.waveguide), grid, s.quadrature);
  return build_ring_jsa(p1, p2, to_ring(model.ring), grid, s.quadrature);
}

struct FilteredSource {
  JointSpectralAmplitude jsa;  // filtered and renormalized
  double survival = 1.0;
};

inline FilteredSource build_filtered_jsa(const Scenario& s, const SourceModelConfig& model) {
  const FrequencyGrid grid = to_grid(s.grid);
  const FilterSpec filter = to_filter(s.filter);
  auto filtered = apply_filter(build_source_jsa(s, model, grid), filter, filter);
  return {std::move(filtered.jsa), filtered.survival};
}

// ---------------------------------------------------------------------------
// jsi

struct JsiResult {
  JointSpectralAmplitude jsa;
  double survival = 1.0;
  double marginal_fwhm_m = 0.0;  // 0 when the half maximum is not reached on the grid
  double in_band_fraction = 1.0;
};

inline void write_jsi(std::ostream& out, const Scenario& s, const JointSpectralAmplitude& jsa) {
  const RealMatrix intensity = jsi(jsa);
  out << output_header("jsi", s);
  out << "nx,ny,omega_s_min,omega_s_max,omega_i_min,omega_i_max,lambda_s_min_m,lambda_s_max_m,lambda_i_min_m,"
         "lambda_i_max_m\n";
  out << jsa.grid_s.size() << ',' << jsa.grid_i.size() << ',' << format_exact(jsa.grid_s.omega_min()) << ','
      << format_exact(jsa.grid_s.omega_max()) << ',' << format_exact(jsa.grid_i.omega_min()) << ','
      << format_exact(jsa.grid_i.omega_max()) << ',' << format_exact(wavelength_from_omega(jsa.grid_s.omega_max()))
      << ',' << format_exact(wavelength_from_omega(jsa.grid_s.omega_min())) << ','
      << format_exact(wavelength_from_omega(jsa.grid_i.omega_max())) << ','
      << format_exact(wavelength_from_omega(jsa.grid_i.omega_min())) << '\n';
  for (Eigen::Index j = 0; j < intensity.rows(); ++j) {
    for (Eigen::Index k = 0; k < intensity.cols(); ++k) {
      if (k) out << ',';
      out << format_exact(intensity(j, k));
    }
    out << '\n';
  }
}

struct JsiFile {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  RealMatrix values;
};

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace detail

/// Reads a file produced by write_jsi.
inline JsiFile read_jsi(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# pairsim jsi", 0) != 0) throw InvalidArgument("read_jsi: bad header");
  std::getline(in, line);  // column names
  if (!std::getline(in, line)) throw InvalidArgument("read_jsi: missing dimensions");
  const auto dims = detail::split_csv(line);
  if (dims.size() < 6) throw InvalidArgument("read_jsi: malformed dimension line");
  const auto nx = static_cast<std::size_t>(parse_double(dims[0]));
  const auto ny = static_cast<std::size_t>(parse_double(dims[1]));
  JsiFile file{FrequencyGrid(parse_double(dims[2]), parse_double(dims[3]), nx),
               FrequencyGrid(parse_double(dims[4]), parse_double(dims[5]), ny),
               RealMatrix(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny))};
  for (std::size_t j = 0; j < nx; ++j) {
    if (!std::getline(in, line)) throw InvalidArgument("read_jsi: truncated file");
    const auto cells = detail::split_csv(line);
    if (cells.size() != ny) throw InvalidArgument("read_jsi: wrong row length");
    for (std::size_t k = 0; k < ny; ++k)
      file.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = parse_double(cells[k]);
  }
  return file;
}

/// Fraction of sum |F|^2 dw^2 lying inside the scenario's filter band.
inline double in_band_fraction(const JointSpectralAmplitude& jsa, const FilterSpec& filter) {
  if (filter.profile == FilterProfile::AllPass) return 1.0;
  const double lo = filter.omega_low();
  const double hi = filter.omega_high();
  double inside = 0.0;
  double total = 0.0;
  for (Eigen::Index j = 0; j < jsa.values.rows(); ++j) {
    for (Eigen::Index k = 0; k < jsa.values.cols(); ++k) {
      const double v = std::norm(jsa.values(j, k));
      total += v;
      const double ws = jsa.grid_s.point(static_cast<std::size_t>(j));
      const double wi = jsa.grid_i.point(static_cast<std::size_t>(k));
      if (v > 0.0 && ws >= lo - 0.5 * jsa.grid_s.step() && ws <= hi + 0.5 * jsa.grid_s.step() &&
          wi >= lo - 0.5 * jsa.grid_i.step() && wi <= hi + 0.5 * jsa.grid_i.step())
        inside += v;
    }
  }
  return total > 0.0 ? inside / total : 0.0;
}

/// Builds the (first) source JSA, filters it, and optionally writes the JSI grid.
inline JsiResult cmd_jsi(const Scenario& scenario, const RunOptions& opts, std::ostream* grid_out) {
  const Scenario s = effective_scenario(scenario, opts);
  auto built = build_filtered_jsa(s, s.source.first);
  JsiResult result{std::move(built.jsa), built.survival, 0.0, 1.0};
  try {
    result.marginal_fwhm_m = fwhm_wavelength(result.jsa.grid_s, signal_marginal(result.jsa));
  } catch (const OutOfBand&) {
    result.marginal_fwhm_m = 0.0;
  }
  result.in_band_fraction = in_band_fraction(result.jsa, to_filter(s.filter));
  if (grid_out) write_jsi(*grid_out, s, result.jsa);
  return result;
}

// ---------------------------------------------------------------------------
// purity / schmidt

struct PurityReport {
  double purity = 0.0;
  double schmidt_tail = 0.0;  // 1 - r_0
  double survival = 1.0;
  std::size_t modes = 0;
};

inline PurityReport cmd_purity(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = effective_scenario(scenario, opts);
  const auto built = build_filtered_jsa(s, s.source.first);
  const auto spectrum = schmidt_decompose(built.jsa);
  return {spectrum.purity(), 1.0 - spectrum.coefficients.front(), built.survival, spectrum.coefficients.size()};
}

inline void write_purity(std::ostream& out, const Scenario& s, const PurityReport& r, OutputFormat format) {
  out << output_header("purity", s);
  if (format == OutputFormat::Csv) {
    out << "scenario,purity,schmidt_tail,survival,modes\n";
    out << s.name << ',' << format_number(r.purity) << ',' << format_number(r.schmidt_tail) << ','
        << format_number(r.survival) << ',' << r.modes << '\n';
  } else {
    out << "purity=" << format_number(r.purity) << " schmidt_tail=" << format_number(r.schmidt_tail)
        << " survival=" << format_number(r.survival) << " modes=" << r.modes << '\n';
  }
}

inline SchmidtSpectrum cmd_schmidt(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = effective_scenario(scenario, opts);
  return schmidt_decompose(build_filtered_jsa(s, s.source.first).jsa);
}

inline void write_schmidt(std::ostream& out, const Scenario& s, const SchmidtSpectrum& spectrum) {
  out << output_header("schmidt", s);
  out << "mode,r\n";
  for (std::size_t k = 0; k < spectrum.coefficients.size(); ++k)
    out << k << ',' << format_number(spectrum.coefficients[k]) << '\n';
}

// ---------------------------------------------------------------------------
// fringe

struct FringeReport {
  OverlapResult overlap;
  ChannelPair reported_pair = ChannelPair::P12;
  double visibility = 0.0;  // extracted from the raw scan of reported_pair
  std::optional<double> car;
  std::optional<double> corrected_visibility;
  std::vector<FringeScan> raw;
  std::vector<FringeScan> normalized;
};

/// Overlap between the two sources of a pair scenario; a single-source
/// scenario is interfered with an identical copy of itself.
inline OverlapResult scenario_overlap(const Scenario& s) {
  if (s.fringe.forced_overlap) return {*s.fringe.forced_overlap, s.fringe.forced_phase_rad.value_or(0.0)};
  const FrequencyGrid grid = to_grid(s.grid);
  const FilterSpec filter = to_filter(s.filter);
  const auto first = build_source_jsa(s, s.source.first, grid);
  const auto second = s.source.is_pair() ? build_source_jsa(s, *s.source.second, grid) : first;
  return jsa_overlap(first, second, filter, filter);
}

inline FringeReport cmd_fringe(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = effective_scenario(scenario, opts);
  FringeReport report;
  report.overlap = scenario_overlap(s);
  const auto phases = phase_range(s.fringe.start_rad, s.fringe.stop_rad, s.fringe.step_rad);
  const double n = report.overlap.magnitude;
  const double delta = report.overlap.phase;

  if (s.fringe.circuit == Circuit::ReverseHom) {
    report.raw.push_back(reverse_hom_scan(n, delta, phases, false));
    report.normalized.push_back(reverse_hom_scan(n, delta, phases, true));
    report.reported_pair = ChannelPair::P12;
  } else {
    const ScanAxis axis = s.fringe.scan == ScanPhase::Phi1 ? ScanAxis::Phi1 : ScanAxis::Phi2;
    for (ChannelPair pair : kAllChannelPairs) {
      report.raw.push_back(two_mzi_scan(pair, n, delta, axis, s.fringe.fixed_phase_rad, phases, false));
      report.normalized.push_back(two_mzi_scan(pair, n, delta, axis, s.fringe.fixed_phase_rad, phases, true));
    }
    report.reported_pair = axis == ScanAxis::Phi1 ? ChannelPair::P12 : ChannelPair::P34;
  }

  for (const auto& scan : report.raw)
    if (scan.channel_pair == report.reported_pair) report.visibility = extract_visibility(scan);
  if (s.car) {
    report.car = s.car;
    report.corrected_visibility = corrected_visibility(report.visibility, *s.car);
  }
  return report;
}

inline void write_fringe_csv(std::ostream& out, const Scenario& s, const FringeReport& r) {
  out << output_header("fringe", s);
  out << "phase_rad";
  for (std::size_t c = 0; c < r.raw.size(); ++c) {
    const auto name = channel_pair_name(r.raw[c].channel_pair);
    out << ',' << name << "_raw," << name << "_norm";
  }
  out << '\n';
  const auto& phases = r.raw.front().phase_values;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    out << format_number(phases[k]);
    for (std::size_t c = 0; c < r.raw.size(); ++c)
      out << ',' << format_number(r.raw[c].probabilities[k]) << ',' << format_number(r.normalized[c].probabilities[k]);
    out << '\n';
  }
}

inline void write_fringe_summary(std::ostream& out, const Scenario& s, const FringeReport& r, OutputFormat format) {
  out << output_header("fringe-summary", s);
  if (format == OutputFormat::Csv) {
    out << "scenario,pair,overlap_N,overlap_delta_rad,visibility,visibility_from_N,car,corrected_visibility\n";
    out << s.name << ',' << channel_pair_name(r.reported_pair) << ',' << format_number(r.overlap.magnitude) << ','
        << format_number(r.overlap.phase) << ',' << format_number(r.visibility) << ','
        << format_number(visibility_from_overlap(r.overlap.magnitude)) << ','
        << (r.car ? format_number(*r.car) : "") << ',' << (r.corrected_visibility ? format_number(*r.corrected_visibility) : "")
        << '\n';
  } else {
    out << "pair=" << channel_pair_name(r.reported_pair) << " N=" << format_number(r.overlap.magnitude)
        << " delta=" << format_number(r.overlap.phase) << " V=" << format_number(r.visibility);
    if (r.corrected_visibility)
      out << " car=" << format_number(*r.car) << " V_corrected=" << format_number(*r.corrected_visibility);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// stats

struct StatsReport {
  double xi = 0.0;
  double transmission = 1.0;
  std::size_t modes = 0;
  double mean_photon_number = 0.0;
  double trigger_probability = 0.0;
  std::vector<double> leading_mode_fock;  // photon-number distribution of the leading Schmidt mode
};

inline StatsReport cmd_stats(const Scenario& scenario, const RunOptions& opts) {
  const Scenario s = effective_scenario(scenario, opts);
  const auto spectrum = schmidt_decompose(build_filtered_jsa(s, s.source.first).jsa);
  const auto spec = SqueezingSpec::from_spectrum(s.squeezing.xi, spectrum, s.squeezing.transmission);
  StatsReport r;
  r.xi = s.squeezing.xi;
  r.transmission = s.squeezing.transmission;
  r.modes = spec.modes();
  r.mean_photon_number = mean_photon_number(spec);
  r.trigger_probability = trigger_probability(spec);
  r.leading_mode_fock = lossy_density_diagonal(spec, 0, {static_cast<int>(s.squeezing.max_pairs), true});
  return r;
}

inline void write_stats(std::ostream& out, const Scenario& s, const StatsReport& r, OutputFormat format) {
  out << output_header("stats", s);
  if (format == OutputFormat::Csv) {
    out << "quantity,value\n";
    out << "xi," << format_number(r.xi) << "\ntransmission," << format_number(r.transmission) << "\nmodes," << r.modes
        << "\nmean_photon_number," << format_number(r.mean_photon_number) << "\ntrigger_probability,"
        << format_number(r.trigger_probability) << '\n';
    for (std::size_t m = 0; m < r.leading_mode_fock.size(); ++m)
      out << "P" << m << ',' << format_number(r.leading_mode_fock[m]) << '\n';
  } else {
    out << "xi=" << format_number(r.xi) << " transmission=" << format_number(r.transmission) << " modes=" << r.modes
        << '\n';
    out << "mean_photon_number=" << format_number(r.mean_photon_number)
        << " trigger_probability=" << format_number(r.trigger_probability) << '\n';
    out << "leading mode photon-number distribution:\n";
    for (std::size_t m = 0; m < r.leading_mode_fock.size(); ++m)
      out << "  P(" << m << ")=" << format_number(r.leading_mode_fock[m]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// table1

inline const std::vector<std::string>& table1_scenarios() {
  static const std::vector<std::string> names{"sipic1_waveguide_15mm", "sipic1_ring", "sipic1_waveguide_0p24mm",
                                              "sipic2_waveguide_15mm", "sipic2_ring"};
  return names;
}

struct Table1Row {
  std::string scenario;
  std::string label;
  double purity = 0.0;
  double observed_visibility = 0.0;
  double overlap = 0.0;  // V / (2 - V)
};

inline std::vector<Table1Row> cmd_table1(const std::string& scenario_dir = PAIRSIM_SCENARIO_DIR) {
  std::vector<Table1Row> rows;
  for (const auto& name : table1_scenarios()) {
    const Scenario s = load_scenario(scenario_dir + "/" + name + ".yaml");
    if (!s.observed_visibility) throw ConfigError(name + ": observed_visibility: missing required key");
    Table1Row row{s.name, s.label, cmd_purity(s, {}).purity, *s.observed_visibility, 0.0};
    row.overlap = overlap_from_visibility(row.observed_visibility);
    rows.push_back(row);
  }
  return rows;
}

inline void write_table1(std::ostream& out, const std::vector<Table1Row>& rows, OutputFormat format) {
  out << "# pairsim table1 schema=" << kSchemaVersion << '\n';
  if (format == OutputFormat::Csv) {
    out << "scenario,source,simulated_purity,observed_visibility,overlap_N\n";
    for (const auto& r : rows)
      out << r.scenario << ',' << r.label << ',' << format_number(r.purity) << ','
          << format_number(r.observed_visibility) << ',' << format_number(r.overlap) << '\n';
    return;
  }
  auto pad = [](std::string text, std::size_t width) {
    if (text.size() < width) text.append(width - text.size(), ' ');
    return text;
  };
  auto pct = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * v);
    return std::string(buf);
  };
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.label.size());
  out << pad("source", width) << "  " << pad("purity", 8) << "  " << pad("V", 8) << "  " << "N\n";
  for (const auto& r : rows)
    out << pad(r.label, width) << "  " << pad(pct(r.purity), 8) << "  " << pad(pct(r.observed_visibility), 8) << "  "
        << pct(r.overlap) << '\n';
}

}  // namespace pairsim
