#pragma once

// Scenario files: YAML in, validated Scenario out, and back again.
// Values are kept in the file's units (nm, GHz, mm) so that a load/save cycle
// is bit-exact; conversion to SI happens in the to_* helpers.

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <complex>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pairsim/dispersion.hpp"
#include "pairsim/errors.hpp"
#include "pairsim/format.hpp"
#include "pairsim/jsa.hpp"
#include "pairsim/spectral.hpp"

namespace pairsim {

struct PumpConfig {
  double wavelength_nm = 0.0;
  double linewidth_ghz = 5.0;
  LineShape shape = LineShape::Gaussian;
  double amplitude_re = 1.0;
  double amplitude_im = 0.0;

  bool operator==(const PumpConfig&) const = default;
};

enum class SourceType { Waveguide, Ring };

struct WaveguideConfig {
  double length_mm = 0.0;
  double reference_nm = 1550.12;
  double beta0_per_m = 0.0;
  double beta1_s_per_m = 0.0;
  double beta2_s2_per_m = -2e-24;
  double beta3_s3_per_m = 0.0;

  bool operator==(const WaveguideConfig&) const = default;
};

struct RingConfig {
  double q_factor = 0.0;
  double fsr_nm = 0.0;
  double resonance_nm = 0.0;
  int pump_order = 2;

  bool operator==(const RingConfig&) const = default;
};

struct SourceModelConfig {
  SourceType type = SourceType::Waveguide;
  WaveguideConfig waveguide;
  RingConfig ring;

  bool operator==(const SourceModelConfig&) const = default;
};

/// A single source, or two sources interfered against each other.
struct SourceConfig {
  SourceModelConfig first;
  std::optional<SourceModelConfig> second;

  bool is_pair() const { return second.has_value(); }
  bool operator==(const SourceConfig&) const = default;
};

struct FilterConfig {
  bool enabled = false;
  double center_nm = 1550.12;
  double bandwidth_nm = 0.8;
  FilterProfile profile = FilterProfile::IdealRectangle;
  double rolloff = 0.0;

  bool operator==(const FilterConfig&) const = default;
};

struct GridConfig {
  double center_nm = 1550.12;
  double span_nm = 2.0;
  long points = 401;

  bool operator==(const GridConfig&) const = default;
};

enum class Circuit { ReverseHom, TwoMzi };
enum class ScanPhase { Phi1, Phi2 };

struct FringeConfig {
  Circuit circuit = Circuit::ReverseHom;
  ScanPhase scan = ScanPhase::Phi1;
  double start_rad = 0.0;
  double stop_rad = 3.14159265358979;
  double step_rad = 0.0314159265358979;
  double fixed_phase_rad = 0.0;
  std::optional<double> forced_overlap;
  std::optional<double> forced_phase_rad;

  bool operator==(const FringeConfig&) const = default;
};

struct SqueezingConfig {
  double xi = 0.1;
  double transmission = 1.0;
  long max_pairs = 20;

  bool operator==(const SqueezingConfig&) const = default;
};

struct Scenario {
  std::string name;
  std::string label;
  std::vector<PumpConfig> pumps;
  SourceConfig source;
  FilterConfig filter;
  GridConfig grid;
  PumpQuadrature quadrature;
  FringeConfig fringe;
  SqueezingConfig squeezing;
  std::optional<double> car;
  std::optional<double> observed_visibility;

  bool operator==(const Scenario&) const = default;
};

// ---------------------------------------------------------------------------
// Conversion to library types

inline PumpLine to_pump_line(const PumpConfig& p) {
  return PumpLine{p.wavelength_nm * 1e-9, kTwoPi * p.linewidth_ghz * 1e9, p.shape, {p.amplitude_re, p.amplitude_im}};
}

inline WaveguideSource to_waveguide(const WaveguideConfig& w) {
  return WaveguideSource{w.length_mm * 1e-3,
                         DispersionModel{omega_from_wavelength(w.reference_nm * 1e-9), w.beta0_per_m, w.beta1_s_per_m,
                                         w.beta2_s2_per_m, w.beta3_s3_per_m}};
}

inline RingSource to_ring(const RingConfig& r) {
  return RingSource{r.q_factor, r.fsr_nm * 1e-9, r.resonance_nm * 1e-9, r.pump_order};
}

inline FilterSpec to_filter(const FilterConfig& f) {
  if (!f.enabled) return FilterSpec::all_pass();
  return FilterSpec{f.center_nm * 1e-9, f.bandwidth_nm * 1e-9, f.profile, f.rolloff};
}

inline FrequencyGrid to_grid(const GridConfig& g) {
  return make_grid(g.center_nm * 1e-9, g.span_nm * 1e-9, static_cast<std::size_t>(g.points));
}

// ---------------------------------------------------------------------------
// Enum spellings

inline std::string to_string(LineShape s) { return s == LineShape::Gaussian ? "gaussian" : "lorentzian"; }
inline std::string to_string(SourceType t) { return t == SourceType::Waveguide ? "waveguide" : "ring"; }
inline std::string to_string(Circuit c) { return c == Circuit::ReverseHom ? "reverse_hom" : "two_mzi"; }
inline std::string to_string(ScanPhase s) { return s == ScanPhase::Phi1 ? "phi1" : "phi2"; }
inline std::string to_string(FilterProfile p) {
  switch (p) {
    case FilterProfile::AllPass: return "all_pass";
    case FilterProfile::IdealRectangle: return "rectangle";
    case FilterProfile::RaisedCosine: return "raised_cosine";
  }
  return "rectangle";
}

namespace detail {

inline std::string join_path(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

class ConfigReader {
 public:
  ConfigReader(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

  void expect_map(std::initializer_list<std::string_view> allowed) const {
    if (!node_.IsMap()) throw ConfigError(label() + ": expected a mapping");
    for (const auto& item : node_) {
      const auto key = item.first.as<std::string>();
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) throw ConfigError(join_path(path_, key) + ": unknown key");
    }
  }

  bool has(std::string_view key) const { return node_.IsMap() && node_[std::string(key)].IsDefined(); }

  ConfigReader child(std::string_view key) const {
    const auto sub = node_[std::string(key)];
    if (!sub.IsDefined() || sub.IsNull()) throw ConfigError(join_path(path_, key) + ": missing required key");
    return {sub, join_path(path_, key)};
  }

  std::vector<ConfigReader> sequence(std::string_view key) const {
    const auto r = child(key);
    if (!r.node_.IsSequence()) throw ConfigError(r.path_ + ": expected a list");
    std::vector<ConfigReader> out;
    for (std::size_t k = 0; k < r.node_.size(); ++k)
      out.emplace_back(r.node_[k], r.path_ + "[" + std::to_string(k) + "]");
    return out;
  }

  double number(std::string_view key) const {
    const auto r = child(key);
    if (!r.node_.IsScalar()) throw ConfigError(r.path_ + ": expected a number");
    try {
      return parse_double(r.node_.Scalar());
    } catch (const InvalidArgument&) {
      throw ConfigError(r.path_ + ": expected a number, got '" + r.node_.Scalar() + "'");
    }
  }

  double number_or(std::string_view key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  long integer(std::string_view key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 1e15) throw ConfigError(join_path(path_, key) + ": expected an integer");
    return static_cast<long>(v);
  }

  long integer_or(std::string_view key, long fallback) const { return has(key) ? integer(key) : fallback; }

  bool boolean_or(std::string_view key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto r = child(key);
    bool value = false;
    if (!r.node_.IsScalar() || !YAML::convert<bool>::decode(r.node_, value))
      throw ConfigError(r.path_ + ": expected true or false");
    return value;
  }

  std::string text(std::string_view key) const {
    const auto r = child(key);
    if (!r.node_.IsScalar()) throw ConfigError(r.path_ + ": expected a string");
    return r.node_.Scalar();
  }

  std::string text_or(std::string_view key, std::string fallback) const {
    return has(key) ? text(key) : std::move(fallback);
  }

  template <class Enum>
  Enum choice(std::string_view key, std::initializer_list<std::pair<std::string_view, Enum>> options) const {
    const auto value = text(key);
    for (const auto& [spelling, e] : options)
      if (spelling == value) return e;
    std::string allowed;
    for (const auto& [spelling, e] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(spelling);
    throw ConfigError(join_path(path_, key) + ": unknown value '" + value + "' (expected one of " + allowed + ")");
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
};

inline SourceModelConfig read_source_model(const ConfigReader& r) {
  SourceModelConfig m;
  m.type = r.choice<SourceType>("type", {{"waveguide", SourceType::Waveguide}, {"ring", SourceType::Ring}});
  if (m.type == SourceType::Waveguide) {
    r.expect_map({"type", "length_mm", "dispersion"});
    m.waveguide.length_mm = r.number("length_mm");
    if (r.has("dispersion")) {
      const auto d = r.child("dispersion");
      d.expect_map({"reference_nm", "beta0_per_m", "beta1_s_per_m", "beta2_s2_per_m", "beta3_s3_per_m"});
      m.waveguide.reference_nm = d.number_or("reference_nm", m.waveguide.reference_nm);
      m.waveguide.beta0_per_m = d.number_or("beta0_per_m", m.waveguide.beta0_per_m);
      m.waveguide.beta1_s_per_m = d.number_or("beta1_s_per_m", m.waveguide.beta1_s_per_m);
      m.waveguide.beta2_s2_per_m = d.number_or("beta2_s2_per_m", m.waveguide.beta2_s2_per_m);
      m.waveguide.beta3_s3_per_m = d.number_or("beta3_s3_per_m", m.waveguide.beta3_s3_per_m);
    }
  } else {
    r.expect_map({"type", "q_factor", "fsr_nm", "resonance_nm", "pump_order"});
    m.ring.q_factor = r.number("q_factor");
    m.ring.fsr_nm = r.number("fsr_nm");
    m.ring.resonance_nm = r.number("resonance_nm");
    m.ring.pump_order = static_cast<int>(r.integer_or("pump_order", m.ring.pump_order));
  }
  return m;
}

inline void require(bool ok, const std::string& path, const std::string& message) {
  if (!ok) throw ConfigError(path + ": " + message);
}

inline void validate_source_model(const SourceModelConfig& m, const std::string& path) {
  if (m.type == SourceType::Waveguide) {
    require(m.waveguide.length_mm >= 0.0, path + ".length_mm", "must be non-negative");
    require(m.waveguide.reference_nm > 0.0, path + ".dispersion.reference_nm", "must be positive");
  } else {
    require(m.ring.q_factor > 0.0, path + ".q_factor", "must be positive");
    require(m.ring.fsr_nm > 0.0, path + ".fsr_nm", "must be positive");
    require(m.ring.resonance_nm > 0.0, path + ".resonance_nm", "must be positive");
    require(m.ring.pump_order >= 1, path + ".pump_order", "must be at least 1");
  }
}

}  // namespace detail

inline void validate(const Scenario& s) {
  using detail::require;
  require(s.pumps.size() == 2, "pumps", "exactly two pump lines are required");
  for (std::size_t k = 0; k < s.pumps.size(); ++k) {
    const std::string p = "pumps[" + std::to_string(k) + "]";
    require(s.pumps[k].wavelength_nm > 0.0, p + ".wavelength_nm", "must be positive");
    require(s.pumps[k].linewidth_ghz > 0.0, p + ".linewidth_ghz", "must be positive");
  }
  detail::validate_source_model(s.source.first, s.source.is_pair() ? "source.first" : "source");
  if (s.source.second) detail::validate_source_model(*s.source.second, "source.second");
  if (s.filter.enabled) {
    require(s.filter.center_nm > 0.0, "filter.center_nm", "must be positive");
    require(s.filter.bandwidth_nm > 0.0, "filter.bandwidth_nm", "must be positive");
    require(s.filter.rolloff >= 0.0 && s.filter.rolloff <= 1.0, "filter.rolloff", "must lie in [0, 1]");
  }
  require(s.grid.center_nm > 0.0, "grid.center_nm", "must be positive");
  require(s.grid.span_nm > 0.0, "grid.span_nm", "must be positive");
  require(s.grid.points >= 2, "grid.points", "must be at least 2");
  require(s.quadrature.points_per_fwhm >= 8.0, "quadrature.points_per_fwhm", "must be at least 8");
  require(s.quadrature.half_span_fwhm > 0.0, "quadrature.half_span_fwhm", "must be positive");
  require(s.fringe.step_rad > 0.0, "fringe.step_rad", "must be positive");
  require(s.fringe.stop_rad >= s.fringe.start_rad, "fringe.stop_rad", "must not precede fringe.start_rad");
  if (s.fringe.forced_overlap)
    require(*s.fringe.forced_overlap >= 0.0 && *s.fringe.forced_overlap <= 1.0, "fringe.forced_overlap",
            "must lie in [0, 1]");
  require(s.squeezing.xi >= 0.0, "squeezing.xi", "must be non-negative");
  require(s.squeezing.transmission >= 0.0 && s.squeezing.transmission <= 1.0, "squeezing.transmission",
          "must lie in [0, 1]");
  require(s.squeezing.max_pairs >= 0, "squeezing.max_pairs", "must be non-negative");
  if (s.car) require(*s.car > 0.0, "car", "must be positive");
  if (s.observed_visibility)
    require(*s.observed_visibility >= 0.0 && *s.observed_visibility <= 1.0, "observed_visibility",
            "must lie in [0, 1]");
}

inline Scenario parse_scenario(const YAML::Node& root_node, std::string fallback_name = {}) {
  using detail::ConfigReader;
  if (!root_node.IsDefined() || root_node.IsNull()) throw ConfigError("pumps: missing required key");
  const ConfigReader root(root_node, "");
  root.expect_map({"name", "label", "pumps", "source", "filter", "grid", "quadrature", "fringe", "squeezing", "car",
                   "observed_visibility"});

  Scenario s;
  s.name = root.text_or("name", std::move(fallback_name));
  s.label = root.text_or("label", s.name);

  for (const auto& p : root.sequence("pumps")) {
    p.expect_map({"wavelength_nm", "linewidth_ghz", "shape", "amplitude_re", "amplitude_im"});
    PumpConfig pump;
    pump.wavelength_nm = p.number("wavelength_nm");
    pump.linewidth_ghz = p.number_or("linewidth_ghz", pump.linewidth_ghz);
    if (p.has("shape"))
      pump.shape = p.choice<LineShape>("shape", {{"gaussian", LineShape::Gaussian}, {"lorentzian", LineShape::Lorentzian}});
    pump.amplitude_re = p.number_or("amplitude_re", pump.amplitude_re);
    pump.amplitude_im = p.number_or("amplitude_im", pump.amplitude_im);
    s.pumps.push_back(pump);
  }

  {
    const auto src = root.child("source");
    if (src.text("type") == "pair") {
      src.expect_map({"type", "first", "second"});
      s.source.first = detail::read_source_model(src.child("first"));
      s.source.second = detail::read_source_model(src.child("second"));
    } else {
      s.source.first = detail::read_source_model(src);
    }
  }

  if (root.has("filter")) {
    const auto f = root.child("filter");
    f.expect_map({"enabled", "center_nm", "bandwidth_nm", "profile", "rolloff"});
    s.filter.enabled = f.boolean_or("enabled", true);
    s.filter.center_nm = f.number_or("center_nm", s.filter.center_nm);
    s.filter.bandwidth_nm = f.number_or("bandwidth_nm", s.filter.bandwidth_nm);
    if (f.has("profile"))
      s.filter.profile = f.choice<FilterProfile>(
          "profile", {{"rectangle", FilterProfile::IdealRectangle}, {"raised_cosine", FilterProfile::RaisedCosine}});
    s.filter.rolloff = f.number_or("rolloff", s.filter.rolloff);
  }

  {
    const auto g = root.child("grid");
    g.expect_map({"center_nm", "span_nm", "points"});
    s.grid.center_nm = g.number_or("center_nm", s.grid.center_nm);
    s.grid.span_nm = g.number("span_nm");
    s.grid.points = g.integer_or("points", s.grid.points);
  }

  if (root.has("quadrature")) {
    const auto q = root.child("quadrature");
    q.expect_map({"points_per_fwhm", "half_span_fwhm"});
    s.quadrature.points_per_fwhm = q.number_or("points_per_fwhm", s.quadrature.points_per_fwhm);
    s.quadrature.half_span_fwhm = q.number_or("half_span_fwhm", s.quadrature.half_span_fwhm);
  }

  if (root.has("fringe")) {
    const auto f = root.child("fringe");
    f.expect_map({"circuit", "scan", "start_rad", "stop_rad", "step_rad", "fixed_phase_rad", "forced_overlap",
                  "forced_phase_rad"});
    if (f.has("circuit"))
      s.fringe.circuit = f.choice<Circuit>("circuit", {{"reverse_hom", Circuit::ReverseHom}, {"two_mzi", Circuit::TwoMzi}});
    if (f.has("scan")) s.fringe.scan = f.choice<ScanPhase>("scan", {{"phi1", ScanPhase::Phi1}, {"phi2", ScanPhase::Phi2}});
    s.fringe.start_rad = f.number_or("start_rad", s.fringe.start_rad);
    s.fringe.stop_rad = f.number_or("stop_rad", s.fringe.stop_rad);
    s.fringe.step_rad = f.number_or("step_rad", s.fringe.step_rad);
    s.fringe.fixed_phase_rad = f.number_or("fixed_phase_rad", s.fringe.fixed_phase_rad);
    s.fringe.forced_overlap = f.optional_number("forced_overlap");
    s.fringe.forced_phase_rad = f.optional_number("forced_phase_rad");
  }

  if (root.has("squeezing")) {
    const auto q = root.child("squeezing");
    q.expect_map({"xi", "transmission", "max_pairs"});
    s.squeezing.xi = q.number_or("xi", s.squeezing.xi);
    s.squeezing.transmission = q.number_or("transmission", s.squeezing.transmission);
    s.squeezing.max_pairs = q.integer_or("max_pairs", s.squeezing.max_pairs);
  }

  s.car = root.optional_number("car");
  s.observed_visibility = root.optional_number("observed_visibility");
  validate(s);
  return s;
}

inline Scenario parse_scenario_text(const std::string& text, std::string fallback_name = {}) {
  YAML::Node node;
  try {
    node = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("<root>: malformed YAML: ") + e.what());
  }
  return parse_scenario(node, std::move(fallback_name));
}

inline std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = base.rfind('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

/// Loads and validates a scenario file; the name defaults to the file stem.
inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_scenario_text(buffer.str(), stem_of(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline YAML::Node number_node(double v) { return YAML::Node(format_exact(v)); }

inline YAML::Node source_model_node(const SourceModelConfig& m) {
  YAML::Node n;
  n["type"] = to_string(m.type);
  if (m.type == SourceType::Waveguide) {
    n["length_mm"] = number_node(m.waveguide.length_mm);
    YAML::Node d;
    d["reference_nm"] = number_node(m.waveguide.reference_nm);
    d["beta0_per_m"] = number_node(m.waveguide.beta0_per_m);
    d["beta1_s_per_m"] = number_node(m.waveguide.beta1_s_per_m);
    d["beta2_s2_per_m"] = number_node(m.waveguide.beta2_s2_per_m);
    d["beta3_s3_per_m"] = number_node(m.waveguide.beta3_s3_per_m);
    n["dispersion"] = d;
  } else {
    n["q_factor"] = number_node(m.ring.q_factor);
    n["fsr_nm"] = number_node(m.ring.fsr_nm);
    n["resonance_nm"] = number_node(m.ring.resonance_nm);
    n["pump_order"] = std::to_string(m.ring.pump_order);
  }
  return n;
}

}  // namespace detail

/// Canonical YAML form. Numbers use the shortest round-trip spelling, so
/// parse_scenario_text(serialize_scenario(s)) == s.
inline std::string serialize_scenario(const Scenario& s) {
  using detail::number_node;
  YAML::Node root;
  root["name"] = s.name;
  root["label"] = s.label;
  for (const auto& p : s.pumps) {
    YAML::Node n;
    n["wavelength_nm"] = number_node(p.wavelength_nm);
    n["linewidth_ghz"] = number_node(p.linewidth_ghz);
    n["shape"] = to_string(p.shape);
    n["amplitude_re"] = number_node(p.amplitude_re);
    n["amplitude_im"] = number_node(p.amplitude_im);
    root["pumps"].push_back(n);
  }
  if (s.source.is_pair()) {
    YAML::Node n;
    n["type"] = "pair";
    n["first"] = detail::source_model_node(s.source.first);
    n["second"] = detail::source_model_node(*s.source.second);
    root["source"] = n;
  } else {
    root["source"] = detail::source_model_node(s.source.first);
  }
  {
    YAML::Node n;
    n["enabled"] = s.filter.enabled ? "true" : "false";
    n["center_nm"] = number_node(s.filter.center_nm);
    n["bandwidth_nm"] = number_node(s.filter.bandwidth_nm);
    n["profile"] = to_string(s.filter.profile);
    n["rolloff"] = number_node(s.filter.rolloff);
    root["filter"] = n;
  }
  {
    YAML::Node n;
    n["center_nm"] = number_node(s.grid.center_nm);
    n["span_nm"] = number_node(s.grid.span_nm);
    n["points"] = std::to_string(s.grid.points);
    root["grid"] = n;
  }
  {
    YAML::Node n;
    n["points_per_fwhm"] = number_node(s.quadrature.points_per_fwhm);
    n["half_span_fwhm"] = number_node(s.quadrature.half_span_fwhm);
    root["quadrature"] = n;
  }
  {
    YAML::Node n;
    n["circuit"] = to_string(s.fringe.circuit);
    n["scan"] = to_string(s.fringe.scan);
    n["start_rad"] = number_node(s.fringe.start_rad);
    n["stop_rad"] = number_node(s.fringe.stop_rad);
    n["step_rad"] = number_node(s.fringe.step_rad);
    n["fixed_phase_rad"] = number_node(s.fringe.fixed_phase_rad);
    if (s.fringe.forced_overlap) n["forced_overlap"] = number_node(*s.fringe.forced_overlap);
    if (s.fringe.forced_phase_rad) n["forced_phase_rad"] = number_node(*s.fringe.forced_phase_rad);
    root["fringe"] = n;
  }
  {
    YAML::Node n;
    n["xi"] = number_node(s.squeezing.xi);
    n["transmission"] = number_node(s.squeezing.transmission);
    n["max_pairs"] = std::to_string(s.squeezing.max_pairs);
    root["squeezing"] = n;
  }
  if (s.car) root["car"] = number_node(*s.car);
  if (s.observed_visibility) root["observed_visibility"] = number_node(*s.observed_visibility);

  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

/// Hash of the canonical serialization, stamped into every output header.
inline std::string scenario_hash(const Scenario& s) { return hex64(fnv1a64(serialize_scenario(s))); }

}  // namespace pairsim
