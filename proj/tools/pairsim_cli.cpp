// pairsim command-line front end.
//
//   pairsim jsi     --scenario s.yaml --out jsi.csv
//   pairsim purity  --scenario s.yaml [--no-filter]
//   pairsim schmidt --scenario s.yaml --out r.csv
//   pairsim fringe  --scenario s.yaml --out fringe.csv [--car 74]
//   pairsim stats   --scenario s.yaml
//   pairsim table1  [--format csv]
//
// Exit codes: 0 success, 2 configuration error, 3 numeric error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "pairsim/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Args {
  std::string scenario;
  std::string out;
  std::string scenario_dir = PAIRSIM_SCENARIO_DIR;
  long grid_points = 0;
  bool no_filter = false;
  double car = 0.0;
  std::string format = "txt";
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pairsim::ConfigError(path + ": cannot open output file");
  return out;
}

int run(const std::string& verb, const Args& args, const CLI::App& app) {
  using namespace pairsim;
  RunOptions opts;
  if (app.get_subcommand(verb)->count("--grid-points")) opts.grid_points = args.grid_points;
  if (app.get_subcommand(verb)->count("--car")) opts.car = args.car;
  opts.no_filter = args.no_filter;
  opts.format = args.format == "csv" ? OutputFormat::Csv : OutputFormat::Txt;

  if (verb == "table1") {
    const auto rows = cmd_table1(args.scenario_dir);
    if (args.out.empty()) {
      write_table1(std::cout, rows, opts.format);
    } else {
      auto out = open_output(args.out);
      write_table1(out, rows, opts.format);
    }
    return 0;
  }

  if (args.scenario.empty()) throw ConfigError("--scenario: required for '" + verb + "'");
  const Scenario loaded = load_scenario(args.scenario);
  const Scenario s = effective_scenario(loaded, opts);

  if (verb == "jsi") {
    std::optional<std::ofstream> file;
    if (!args.out.empty()) file = open_output(args.out);
    const auto r = cmd_jsi(loaded, opts, file ? &*file : nullptr);
    std::cout << output_header("jsi-summary", s) << "survival=" << format_number(r.survival)
              << " marginal_fwhm_nm=" << format_number(r.marginal_fwhm_m * 1e9)
              << " in_band_fraction=" << format_number(r.in_band_fraction) << '\n';
    for (const auto& w : r.jsa.warnings) std::cerr << "warning: " << w << '\n';
  } else if (verb == "purity") {
    const auto r = cmd_purity(loaded, opts);
    if (args.out.empty()) {
      write_purity(std::cout, s, r, opts.format);
    } else {
      auto out = open_output(args.out);
      write_purity(out, s, r, opts.format);
    }
  } else if (verb == "schmidt") {
    const auto r = cmd_schmidt(loaded, opts);
    if (args.out.empty()) {
      write_schmidt(std::cout, s, r);
    } else {
      auto out = open_output(args.out);
      write_schmidt(out, s, r);
    }
  } else if (verb == "fringe") {
    const auto r = cmd_fringe(loaded, opts);
    if (!args.out.empty()) {
      auto out = open_output(args.out);
      write_fringe_csv(out, s, r);
    }
    write_fringe_summary(std::cout, s, r, opts.format);
  } else if (verb == "stats") {
    const auto r = cmd_stats(loaded, opts);
    if (args.out.empty()) {
      write_stats(std::cout, s, r, opts.format);
    } else {
      auto out = open_output(args.out);
      write_stats(out, s, r, opts.format);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-pair source simulator: JSA, purity, overlap and interference fringes"};
  app.require_subcommand(1);
  Args args;

  const std::map<std::string, std::string> verbs{
      {"jsi", "Build the filtered JSA and write the JSI grid"},
      {"purity", "Report purity, Schmidt tail and filter survival"},
      {"schmidt", "Write the Schmidt coefficients"},
      {"fringe", "Compute the JSA overlap and the coincidence fringe scan"},
      {"stats", "Squeezed-state photon statistics of the source"},
      {"table1", "Purity and overlap summary over the bundled scenarios"},
  };
  for (const auto& [verb, help] : verbs) {
    auto* sub = app.add_subcommand(verb, help);
    sub->add_option("--scenario", args.scenario, "Scenario YAML file");
    sub->add_option("--out", args.out, "Output file");
    sub->add_option("--grid-points", args.grid_points, "Override the grid size")->check(CLI::Range(2L, 100000L));
    sub->add_flag("--no-filter", args.no_filter, "Disable the band-pass filter");
    sub->add_option("--car", args.car, "Coincidence-to-accidental ratio for the corrected visibility")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", args.format, "Report format")->check(CLI::IsMember({"csv", "txt"}));
    if (verb == "table1") sub->add_option("--scenario-dir", args.scenario_dir, "Directory of bundled scenarios");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    return run(verb, args, app);
  } catch (const pairsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pairsim::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}
