// Command-line front end: distance sweeps, preset figure data, validation
// suites, and source-amplitude optimization.

#include <clocale>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "mapm/config.hpp"
#include "mapm/csv.hpp"
#include "mapm/figures.hpp"
#include "mapm/rates.hpp"
#include "mapm/sweep.hpp"
#include "mapm/validate.hpp"

namespace {

// Opens the requested output target, with "-" standing for stdout.
struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = nullptr;

  explicit OutputTarget(const std::string& path) {
    if (path == "-") {
      stream = &std::cout;
      return;
    }
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
    stream = &file;
  }
};

mapm::Config load_config(const std::string& path) {
  if (path.empty()) return mapm::Config{};
  return mapm::parse_config_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");
  CLI::App app{"Secret-key rates of memory-assisted interference chains"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "-";
  std::string figure_id;
  std::string suite = "all";
  std::uint64_t seed = 1;
  int jobs = 1;

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep the chain rate over distance");
  sweep->add_option("--config", config_path, "Configuration file (defaults apply if omitted)");
  sweep->add_option("--out", out_path, "Output CSV path, - for stdout");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* figure = app.add_subcommand("figure", "Write the data behind a preset figure");
  figure->add_option("--id", figure_id, "Figure identifier")
      ->required()
      ->check(CLI::IsMember(mapm::figure_ids()));
  figure->add_option("--out", out_path, "Output CSV path, - for stdout");
  figure->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  CLI::App* validate = app.add_subcommand("validate", "Run a self-check suite");
  validate->add_option("--suite", suite, "Suite name")
      ->check(CLI::IsMember({"all", "closed_forms", "oracle_mc", "oracle_fock"}));
  validate->add_option("--seed", seed, "Monte Carlo seed");
  validate->add_option("--out", out_path, "Output JSON path, - for stdout");

  CLI::App* opt_alpha =
      app.add_subcommand("optimize-alpha", "Maximize the per-use rate over the source amplitude");
  opt_alpha->add_option("--config", config_path, "Configuration file (defaults apply if omitted)");
  opt_alpha->add_option("--out", out_path, "Output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sweep->parsed()) {
      const mapm::Config cfg = load_config(config_path);
      const auto rows = mapm::run_sweep(cfg, jobs);
      OutputTarget out(out_path);
      mapm::write_sweep_csv(*out.stream, rows);
    } else if (figure->parsed()) {
      OutputTarget out(out_path);
      mapm::run_figure(figure_id, *out.stream, jobs);
    } else if (validate->parsed()) {
      const nlohmann::json report = mapm::run_validation(suite, seed);
      OutputTarget out(out_path);
      *out.stream << report.dump(2) << '\n';
      if (!report["passed"].get<bool>()) return 1;
    } else if (opt_alpha->parsed()) {
      const mapm::Config cfg = load_config(config_path);
      const mapm::AlphaOptimum best = mapm::optimize_alpha(cfg.params, cfg.options);
      OutputTarget out(out_path);
      *out.stream << "alpha = " << mapm::format_number(best.alpha) << '\n'
                  << "skr_per_use = " << mapm::format_number(best.skr_per_use) << '\n';
    }
  } catch (const mapm::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
