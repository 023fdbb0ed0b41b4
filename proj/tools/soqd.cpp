// soqd: second-order decoherence sweeps, figure presets, method comparison
// and golden-file maintenance.
//
// Exit codes: 0 success, 2 config/usage error, 3 tolerance failure, 4 I/O failure.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "soqd/error.hpp"
#include "soqd/figures.hpp"
#include "soqd/model.hpp"
#include "soqd/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitIo = 4;

int exit_code_for(soqd::ErrorCode code) {
  switch (code) {
    case soqd::ErrorCode::IoError: return kExitIo;
    case soqd::ErrorCode::ToleranceExceeded: return kExitTolerance;
    default: return kExitConfig;
  }
}

// Model parameters for `compare`: figure defaults unless a JSON file is given.
soqd::ModelParams load_model(const std::string& path) {
  if (path.empty()) return soqd::kFigureParams;
  std::ifstream in(path);
  if (!in) throw soqd::Error(soqd::ErrorCode::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw soqd::Error(soqd::ErrorCode::ConfigInvalid, e.what());
  }
  if (!j.is_object()) throw soqd::Error(soqd::ErrorCode::ConfigInvalid, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "omega1" && key != "omega2" && key != "d_e" && key != "d_g" && key != "omega_e") {
      throw soqd::Error(soqd::ErrorCode::ConfigInvalid, "unknown key '" + key + "'");
    }
  }
  return soqd::model_params_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order quantum decoherence of a two-mode boson system"};
  app.require_subcommand(1);

  auto* sweep = app.add_subcommand("sweep", "Evaluate F and G over a (t, tau) grid");
  std::string config_path;
  unsigned workers = 0;
  sweep->add_option("--config", config_path, "JSON sweep config")->required();
  sweep->add_option("--workers", workers, "worker threads (0 = all cores)");

  auto* figure = app.add_subcommand("figure", "Reproduce one figure panel (CSV + SVG)");
  int figure_id = 1;
  std::string panel;
  std::string out_dir = ".";
  figure->add_option("--id", figure_id, "figure number")->required()->check(CLI::IsMember({1, 2}));
  figure->add_option("--panel", panel, "panel a..f")
      ->required()
      ->check(CLI::IsMember({"a", "b", "c", "d", "e", "f"}));
  figure->add_option("--out", out_dir, "output directory");

  auto* compare = app.add_subcommand("compare", "Closed form vs quadrature vs sector oracle");
  std::uint64_t n = 10;
  double t = 0.0;
  double tau_max = 10.0;
  std::size_t steps = 21;
  std::string model_path;
  compare->add_option("--n", n, "Fock number of |0,n>")->required();
  compare->add_option("--t", t, "reference time")->required();
  compare->add_option("--tau-max", tau_max, "largest tau = t' - t")->required();
  compare->add_option("--steps", steps, "tau grid points")->check(CLI::Range(2, 100000));
  compare->add_option("--config", model_path, "JSON with the five model keys");

  auto* golden = app.add_subcommand("golden", "Check or regenerate the golden files");
  bool regen = false;
  std::string golden_dir = "tests/golden";
  golden->add_flag("--regen", regen, "rewrite the golden files after oracle verification");
  golden->add_option("--dir", golden_dir, "golden directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sweep) {
      const soqd::SweepConfig config = soqd::load_sweep_config(config_path);
      const auto points = soqd::run_sweep(config, workers);
      soqd::write_sweep_output(config, points);
      std::cout << fmt::format("wrote {} points to {}\n", points.size(),
                               config.output_path.string());
    } else if (*figure) {
      const auto files = soqd::reproduce_figure(figure_id, panel.front(), out_dir);
      for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
    } else if (*compare) {
      const auto params = soqd::validate(load_model(model_path));
      const auto report =
          soqd::compare_methods(params, n, t, soqd::uniform_grid(0.0, tau_max, steps));
      soqd::print_report(std::cout, report);
      if (!report.passed()) return kExitTolerance;
    } else if (*golden) {
      const auto files = soqd::build_golden_set(&std::cerr);
      if (regen) {
        soqd::write_golden_set(files, golden_dir);
        std::cout << fmt::format("wrote {} golden files to {}\n", files.size(), golden_dir);
      } else {
        const auto mismatched = soqd::diff_golden_set(files, golden_dir);
        for (const auto& name : mismatched) std::cout << "mismatch: " << name << '\n';
        if (!mismatched.empty()) return kExitTolerance;
        std::cout << fmt::format("{} golden files match\n", files.size());
      }
    }
  } catch (const soqd::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return EXIT_SUCCESS;
}
