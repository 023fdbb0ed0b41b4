#include "soqd/figures.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "soqd/correlation.hpp"
#include "soqd/error.hpp"
#include "soqd/oracle.hpp"
#include "soqd/propagator.hpp"

namespace soqd {

std::string FigurePanel::name() const { return fmt::format("fig{}{}", figure, panel); }

ApparatusState FigurePanel::state() const {
  if (figure == 1) return coherent_with_mean_number(static_cast<double>(n));
  return FockState{n};
}

FigurePanel figure_panel(int figure, char panel) {
  if (figure != 1 && figure != 2) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("figure must be 1 or 2, got {}", figure));
  }
  if (panel < 'a' || panel > 'f') {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("panel must be a..f, got '{}'", panel));
  }
  const int row = (panel - 'a') / 2;
  FigurePanel p;
  p.figure = figure;
  p.panel = panel;
  p.t = (panel - 'a') % 2 == 0 ? 0.0 : 10.0;
  // Window per N so the collapse is resolved at each particle number.
  constexpr std::uint64_t kNumbers[] = {10, 100, 10000};
  constexpr double kTauMax[] = {20.0, 5.0, 0.5};
  p.n = kNumbers[row];
  p.tau_max = kTauMax[row];
  p.tau_steps = 600;
  return p;
}

std::vector<FigurePanel> all_figure_panels() {
  std::vector<FigurePanel> panels;
  for (int figure : {1, 2}) {
    for (char panel = 'a'; panel <= 'f'; ++panel) panels.push_back(figure_panel(figure, panel));
  }
  return panels;
}

SweepConfig panel_sweep_config(const FigurePanel& panel, const std::filesystem::path& out_dir,
                               bool plot) {
  SweepConfig config;
  config.params = kFigureParams;
  config.state = panel.state();
  config.t_values = {panel.t};
  config.tau_min = 0.0;
  config.tau_max = panel.tau_max;
  config.tau_steps = panel.tau_steps;
  config.method = Method::Closed;
  config.output_path = out_dir / (panel.name() + ".csv");
  config.output_format = OutputFormat::Csv;
  config.emit_plot = plot;
  return config;
}

std::vector<std::filesystem::path> reproduce_figure(int figure, char panel,
                                                    const std::filesystem::path& out_dir) {
  const FigurePanel p = figure_panel(figure, panel);
  const SweepConfig config = panel_sweep_config(p, out_dir);
  const auto points = run_sweep(config);
  write_sweep_output(config, points,
                     fmt::format("Fig. {}({}): {} N={}, t={}", figure, panel,
                                 figure == 1 ? "coherent" : "Fock", p.n, p.t));
  auto svg = config.output_path;
  svg.replace_extension(".svg");
  return {config.output_path, svg};
}

// ---------------------------------------------------------------------------

CompareReport compare_methods(const ModelParams& params, std::uint64_t n, double t,
                              const std::vector<double>& taus, double tolerance) {
  if (n > kMaxQuadratureFock) {
    throw Error(ErrorCode::ConfigInvalid,
                fmt::format("n = {} exceeds the quadrature limit {}", n, kMaxQuadratureFock));
  }
  const SectorOracle oracle = SectorOracle::single(params, n);
  const QuadratureSpec quad = default_quadrature(n);

  CompareReport report;
  report.tolerance = tolerance;
  for (double tau : taus) {
    CompareRow row;
    row.tau = tau;
    row.closed = decoherence_factor_fock_closed(params, n, t, t + tau);
    row.quadrature = decoherence_factor_fock_quadrature(params, n, t, t + tau, quad);
    row.oracle = oracle.fock(n, t, t + tau);
    row.max_delta = std::max({std::abs(row.closed - row.quadrature),
                              std::abs(row.closed - row.oracle),
                              std::abs(row.quadrature - row.oracle)});
    report.max_delta = std::max(report.max_delta, row.max_delta);
    report.rows.push_back(row);
  }
  return report;
}

void print_report(std::ostream& out, const CompareReport& report) {
  out << fmt::format("{:>10}  {:>24}  {:>24}  {:>24}  {:>10}\n", "tau", "F_closed",
                     "F_quadrature", "F_oracle", "max|d|");
  const auto c = [](cplx z) { return fmt::format("{:+.6e}{:+.6e}i", z.real(), z.imag()); };
  for (const auto& row : report.rows) {
    out << fmt::format("{:>10.5f}  {:>24}  {:>24}  {:>24}  {:>10.3e}\n", row.tau, c(row.closed),
                       c(row.quadrature), c(row.oracle), row.max_delta);
  }
  out << fmt::format("max |d| = {:.3e} (tolerance {:.1e}): {}\n", report.max_delta,
                     report.tolerance, report.passed() ? "ok" : "FAILED");
}

// ---------------------------------------------------------------------------

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::ToleranceExceeded, what);
}

nlohmann::json complex_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

// Cross-checks a closed-form panel against the sector oracle on a sample of
// its points.
void verify_panel(const FigurePanel& panel, const std::vector<CorrelationPoint>& points,
                  std::ostream* log) {
  constexpr std::size_t kStride = 20;
  double worst = 0.0;
  std::size_t checked = 0;
  if (panel.figure == 2 && panel.n <= kMaxOracleSector) {
    const SectorOracle oracle = SectorOracle::single(kFigureParams, panel.n);
    for (std::size_t i = 0; i < points.size(); i += kStride) {
      const auto& p = points[i];
      worst = std::max(worst, std::abs(p.f - oracle.fock(panel.n, p.t, p.t + p.tau)));
      ++checked;
    }
    require(worst <= 1e-9, fmt::format("{}: closed vs oracle {:.3e}", panel.name(), worst));
  } else if (panel.figure == 1 && 10 * panel.n + 20 <= kMaxOracleSector) {
    const std::uint64_t cutoff = 10 * panel.n + 20;
    const SectorOracle oracle = SectorOracle::up_to(kFigureParams, cutoff);
    const cplx beta0 = std::get<CoherentState>(panel.state()).beta0;
    for (std::size_t i = 0; i < points.size(); i += kStride) {
      const auto& p = points[i];
      const auto result = oracle.coherent(beta0, p.t, p.t + p.tau, cutoff);
      worst = std::max(worst, std::abs(p.f - result.value));
      ++checked;
    }
    require(worst <= 1e-6, fmt::format("{}: closed vs oracle {:.3e}", panel.name(), worst));
  }
  if (log) {
    if (checked > 0) {
      *log << fmt::format("{}: {} points checked against oracle, max |d| = {:.3e}\n",
                          panel.name(), checked, worst);
    } else {
      *log << fmt::format("{}: beyond oracle reach (unitarity and per-step checks only)\n",
                          panel.name());
    }
  }
  for (const auto& p : points) {
    require(within_physical_bounds(p), fmt::format("{}: point out of bounds", panel.name()));
  }
}

nlohmann::json derived_values(std::ostream* log) {
  const ModelParams& params = kFigureParams;
  nlohmann::json doc;
  doc["params"] = to_json(params);

  // Single-particle sector = m22 of the composed transform.
  const cplx m22 = total_transform(params, 0.0, 2.0).m22;
  const cplx sector1 = decoherence_factor_oracle_fock(params, 1, 0.0, 2.0);
  require(std::abs(m22 - sector1) <= 1e-10, "m22 vs sector-1 oracle");
  doc["m22_t0_tp2"] = complex_json(m22);

  // Fock N = 10: closed form, quadrature and oracle.
  const cplx fock_closed = decoherence_factor_fock_closed(params, 10, 0.0, 2.0);
  const cplx fock_oracle = decoherence_factor_oracle_fock(params, 10, 0.0, 2.0);
  const cplx fock_quad =
      decoherence_factor_fock_quadrature(params, 10, 0.0, 2.0, default_quadrature(10));
  require(std::abs(fock_closed - fock_oracle) <= 1e-9, "fock-10 closed vs oracle");
  require(std::abs(fock_closed - fock_quad) <= 1e-9, "fock-10 closed vs quadrature");
  doc["fock10_t0_tp2"] = complex_json(fock_closed);

  // Fock N = 100 at (10, 12): closed form vs quadrature at radial order 128.
  const cplx fock100 = decoherence_factor_fock_closed(params, 100, 10.0, 12.0);
  const cplx fock100_quad = decoherence_factor_fock_quadrature(params, 100, 10.0, 12.0, {128, 64});
  require(std::abs(fock100 - fock100_quad) <= 1e-6, "fock-100 closed vs quadrature");
  doc["fock100_t10_tp12"] = complex_json(fock100);

  // Coherent sqrt(10): overlap formula vs Poisson mixture of sectors.
  const cplx beta0{std::sqrt(10.0), 0.0};
  const cplx coherent = decoherence_factor_coherent(params, beta0, 0.0, 2.0);
  const auto coherent_oracle = decoherence_factor_oracle_coherent(params, beta0, 0.0, 2.0, 120);
  require(std::abs(coherent - coherent_oracle.value) <= 1e-6, "coherent closed vs oracle");
  doc["coherent10_t0_tp2"] = complex_json(coherent);

  nlohmann::json times = nlohmann::json::array();
  for (const char* kind : {"coherent", "fock"}) {
    for (std::uint64_t n : {10u, 100u, 10000u}) {
      for (double t : {0.0, 10.0}) {
        const ApparatusState state = std::string(kind) == "coherent"
                                         ? ApparatusState{coherent_with_mean_number(double(n))}
                                         : ApparatusState{FockState{n}};
        const auto tau = decoherence_time(params, state, t);
        times.push_back({{"kind", kind},
                         {"n", n},
                         {"t", t},
                         {"tau_d", tau ? nlohmann::json(*tau) : nlohmann::json(nullptr)}});
      }
    }
  }
  doc["decoherence_times"] = times;
  if (log) *log << "derived values verified against oracle and quadrature\n";
  return doc;
}

}  // namespace

std::vector<GoldenFile> build_golden_set(std::ostream* log) {
  std::vector<GoldenFile> files;
  for (const FigurePanel& panel : all_figure_panels()) {
    const SweepConfig config = panel_sweep_config(panel, {}, false);
    const auto points = run_sweep(config);
    verify_panel(panel, points, log);
    std::ostringstream csv;
    write_csv(csv, points);
    files.push_back({panel.name() + ".csv", csv.str()});
  }
  files.push_back({"derived_values.json", derived_values(log).dump(2) + "\n"});
  return files;
}

void write_golden_set(const std::vector<GoldenFile>& files, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, fmt::format("cannot create {}", dir.string()));
  for (const auto& file : files) {
    std::ofstream out(dir / file.name, std::ios::binary);
    out << file.contents;
    if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", file.name));
  }
}

std::vector<std::string> diff_golden_set(const std::vector<GoldenFile>& files,
                                         const std::filesystem::path& dir) {
  std::vector<std::string> mismatched;
  for (const auto& file : files) {
    std::ifstream in(dir / file.name, std::ios::binary);
    std::ostringstream contents;
    contents << in.rdbuf();
    if (!in || contents.str() != file.contents) mismatched.push_back(file.name);
  }
  return mismatched;
}

}  // namespace soqd
