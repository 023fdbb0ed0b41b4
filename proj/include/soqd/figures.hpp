#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "soqd/model.hpp"
#include "soqd/sweep.hpp"

namespace soqd {

/// One panel of the two published figures: figure 1 uses the coherent
/// preparation (0, sqrt(N)), figure 2 the Fock state |0, N>. Panels a..f run
/// N = 10, 10, 1e2, 1e2, 1e4, 1e4 with t alternating 0 and 10.
struct FigurePanel {
  int figure = 1;
  char panel = 'a';
  std::uint64_t n = 10;
  double t = 0.0;
  double tau_max = 20.0;
  std::size_t tau_steps = 600;

  std::string name() const;  ///< e.g. "fig1a"
  ApparatusState state() const;
};

/// Throws Error(ConfigInvalid) for figure not in {1,2} or panel not in a..f.
FigurePanel figure_panel(int figure, char panel);
std::vector<FigurePanel> all_figure_panels();

/// Closed-form sweep config writing <out_dir>/<name>.csv (+ .svg when plot is set).
SweepConfig panel_sweep_config(const FigurePanel& panel, const std::filesystem::path& out_dir,
                               bool plot = true);

/// Runs one panel and writes its CSV and SVG; returns the written paths.
std::vector<std::filesystem::path> reproduce_figure(int figure, char panel,
                                                    const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------

struct CompareRow {
  double tau = 0.0;
  cplx closed;
  cplx quadrature;
  cplx oracle;
  double max_delta = 0.0;  ///< largest pairwise |difference|
};

struct CompareReport {
  std::vector<CompareRow> rows;
  double max_delta = 0.0;
  double tolerance = 1e-6;
  bool passed() const { return max_delta <= tolerance; }
};

/// Evaluates the Fock-n factor at (t, t + tau) by the closed form, the
/// phase-space quadrature and the sector oracle.
/// Throws ConfigInvalid when n exceeds the quadrature or oracle limits.
CompareReport compare_methods(const ModelParams& params, std::uint64_t n, double t,
                              const std::vector<double>& taus, double tolerance = 1e-6);

void print_report(std::ostream& out, const CompareReport& report);

// ---------------------------------------------------------------------------

/// In-memory golden set: file name -> exact file contents.
struct GoldenFile {
  std::string name;
  std::string contents;
};

/// Recomputes every figure CSV plus derived_values.json. Panels and values
/// within oracle reach are first checked against the sector oracle / quadrature;
/// throws Error(ToleranceExceeded) if a check fails, so nothing is produced
/// from an unverified fast path.
std::vector<GoldenFile> build_golden_set(std::ostream* log = nullptr);

/// Writes the golden set into dir. Throws Error(IoError).
void write_golden_set(const std::vector<GoldenFile>& files, const std::filesystem::path& dir);

/// Names of files in dir that are missing or differ from the recomputed set.
std::vector<std::string> diff_golden_set(const std::vector<GoldenFile>& files,
                                         const std::filesystem::path& dir);

}  // namespace soqd
