#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "soqd/model.hpp"

namespace soqd {

enum class Method { Closed, Quadrature, Oracle };
enum class OutputFormat { Csv, Json };

struct SweepConfig {
  ModelParams params;
  ApparatusState state = FockState{0};
  std::vector<double> t_values{0.0};
  double tau_min = 0.0;
  double tau_max = 1.0;
  std::size_t tau_steps = 2;  ///< grid points, endpoints included
  Method method = Method::Closed;
  std::filesystem::path output_path;
  OutputFormat output_format = OutputFormat::Csv;
  bool emit_plot = false;
};

/// Throws Error(ConfigInvalid) describing the first violated constraint.
void check(const SweepConfig& config);

/// Parses the JSON config. Keys: omega1, omega2, d_e, d_g, omega_e, apparatus,
/// t_values, tau_min, tau_max, tau_steps, method ("closed"|"quadrature"|"oracle"),
/// output, format ("csv"|"json"), plot. Unknown keys are rejected.
SweepConfig sweep_config_from_json(const nlohmann::json& j);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// tau_min + i (tau_max - tau_min) / (steps - 1), i = 0..steps-1.
std::vector<double> uniform_grid(double lo, double hi, std::size_t steps);

/// Evaluates every (t, tau) point, t-major and tau ascending. Grid points are
/// spread over `workers` threads (0 = hardware concurrency); results do not
/// depend on the worker count.
std::vector<CorrelationPoint> run_sweep(const SweepConfig& config, unsigned workers = 0);

// CSV columns: t,tau,re_F,im_F,abs_F,G with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<CorrelationPoint>& points);
std::vector<CorrelationPoint> read_csv(std::istream& in);

nlohmann::json points_to_json(const std::vector<CorrelationPoint>& points);

/// Writes points to config.output_path in the configured format, plus an SVG
/// next to it when emit_plot is set. Throws Error(IoError).
void write_sweep_output(const SweepConfig& config, const std::vector<CorrelationPoint>& points,
                        const std::string& plot_title = {});

}  // namespace soqd
