#include "soqd/sweep.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "soqd/correlation.hpp"
#include "soqd/error.hpp"
#include "soqd/oracle.hpp"
#include "soqd/svg_plot.hpp"

namespace soqd {

namespace {

const std::set<std::string> kConfigKeys = {
    "omega1",  "omega2",  "d_e",       "d_g",    "omega_e", "apparatus", "t_values",
    "tau_min", "tau_max", "tau_steps", "method", "output",  "format",    "plot"};

template <typename T>
T required(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("missing key '{}'", key));
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("key '{}' has the wrong type", key));
  }
}

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

double parse_double(std::string_view field) {
  // strtod rather than from_chars: libstdc++ 11 lacks floating from_chars.
  const std::string text(field);
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("bad CSV number '{}'", text));
  }
  return value;
}

}  // namespace

void check(const SweepConfig& config) {
  validate(config.params);
  if (config.t_values.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "t_values must not be empty");
  }
  for (double t : config.t_values) {
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("t = {} must be finite and >= 0", t));
    }
  }
  if (!(config.tau_min < config.tau_max)) {
    throw Error(ErrorCode::ConfigInvalid, "tau_min must be < tau_max");
  }
  if (config.tau_steps < 2) {
    throw Error(ErrorCode::ConfigInvalid, "tau_steps must be >= 2");
  }
  const double min_t = *std::min_element(config.t_values.begin(), config.t_values.end());
  if (min_t + config.tau_min < 0.0) {
    throw Error(ErrorCode::ConfigInvalid, "t + tau_min must be >= 0");
  }
  if (const auto* fock = std::get_if<FockState>(&config.state)) {
    if (config.method == Method::Quadrature && fock->n > kMaxQuadratureFock) {
      throw Error(ErrorCode::ConfigInvalid,
                  fmt::format("quadrature method needs n <= {}", kMaxQuadratureFock));
    }
    if (config.method == Method::Oracle && fock->n > kMaxOracleSector) {
      throw Error(ErrorCode::ConfigInvalid,
                  fmt::format("oracle method needs n <= {}", kMaxOracleSector));
    }
  } else {
    const auto& coherent = std::get<CoherentState>(config.state);
    if (config.method == Method::Quadrature) {
      throw Error(ErrorCode::ConfigInvalid, "quadrature method applies to Fock states only");
    }
    if (config.method == Method::Oracle) {
      if (coherent.alpha0 != cplx{0.0, 0.0}) {
        throw Error(ErrorCode::ConfigInvalid, "oracle method needs alpha0 = 0");
      }
      if (10.0 * std::norm(coherent.beta0) > static_cast<double>(kMaxOracleSector)) {
        throw Error(ErrorCode::ConfigInvalid, "oracle method needs 10 |beta0|^2 <= 512");
      }
    }
  }
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.contains(key)) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown key '{}'", key));
    }
  }

  SweepConfig config;
  config.params = model_params_from_json(j);
  config.state = apparatus_from_json(required<nlohmann::json>(j, "apparatus"));
  if (j.contains("t_values")) config.t_values = required<std::vector<double>>(j, "t_values");
  config.tau_min = j.contains("tau_min") ? required<double>(j, "tau_min") : 0.0;
  config.tau_max = required<double>(j, "tau_max");
  config.tau_steps = required<std::size_t>(j, "tau_steps");

  const std::string method = j.contains("method") ? required<std::string>(j, "method") : "closed";
  if (method == "closed") {
    config.method = Method::Closed;
  } else if (method == "quadrature") {
    config.method = Method::Quadrature;
  } else if (method == "oracle") {
    config.method = Method::Oracle;
  } else {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown method '{}'", method));
  }

  config.output_path = required<std::string>(j, "output");
  const std::string format = j.contains("format") ? required<std::string>(j, "format") : "csv";
  if (format == "csv") {
    config.output_format = OutputFormat::Csv;
  } else if (format == "json") {
    config.output_format = OutputFormat::Json;
  } else {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown format '{}'", format));
  }
  config.emit_plot = j.contains("plot") ? required<bool>(j, "plot") : false;

  check(config);
  return config;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, fmt::format("cannot open config {}", path.string()));
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
  return sweep_config_from_json(j);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t steps) {
  if (steps < 2) {
    throw Error(ErrorCode::InvalidArgument, "grid needs at least two points");
  }
  std::vector<double> grid(steps);
  const double span = hi - lo;
  const double denom = static_cast<double>(steps - 1);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = lo + span * static_cast<double>(i) / denom;
  }
  grid.back() = hi;
  return grid;
}

std::vector<CorrelationPoint> run_sweep(const SweepConfig& config, unsigned workers) {
  check(config);
  const std::vector<double> taus = uniform_grid(config.tau_min, config.tau_max, config.tau_steps);
  const std::size_t total = config.t_values.size() * taus.size();
  std::vector<CorrelationPoint> points(total);

  // The oracle eigensystems depend only on the parameters; build them once.
  std::optional<SectorOracle> oracle;
  std::uint64_t cutoff = 0;
  if (config.method == Method::Oracle) {
    if (const auto* fock = std::get_if<FockState>(&config.state)) {
      oracle = SectorOracle::single(config.params, fock->n);
    } else {
      const double mean = std::norm(std::get<CoherentState>(config.state).beta0);
      cutoff = std::min<std::uint64_t>(
          kMaxOracleSector, std::max<std::uint64_t>(40, static_cast<std::uint64_t>(
                                                            std::ceil(10.0 * mean)) + 20));
      oracle = SectorOracle::up_to(config.params, cutoff);
    }
  }

  const auto factor = [&](double t, double t_prime) -> cplx {
    switch (config.method) {
      case Method::Closed:
        return decoherence_factor(config.params, config.state, t, t_prime);
      case Method::Quadrature: {
        const auto n = std::get<FockState>(config.state).n;
        return decoherence_factor_fock_quadrature(config.params, n, t, t_prime,
                                                  default_quadrature(n));
      }
      case Method::Oracle:
        if (const auto* fock = std::get_if<FockState>(&config.state)) {
          return oracle->fock(fock->n, t, t_prime);
        }
        return oracle->coherent(std::get<CoherentState>(config.state).beta0, t, t_prime, cutoff)
            .value;
    }
    return {};
  };

  const auto evaluate = [&](std::size_t index) {
    const double t = config.t_values[index / taus.size()];
    const double tau = taus[index % taus.size()];
    const double t_prime = t + tau;
    const cplx f = factor(t, t_prime);
    CorrelationPoint point{t, tau, f, g2_interacting(f, t, t_prime, config.params.omega_e)};
    assert(within_physical_bounds(point));
    points[index] = point;
  };

  unsigned n_workers = workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  n_workers = static_cast<unsigned>(std::min<std::size_t>(n_workers, total));
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) evaluate(i);
    return points;
  }

  // Strided partition; each worker writes only its own slots.
  std::vector<std::exception_ptr> failures(n_workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_workers);
    for (unsigned w = 0; w < n_workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += n_workers) evaluate(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return points;
}

void write_csv(std::ostream& out, const std::vector<CorrelationPoint>& points) {
  out << "t,tau,re_F,im_F,abs_F,G\n";
  for (const auto& p : points) {
    out << format_double(p.t) << ',' << format_double(p.tau) << ',' << format_double(p.f.real())
        << ',' << format_double(p.f.imag()) << ',' << format_double(std::abs(p.f)) << ','
        << format_double(p.g) << '\n';
  }
}

std::vector<CorrelationPoint> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "t,tau,re_F,im_F,abs_F,G") {
    throw Error(ErrorCode::ConfigInvalid, "missing or unexpected CSV header");
  }
  std::vector<CorrelationPoint> points;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) fields.push_back(parse_double(cell));
    if (fields.size() != 6) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("expected 6 CSV fields: '{}'", line));
    }
    points.push_back({fields[0], fields[1], cplx{fields[2], fields[3]}, fields[5]});
  }
  return points;
}

nlohmann::json points_to_json(const std::vector<CorrelationPoint>& points) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : points) {
    rows.push_back({{"t", p.t},
                    {"tau", p.tau},
                    {"re_F", p.f.real()},
                    {"im_F", p.f.imag()},
                    {"abs_F", std::abs(p.f)},
                    {"G", p.g}});
  }
  return rows;
}

void write_sweep_output(const SweepConfig& config, const std::vector<CorrelationPoint>& points,
                        const std::string& plot_title) {
  const auto& path = config.output_path;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorCode::IoError,
                  fmt::format("cannot create {}: {}", path.parent_path().string(), ec.message()));
    }
  }
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", path.string()));
    if (config.output_format == OutputFormat::Csv) {
      write_csv(out, points);
    } else {
      nlohmann::json doc = to_json(config.params);
      doc["apparatus"] = to_json(config.state);
      doc["points"] = points_to_json(points);
      out << doc.dump(2) << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, fmt::format("write failed: {}", path.string()));
  }

  if (config.emit_plot) {
    std::vector<Series> series;
    for (double t : config.t_values) {
      Series s;
      for (const auto& p : points) {
        if (p.t != t) continue;
        s.x.push_back(p.tau);
        s.y.push_back(p.g);
      }
      series.push_back(std::move(s));
    }
    auto svg_path = path;
    svg_path.replace_extension(".svg");
    std::ofstream out(svg_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot write {}", svg_path.string()));
    out << svg_line_plot(series, plot_title.empty() ? describe(config.state) : plot_title,
                         "τ = t′ − t", "G");
    if (!out) throw Error(ErrorCode::IoError, fmt::format("write failed: {}", svg_path.string()));
  }
}

}  // namespace soqd
