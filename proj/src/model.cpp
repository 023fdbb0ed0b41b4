#include "soqd/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "soqd/error.hpp"

namespace soqd {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::NonPositiveStep: return "NonPositiveStep";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::InsufficientOrder: return "InsufficientOrder";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::UnphysicalFactor: return "UnphysicalFactor";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::SectorTooLarge: return "SectorTooLarge";
    case ErrorCode::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ToleranceExceeded: return "ToleranceExceeded";
  }
  return "Unknown";
}

ModelParams validate(const ModelParams& params) {
  const std::pair<const char*, double> fields[] = {
      {"omega1", params.omega1}, {"omega2", params.omega2}, {"d_e", params.d_e},
      {"d_g", params.d_g},       {"omega_e", params.omega_e},
  };
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::NonFinite, fmt::format("model parameter {} = {}", name, value));
    }
  }
  return params;
}

double unitarity_defect(const ModeTransform& m) {
  const ModeTransform p = m.adjoint() * m;
  return std::max({std::abs(p.m11 - 1.0), std::abs(p.m12), std::abs(p.m21),
                   std::abs(p.m22 - 1.0)});
}

double max_abs_diff(const ModeTransform& a, const ModeTransform& b) {
  return std::max({std::abs(a.m11 - b.m11), std::abs(a.m12 - b.m12), std::abs(a.m21 - b.m21),
                   std::abs(a.m22 - b.m22)});
}

bool within_physical_bounds(const CorrelationPoint& point) noexcept {
  return std::abs(point.f) <= 1.0 + 1e-9 && point.g >= -1e-9 && point.g <= 1.0 + 1e-9;
}

namespace {

nlohmann::json complex_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx complex_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("{} must be a [re, im] pair", key));
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_field(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("missing key '{}'", key));
  }
  if (!it->is_number()) {
    throw Error(ErrorCode::ConfigInvalid, fmt::format("'{}' must be a number", key));
  }
  return it->get<double>();
}

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const char* where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::ConfigInvalid, fmt::format("unknown key '{}' in {}", key, where));
    }
  }
}

}  // namespace

nlohmann::json to_json(const ApparatusState& state) {
  return std::visit(
      [](const auto& s) -> nlohmann::json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return {{"kind", "fock"}, {"n", s.n}};
        } else {
          // Amplitudes are written verbatim so that parsing is bit-exact.
          return {{"kind", "coherent"},
                  {"alpha0", complex_to_json(s.alpha0)},
                  {"beta0", complex_to_json(s.beta0)}};
        }
      },
      state);
}

ApparatusState apparatus_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ConfigInvalid, "apparatus must be an object");
  }
  const auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) {
    throw Error(ErrorCode::ConfigInvalid, "apparatus.kind must be \"coherent\" or \"fock\"");
  }
  if (*kind == "fock") {
    reject_unknown_keys(j, {"kind", "n"}, "apparatus");
    const auto n = j.find("n");
    if (n == j.end() || !n->is_number_integer() || n->get<std::int64_t>() < 0) {
      throw Error(ErrorCode::ConfigInvalid, "fock apparatus needs a nonnegative integer n");
    }
    return FockState{n->get<std::uint64_t>()};
  }
  if (*kind == "coherent") {
    reject_unknown_keys(j, {"kind", "n", "alpha0", "beta0"}, "apparatus");
    const bool has_n = j.contains("n");
    const bool has_amplitudes = j.contains("alpha0") || j.contains("beta0");
    if (has_n == has_amplitudes) {
      throw Error(ErrorCode::ConfigInvalid,
                  "coherent apparatus needs either n or explicit alpha0/beta0");
    }
    if (has_n) {
      const double n = number_field(j, "n");
      if (!std::isfinite(n) || n < 0.0) {
        throw Error(ErrorCode::ConfigInvalid, "coherent apparatus needs n >= 0");
      }
      return coherent_with_mean_number(n);
    }
    CoherentState state;
    if (j.contains("alpha0")) state.alpha0 = complex_from_json(j["alpha0"], "alpha0");
    if (j.contains("beta0")) state.beta0 = complex_from_json(j["beta0"], "beta0");
    return state;
  }
  throw Error(ErrorCode::ConfigInvalid,
              fmt::format("unknown apparatus kind '{}'", kind->get<std::string>()));
}

nlohmann::json to_json(const ModelParams& params) {
  return {{"omega1", params.omega1}, {"omega2", params.omega2}, {"d_e", params.d_e},
          {"d_g", params.d_g},       {"omega_e", params.omega_e}};
}

ModelParams model_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  }
  ModelParams params{number_field(j, "omega1"), number_field(j, "omega2"), number_field(j, "d_e"),
                     number_field(j, "d_g"), number_field(j, "omega_e")};
  try {
    return validate(params);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

std::string describe(const ApparatusState& state) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return fmt::format("fock |0,{}>", s.n);
        } else {
          return fmt::format("coherent |({},{}), ({},{})>", s.alpha0.real(), s.alpha0.imag(),
                             s.beta0.real(), s.beta0.imag());
        }
      },
      state);
}

}  // namespace soqd
