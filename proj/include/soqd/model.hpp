#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

namespace soqd {

using cplx = std::complex<double>;

/// Physical constants of the two-mode system plus two-oscillator apparatus.
/// hbar = 1 and the ground-mode frequency is fixed to zero, so it is not stored.
struct ModelParams {
  double omega1 = 0.0;   ///< apparatus mode 1 frequency
  double omega2 = 0.0;   ///< apparatus mode 2 frequency
  double d_e = 0.0;      ///< coupling of the excited system mode to the apparatus
  double d_g = 0.0;      ///< coupling of the ground system mode to the apparatus
  double omega_e = 0.0;  ///< excited system mode frequency

  bool operator==(const ModelParams&) const = default;
};

/// Parameter set used throughout the published figures.
inline constexpr ModelParams kFigureParams{0.2, 1.3, 0.8, 0.2, 1.0};

/// Returns params unchanged, or throws Error(NonFinite).
ModelParams validate(const ModelParams& params);

/// One entry of the six-step schedule: h = alpha1 n1 + alpha2 n2 + beta (a1+ a2 + a2+ a1)
/// applied for `duration`.
struct StepParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
  double duration = 0.0;
  int index = 1;  ///< position in the schedule, 1..6

  bool operator==(const StepParams&) const = default;
};

/// 2x2 map of coherent amplitudes (alpha, beta) of the two apparatus modes.
struct ModeTransform {
  cplx m11{1.0, 0.0};
  cplx m12{0.0, 0.0};
  cplx m21{0.0, 0.0};
  cplx m22{1.0, 0.0};

  static ModeTransform identity() { return {}; }

  /// Matrix product: (*this) * rhs, i.e. rhs acts first.
  ModeTransform operator*(const ModeTransform& rhs) const {
    return {m11 * rhs.m11 + m12 * rhs.m21, m11 * rhs.m12 + m12 * rhs.m22,
            m21 * rhs.m11 + m22 * rhs.m21, m21 * rhs.m12 + m22 * rhs.m22};
  }

  ModeTransform adjoint() const {
    return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
  }
};

/// max |(M^dagger M - I)_ij|
double unitarity_defect(const ModeTransform& m);

/// max |a_ij - b_ij|
double max_abs_diff(const ModeTransform& a, const ModeTransform& b);

/// Product coherent state |alpha0, beta0> of the two apparatus modes.
struct CoherentState {
  cplx alpha0{0.0, 0.0};
  cplx beta0{0.0, 0.0};

  bool operator==(const CoherentState&) const = default;
};

/// Fock state |0, n> : mode 1 empty, n quanta in mode 2.
struct FockState {
  std::uint64_t n = 0;

  bool operator==(const FockState&) const = default;
};

using ApparatusState = std::variant<CoherentState, FockState>;

/// Coherent preparation with mean number n: (alpha0, beta0) = (0, sqrt(n)).
inline CoherentState coherent_with_mean_number(double n) {
  return {cplx{0.0, 0.0}, cplx{std::sqrt(n), 0.0}};
}

/// One sample of a (t, tau) sweep.
struct CorrelationPoint {
  double t = 0.0;
  double tau = 0.0;  ///< t' - t
  cplx f{1.0, 0.0};  ///< decoherence factor
  double g = 1.0;    ///< second-order correlation

  bool operator==(const CorrelationPoint&) const = default;
};

/// True when |f| <= 1 + 1e-9 and g lies in [-1e-9, 1 + 1e-9].
bool within_physical_bounds(const CorrelationPoint& point) noexcept;

// JSON form shared by config files and golden metadata.
//   model keys: omega1, omega2, d_e, d_g, omega_e
//   apparatus:  {"kind": "fock", "n": N}
//               {"kind": "coherent", "n": x}            -> (0, sqrt(x))
//               {"kind": "coherent", "beta0": [re, im], "alpha0": [re, im]}
// Unknown keys inside an apparatus object are rejected.
nlohmann::json to_json(const ApparatusState& state);
ApparatusState apparatus_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ModelParams& params);

/// Reads the five model keys from `j`; other keys are left for the caller to check.
ModelParams model_params_from_json(const nlohmann::json& j);

std::string describe(const ApparatusState& state);

}  // namespace soqd
