#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "soqd/model.hpp"

namespace soqd {

// ---------------------------------------------------------------------------
// Free two-mode field
// ---------------------------------------------------------------------------

/// Two-time amplitude <0,0| phi(t2) phi(t1) |1_e, 1_g> of the measuring field
/// phi = c_g b_g e^{-i w_g t} + c_e b_e e^{-i w_e t}. The two terms are the two
/// orders in which the quanta can be removed.
/// Throws Error(NotNormalized) unless |c_e|^2 + |c_g|^2 = 1 within 1e-9.
cplx two_time_amplitude(cplx c_e, cplx c_g, double omega_e, double omega_g, double t1, double t2);

/// G2 = 2 |c_e c_g|^2 [1 + cos((w_g - w_e)(t2 - t1))] = |two_time_amplitude|^2.
double g2_free(cplx c_e, cplx c_g, double omega_e, double omega_g, double t1, double t2);

// ---------------------------------------------------------------------------
// Interacting model
// ---------------------------------------------------------------------------

/// Overlap <v | M v> of an arbitrary product coherent state v = (alpha0, beta0)
/// with its image under the composed six-step transform.
cplx decoherence_factor_coherent(const ModelParams& params, const CoherentState& state, double t,
                                 double t_prime);

/// The |0, beta0> preparation.
cplx decoherence_factor_coherent(const ModelParams& params, cplx beta0, double t, double t_prime);

/// Discretization of the phase-space integral over d^2 beta / pi.
struct QuadratureSpec {
  std::size_t radial_order = 64;   ///< Gauss-Laguerre nodes in u = |beta|^2
  std::size_t angular_order = 64;  ///< uniform nodes in arg(beta)
};

/// Largest Fock number accepted by the quadrature route.
inline constexpr std::uint64_t kMaxQuadratureFock = 256;

/// radial_order = max(64, n + 8), angular_order = 64.
QuadratureSpec default_quadrature(std::uint64_t n);

/// Fock-state factor by direct numerical integration over the coherent-state
/// resolution of |N>. The integrand is assembled in log space.
/// Throws InsufficientOrder if radial_order < n + 1 (or either order is zero)
/// and Overflow if n > kMaxQuadratureFock.
cplx decoherence_factor_fock_quadrature(const ModelParams& params, std::uint64_t n, double t,
                                        double t_prime, const QuadratureSpec& quad);

/// Fast path for |0, n>: (m22)^n of the composed transform. Agrees with the
/// quadrature route and the sector oracle; valid for any n.
cplx decoherence_factor_fock_closed(const ModelParams& params, std::uint64_t n, double t,
                                    double t_prime);

/// Closed-form factor for either preparation.
cplx decoherence_factor(const ModelParams& params, const ApparatusState& state, double t,
                        double t_prime);

/// G = 1/2 + (1/2) Re(e^{i w_e (t - t')} F).
/// Throws Error(UnphysicalFactor) if |f| > 1 + 1e-6.
double g2_interacting(cplx f, double t, double t_prime, double omega_e);

// ---------------------------------------------------------------------------
// Decoherence time
// ---------------------------------------------------------------------------

struct DecoherenceSearch {
  double threshold = std::exp(-1.0);
  double tau_max = 200.0;
  double coarse_step = 1e-3;  ///< scan spacing before bisection
  double tolerance = 1e-6;    ///< bisection bracket width
};

/// Smallest tau > 0 at which |F(t, t + tau)| first drops below the threshold,
/// or nullopt if it never does on (0, tau_max]. Uses the closed-form factor.
/// Throws InvalidArgument unless 0 < threshold < 1 and the scan settings are positive.
std::optional<double> decoherence_time(const ModelParams& params, const ApparatusState& state,
                                       double t, const DecoherenceSearch& search = {});

}  // namespace soqd
