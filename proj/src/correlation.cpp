#include "soqd/correlation.hpp"

#include <algorithm>
#include <cassert>
#include <numbers>

#include <fmt/format.h>

#include "soqd/error.hpp"
#include "soqd/laguerre.hpp"
#include "soqd/propagator.hpp"

namespace soqd {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_normalized(cplx c_e, cplx c_g) {
  const double norm = std::norm(c_e) + std::norm(c_g);
  if (std::abs(norm - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotNormalized, fmt::format("|c_e|^2 + |c_g|^2 = {}", norm));
  }
}

void check_times(double t, double t_prime) {
  if (!(t >= 0.0) || !(t_prime >= 0.0)) {
    throw Error(ErrorCode::NegativeTime, fmt::format("t = {}, t' = {}", t, t_prime));
  }
}

// <a|b> for product coherent states a = (a1, a2), b = (b1, b2).
cplx coherent_overlap(cplx a1, cplx a2, cplx b1, cplx b2) {
  const double norms = std::norm(a1) + std::norm(a2) + std::norm(b1) + std::norm(b2);
  return std::exp(-0.5 * norms + std::conj(a1) * b1 + std::conj(a2) * b2);
}

}  // namespace

cplx two_time_amplitude(cplx c_e, cplx c_g, double omega_e, double omega_g, double t1, double t2) {
  check_normalized(c_e, c_g);
  // e removed at t2 and g at t1, plus the exchanged ordering.
  return c_e * c_g * std::exp(-kI * (omega_e * t2 + omega_g * t1)) +
         c_g * c_e * std::exp(-kI * (omega_g * t2 + omega_e * t1));
}

double g2_free(cplx c_e, cplx c_g, double omega_e, double omega_g, double t1, double t2) {
  check_normalized(c_e, c_g);
  return 2.0 * std::norm(c_e * c_g) * (1.0 + std::cos((omega_g - omega_e) * (t2 - t1)));
}

cplx decoherence_factor_coherent(const ModelParams& params, const CoherentState& state, double t,
                                 double t_prime) {
  const ModeTransform m = total_transform(params, t, t_prime);
  const auto [alpha6, beta6] = apply_to_coherent(m, state.alpha0, state.beta0);
  return coherent_overlap(state.alpha0, state.beta0, alpha6, beta6);
}

cplx decoherence_factor_coherent(const ModelParams& params, cplx beta0, double t, double t_prime) {
  return decoherence_factor_coherent(params, CoherentState{cplx{0.0, 0.0}, beta0}, t, t_prime);
}

QuadratureSpec default_quadrature(std::uint64_t n) {
  return {std::max<std::size_t>(64, static_cast<std::size_t>(n) + 8), 64};
}

cplx decoherence_factor_fock_quadrature(const ModelParams& params, std::uint64_t n, double t,
                                        double t_prime, const QuadratureSpec& quad) {
  if (n > kMaxQuadratureFock) {
    throw Error(ErrorCode::Overflow,
                fmt::format("quadrature route limited to n <= {}, got {}", kMaxQuadratureFock, n));
  }
  if (quad.radial_order < n + 1 || quad.angular_order == 0) {
    throw Error(ErrorCode::InsufficientOrder,
                fmt::format("radial_order {} / angular_order {} for n = {}", quad.radial_order,
                            quad.angular_order, n));
  }
  const ModeTransform m = total_transform(params, t, t_prime);
  const GaussLaguerreRule rule = gauss_laguerre(quad.radial_order);

  const double nd = static_cast<double>(n);
  const double log_factorial = std::lgamma(nd + 1.0);
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(quad.angular_order);

  // d^2 beta / pi = du dtheta / (2 pi) with u = |beta|^2.
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < quad.angular_order; ++j) {
    const cplx direction = std::polar(1.0, dtheta * static_cast<double>(j));
    cplx ring{0.0, 0.0};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double u = rule.nodes[i];
      const cplx beta = std::sqrt(u) * direction;
      const auto [alpha6, beta6] = apply_to_coherent(m, cplx{0.0, 0.0}, beta);

      // <0,N|alpha6,beta6> <beta|N>
      cplx log_integrand = -0.5 * (std::norm(alpha6) + std::norm(beta6) + u) - log_factorial;
      if (n > 0) {
        log_integrand += nd * (std::log(beta6) + std::log(std::conj(beta)));
      }
      // Laguerre weight already carries e^{-u}; undo it on the integrand.
      ring += std::exp(log_integrand + rule.log_weights[i] + u);
    }
    sum += ring;
  }
  return sum / static_cast<double>(quad.angular_order);
}

cplx decoherence_factor_fock_closed(const ModelParams& params, std::uint64_t n, double t,
                                    double t_prime) {
  check_times(t, t_prime);
  if (n == 0) return {1.0, 0.0};
  const cplx m22 = total_transform(params, t, t_prime).m22;
  const double nd = static_cast<double>(n);
  return std::polar(std::pow(std::abs(m22), nd), nd * std::arg(m22));
}

cplx decoherence_factor(const ModelParams& params, const ApparatusState& state, double t,
                        double t_prime) {
  return std::visit(
      [&](const auto& s) -> cplx {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FockState>) {
          return decoherence_factor_fock_closed(params, s.n, t, t_prime);
        } else {
          return decoherence_factor_coherent(params, s, t, t_prime);
        }
      },
      state);
}

double g2_interacting(cplx f, double t, double t_prime, double omega_e) {
  if (!(std::abs(f) <= 1.0 + 1e-6)) {
    throw Error(ErrorCode::UnphysicalFactor, fmt::format("|F| = {}", std::abs(f)));
  }
  const double g = 0.5 + 0.5 * (std::exp(kI * (omega_e * (t - t_prime))) * f).real();
  assert(g >= -1e-9 && g <= 1.0 + 1e-9);
  return g;
}

std::optional<double> decoherence_time(const ModelParams& params, const ApparatusState& state,
                                       double t, const DecoherenceSearch& search) {
  if (!(search.threshold > 0.0 && search.threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("threshold = {}", search.threshold));
  }
  if (!(search.tau_max > 0.0 && search.coarse_step > 0.0 && search.tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tau_max, coarse_step and tolerance must be positive");
  }
  check_times(t, t);

  const auto below = [&](double tau) {
    return std::abs(decoherence_factor(params, state, t, t + tau)) < search.threshold;
  };

  const auto n_coarse = static_cast<long>(std::ceil(search.tau_max / search.coarse_step));
  double lo = 0.0;
  for (long k = 1; k <= n_coarse; ++k) {
    const double hi = std::min(search.tau_max, static_cast<double>(k) * search.coarse_step);
    if (below(hi)) {
      double a = lo;
      double b = hi;
      while (b - a > search.tolerance) {
        const double mid = 0.5 * (a + b);
        (below(mid) ? b : a) = mid;
      }
      return b;
    }
    lo = hi;
  }
  return std::nullopt;
}

}  // namespace soqd
