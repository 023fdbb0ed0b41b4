#include "soqd/propagator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "soqd/error.hpp"

namespace soqd {

namespace {

constexpr cplx kI{0.0, 1.0};

// Below this value of Gamma*t, sin(Gamma t)/Gamma is replaced by its Taylor series.
constexpr double kSeriesThreshold = 1e-8;

}  // namespace

Schedule build_schedule(const ModelParams& params, double t, double t_prime) {
  if (!(t >= 0.0) || !(t_prime >= 0.0)) {
    throw Error(ErrorCode::NegativeTime, fmt::format("t = {}, t' = {}", t, t_prime));
  }
  const double w1 = params.omega1;
  const double w2 = params.omega2;
  const double de = params.d_e;
  const double dg = params.d_g;
  return Schedule{{{
      {w1, w2, de + dg, t, 1},
      {-w1, -w2, -de, t, 2},
      {w1, w2, de, t_prime, 3},
      {-w1, -w2, -dg, t_prime, 4},
      {w1, w2, dg, t, 5},
      {-w1, -w2, -de - dg, t, 6},
  }}};
}

double gamma(const StepParams& step) {
  return std::hypot(0.5 * (step.alpha2 - step.alpha1), step.beta);
}

ModeTransform step_transform(const StepParams& step) {
  const double t = step.duration;
  const double g = gamma(step);
  const double gt = g * t;

  // sin(g t) / g, with the removable singularity at g = 0 handled by the series.
  const double sinc_t = gt < kSeriesThreshold ? t * (1.0 - gt * gt / 6.0) : std::sin(gt) / g;
  const double c = std::cos(gt);
  const double detuning = 0.5 * (step.alpha2 - step.alpha1);
  const cplx phase = std::exp(-kI * (0.5 * (step.alpha1 + step.alpha2) * t));

  const cplx off = -kI * step.beta * sinc_t * phase;
  return {phase * (c + kI * detuning * sinc_t), off, off, phase * (c - kI * detuning * sinc_t)};
}

ModeTransform step_transform_ode(const StepParams& step, double dt) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::NonPositiveStep, fmt::format("dt = {}", dt));
  }
  if (step.duration == 0.0) {
    return ModeTransform::identity();
  }

  // State (A, B, C, D) of the normal-ordered coefficients.
  using State = std::array<cplx, 4>;
  const double a1 = step.alpha1;
  const double a2 = step.alpha2;
  const double b = step.beta;
  const auto rhs = [=](const State& s) -> State {
    const auto& [A, B, C, D] = s;
    return {-kI * (a1 * (A + 1.0) + b * D), -kI * (a2 * (B + 1.0) + b * C),
            -kI * (a1 * C + b * (B + 1.0)), -kI * (a2 * D + b * (A + 1.0))};
  };
  const auto axpy = [](const State& x, double h, const State& k) {
    State out;
    for (std::size_t i = 0; i < 4; ++i) out[i] = x[i] + h * k[i];
    return out;
  };

  const double span = std::abs(step.duration);
  const auto n_steps = static_cast<long>(std::ceil(span / dt));
  const double h = step.duration / static_cast<double>(n_steps);

  State s{};
  for (long i = 0; i < n_steps; ++i) {
    const State k1 = rhs(s);
    const State k2 = rhs(axpy(s, 0.5 * h, k1));
    const State k3 = rhs(axpy(s, 0.5 * h, k2));
    const State k4 = rhs(axpy(s, h, k3));
    for (std::size_t j = 0; j < 4; ++j) {
      s[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
  }
  const auto& [A, B, C, D] = s;
  return {A + 1.0, C, D, B + 1.0};
}

ModeTransform compose(const Schedule& schedule) {
  ModeTransform total = ModeTransform::identity();
  for (const StepParams& step : schedule.steps) {
    total = step_transform(step) * total;
  }
  return total;
}

std::pair<cplx, cplx> apply_to_coherent(const ModeTransform& m, cplx alpha, cplx beta) {
  return {m.m11 * alpha + m.m12 * beta, m.m21 * alpha + m.m22 * beta};
}

ModeTransform total_transform(const ModelParams& params, double t, double t_prime) {
  return compose(build_schedule(params, t, t_prime));
}

}  // namespace soqd
