#pragma once

#include <array>
#include <utility>

#include "soqd/model.hpp"

namespace soqd {

/// The six steps whose product gives the apparatus evolution inside the
/// decoherence factor. Step 1 acts first.
struct Schedule {
  std::array<StepParams, 6> steps;
};

/// Builds the schedule for reference time t and second time t_prime.
/// Odd steps evolve forward with the full apparatus Hamiltonian, even steps
/// run it backwards:
///   1: ( w1,  w2,  de+dg, t )     2: (-w1, -w2, -de, t )
///   3: ( w1,  w2,  de,    t')     4: (-w1, -w2, -dg, t')
///   5: ( w1,  w2,  dg,    t )     6: (-w1, -w2, -de-dg, t)
/// Throws Error(NegativeTime) if either time is negative.
Schedule build_schedule(const ModelParams& params, double t, double t_prime);

/// Rabi-like frequency sqrt(((alpha2 - alpha1)/2)^2 + beta^2).
double gamma(const StepParams& step);

/// Exact transform exp(-i h t) of one step restricted to the one-quantum
/// sector, i.e. the coefficients (A+1, C, D, B+1) of the normal-ordered
/// evolution operator. The Gamma -> 0 limit is taken analytically.
ModeTransform step_transform(const StepParams& step);

inline constexpr double kDefaultOdeStep = 1e-3;

/// Independent route to step_transform: classical RK4 on the coefficient
/// equations, starting from A = B = C = D = 0, with a uniform step no larger
/// than dt. Throws Error(NonPositiveStep) for dt <= 0.
ModeTransform step_transform_ode(const StepParams& step, double dt = kDefaultOdeStep);

/// M6 * M5 * M4 * M3 * M2 * M1. Step 1 is rightmost so it acts first on the
/// apparatus amplitudes; swapping this order transposes the physics.
ModeTransform compose(const Schedule& schedule);

/// Maps coherent amplitudes through the transform: |alpha, beta> -> |alpha', beta'>.
std::pair<cplx, cplx> apply_to_coherent(const ModeTransform& m, cplx alpha, cplx beta);

/// compose(build_schedule(params, t, t_prime)).
ModeTransform total_transform(const ModelParams& params, double t, double t_prime);

}  // namespace soqd
