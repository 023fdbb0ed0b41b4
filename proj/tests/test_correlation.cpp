#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "soqd/correlation.hpp"
#include "soqd/error.hpp"
#include "soqd/propagator.hpp"
#include "test_support.hpp"

namespace soqd {
namespace {

const cplx kHalf{1.0 / std::numbers::sqrt2, 0.0};

// Frozen with scipy.linalg.expm on the 2x2 step Hamiltonians (independent of
// the closed form): (m22)^10 at (t, t') = (0, 2), and (m22)^100 at (10, 12).
constexpr cplx kFock10T0Tp2{0.022804601801403843, -0.061901054147850326};
constexpr cplx kFock100T10Tp12{5.3495430805077085e-24, -1.8853955018082057e-24};
// exp(10 (m22 - 1)) at (0, 2) from the same expm route.
constexpr cplx kCoherent10T0Tp2{0.00554885275756324, 0.010606472456125192};

template <typename F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

TEST(TwoTimeAmplitude, Examples) {
  EXPECT_NEAR(std::abs(two_time_amplitude(kHalf, kHalf, 1.0, 0.0, 0.0, 0.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two_time_amplitude(kHalf, kHalf, 1.0, 0.0, 0.0, std::numbers::pi)), 0.0,
              1e-15);

  // Degenerate modes: 2 c_e c_g e^{-i w (t1 + t2)}.
  const cplx ce = std::polar(0.6, 0.3);
  const cplx cg = std::polar(0.8, -1.1);
  const cplx psi = two_time_amplitude(ce, cg, 0.7, 0.7, 1.3, 4.1);
  EXPECT_NEAR(std::abs(psi - 2.0 * ce * cg * std::exp(cplx(0.0, -0.7 * 5.4))), 0.0, 1e-15);
}

TEST(TwoTimeAmplitude, RejectsUnnormalized) {
  expect_code(ErrorCode::NotNormalized, [] { two_time_amplitude(1.0, 1.0, 1.0, 0.0, 0.0, 0.0); });
  expect_code(ErrorCode::NotNormalized, [] { g2_free(0.5, 0.5, 1.0, 0.0, 0.0, 0.0); });
}

TEST(G2Free, Examples) {
  EXPECT_NEAR(g2_free(kHalf, kHalf, 1.0, 0.0, 3.0, 3.0), 1.0, 1e-15);
  EXPECT_NEAR(g2_free(kHalf, kHalf, 1.0, 0.0, 0.0, std::numbers::pi), 0.0, 1e-15);
  EXPECT_EQ(g2_free(1.0, 0.0, 1.0, 0.0, 0.3, 2.0), 0.0);
}

TEST(G2Free, EqualsAmplitudeSquaredProperty) {
  testing::Draws draws(31);
  for (int i = 0; i < 1000; ++i) {
    const double theta = draws.uniform(0.0, std::numbers::pi / 2);
    const cplx ce = std::polar(std::cos(theta), draws.uniform(0, 6.3));
    const cplx cg = std::polar(std::sin(theta), draws.uniform(0, 6.3));
    const double we = draws.uniform(-3, 3), wg = draws.uniform(-3, 3);
    const double t1 = draws.uniform(0, 20), t2 = draws.uniform(0, 20);
    EXPECT_NEAR(g2_free(ce, cg, we, wg, t1, t2), std::norm(two_time_amplitude(ce, cg, we, wg, t1, t2)),
                1e-12);
  }
}

TEST(CoherentFactor, EqualTimesAndEqualCouplings) {
  EXPECT_NEAR(std::abs(decoherence_factor_coherent(kFigureParams, cplx(3.0, 1.0), 4.0, 4.0) - 1.0),
              0.0, 1e-9);
  ModelParams p = kFigureParams;
  p.d_g = p.d_e;
  EXPECT_NEAR(std::abs(decoherence_factor_coherent(p, cplx(3.0, 1.0), 1.0, 7.0) - 1.0), 0.0, 1e-9);
}

TEST(CoherentFactor, FrozenValue) {
  const cplx f = decoherence_factor_coherent(kFigureParams, std::sqrt(10.0), 0.0, 2.0);
  EXPECT_LE(std::abs(f - kCoherent10T0Tp2), 1e-13);
  const cplx m22 = total_transform(kFigureParams, 0.0, 2.0).m22;
  EXPECT_LE(std::abs(f - std::exp(10.0 * (m22 - 1.0))), 1e-13);
}

TEST(CoherentFactor, ClosedFormIdentityProperty) {
  testing::Draws draws(37);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = draws.params();
    const double t = draws.uniform(0, 10), tp = draws.uniform(0, 10);
    const cplx beta0 = draws.amplitude(std::sqrt(50.0));
    const cplx m22 = total_transform(p, t, tp).m22;
    const cplx f = decoherence_factor_coherent(p, beta0, t, tp);
    EXPECT_LE(std::abs(f - std::exp(std::norm(beta0) * (m22 - 1.0))), 1e-12);
    EXPECT_LE(std::abs(f), 1.0 + 1e-12);
  }
}

TEST(CoherentFactor, GeneralPreparationIsAnOverlap) {
  testing::Draws draws(38);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = draws.params();
    const CoherentState s{draws.amplitude(3.0), draws.amplitude(3.0)};
    const double t = draws.uniform(0, 10);
    EXPECT_LE(std::abs(decoherence_factor_coherent(p, s, t, draws.uniform(0, 10))), 1.0 + 1e-12);
    EXPECT_LE(std::abs(decoherence_factor_coherent(p, s, t, t) - 1.0), 1e-9);
  }
}

TEST(FockQuadrature, VacuumAndEqualCouplings) {
  testing::Draws draws(41);
  for (int i = 0; i < 10; ++i) {
    const double t = draws.uniform(0, 10), tp = draws.uniform(0, 10);
    EXPECT_LE(std::abs(decoherence_factor_fock_quadrature(draws.params(), 0, t, tp, {64, 16}) - 1.0),
              1e-12);
  }
  ModelParams p = kFigureParams;
  p.d_g = p.d_e;
  EXPECT_LE(std::abs(decoherence_factor_fock_quadrature(p, 10, 1.0, 6.0, default_quadrature(10)) - 1.0),
            1e-9);
}

TEST(FockQuadrature, MatchesFrozenFockTen) {
  const cplx f = decoherence_factor_fock_quadrature(kFigureParams, 10, 0.0, 2.0, default_quadrature(10));
  EXPECT_LE(std::abs(f - kFock10T0Tp2), 1e-9);
  EXPECT_LE(std::abs(f - decoherence_factor_fock_closed(kFigureParams, 10, 0.0, 2.0)), 1e-9);
}

TEST(FockQuadrature, Errors) {
  expect_code(ErrorCode::InsufficientOrder,
              [] { decoherence_factor_fock_quadrature(kFigureParams, 10, 0.0, 1.0, {10, 64}); });
  expect_code(ErrorCode::InsufficientOrder,
              [] { decoherence_factor_fock_quadrature(kFigureParams, 10, 0.0, 1.0, {64, 0}); });
  expect_code(ErrorCode::Overflow, [] {
    decoherence_factor_fock_quadrature(kFigureParams, 257, 0.0, 1.0, {300, 64});
  });
  expect_code(ErrorCode::NegativeTime,
              [] { decoherence_factor_fock_quadrature(kFigureParams, 3, -1.0, 1.0, {64, 64}); });
}

TEST(FockQuadrature, LargestSupportedNumber) {
  const cplx f = decoherence_factor_fock_quadrature(kFigureParams, 256, 0.0, 0.05,
                                                     default_quadrature(256));
  EXPECT_LE(std::abs(f - decoherence_factor_fock_closed(kFigureParams, 256, 0.0, 0.05)), 1e-9);
}

TEST(FockClosed, Examples) {
  EXPECT_EQ(decoherence_factor_fock_closed(kFigureParams, 0, 3.0, 9.0), cplx(1.0));
  EXPECT_LE(std::abs(decoherence_factor_fock_closed(kFigureParams, 10000, 7.0, 7.0) - 1.0), 1e-9);
  EXPECT_LE(std::abs(decoherence_factor_fock_closed(kFigureParams, 10, 0.0, 2.0) - kFock10T0Tp2),
            1e-13);
  const cplx f100 = decoherence_factor_fock_closed(kFigureParams, 100, 10.0, 12.0);
  EXPECT_LE(std::abs(f100 - kFock100T10Tp12), 1e-30);
  EXPECT_LE(std::abs(f100 - decoherence_factor_fock_quadrature(kFigureParams, 100, 10.0, 12.0, {128, 64})),
            1e-6);
  expect_code(ErrorCode::NegativeTime,
              [] { decoherence_factor_fock_closed(kFigureParams, 3, 1.0, -2.0); });
}

TEST(FockClosed, Deterministic) {
  const cplx a = decoherence_factor_fock_closed(kFigureParams, 12345, 1.5, 1.52);
  const cplx b = decoherence_factor_fock_closed(kFigureParams, 12345, 1.5, 1.52);
  EXPECT_EQ(a, b);
}

TEST(FockClosed, AgreesWithQuadratureProperty) {
  testing::Draws draws(43);
  for (int i = 0; i < 60; ++i) {
    const ModelParams p = draws.params();
    const auto n = draws.integer(0, 40);
    const double t = draws.uniform(0, 10), tp = draws.uniform(0, 10);
    const cplx closed = decoherence_factor_fock_closed(p, n, t, tp);
    EXPECT_LE(std::abs(closed - decoherence_factor_fock_quadrature(p, n, t, tp, default_quadrature(n))),
              1e-6);
    EXPECT_LE(std::abs(closed), 1.0 + 1e-12);
  }
}

TEST(G2Interacting, Examples) {
  EXPECT_DOUBLE_EQ(g2_interacting(1.0, 2.0, 2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(g2_interacting(0.0, 0.0, 5.0, 1.0), 0.5);
  EXPECT_NEAR(g2_interacting(1.0, 0.0, std::numbers::pi, 1.0), 0.0, 1e-15);
  expect_code(ErrorCode::UnphysicalFactor, [] { g2_interacting(cplx(1.0, 0.01), 0.0, 1.0, 1.0); });
}

TEST(G2Interacting, EqualCouplingReproducesFreeFringe) {
  testing::Draws draws(47);
  for (int i = 0; i < 200; ++i) {
    ModelParams p = draws.params();
    p.d_g = p.d_e;
    const double t = draws.uniform(0, 10), tp = draws.uniform(0, 10);
    const ApparatusState state =
        i % 2 ? ApparatusState{FockState{draws.integer(0, 1000)}}
              : ApparatusState{CoherentState{0.0, draws.amplitude(30.0)}};
    const double g = g2_interacting(decoherence_factor(p, state, t, tp), t, tp, p.omega_e);
    EXPECT_NEAR(g, g2_free(kHalf, kHalf, p.omega_e, 0.0, t, tp), 1e-9);
  }
}

TEST(G2Interacting, BoundsProperty) {
  testing::Draws draws(53);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = draws.params();
    const double t = draws.uniform(0, 10), tp = draws.uniform(0, 10);
    const ApparatusState state =
        i % 2 ? ApparatusState{FockState{draws.integer(0, 100000)}}
              : ApparatusState{CoherentState{draws.amplitude(2.0), draws.amplitude(100.0)}};
    const cplx f = decoherence_factor(p, state, t, tp);
    const CorrelationPoint point{t, tp - t, f, g2_interacting(f, t, tp, p.omega_e)};
    EXPECT_TRUE(within_physical_bounds(point));
  }
}

TEST(DecoherenceTime, NotReachedWithoutWhichPathRecord) {
  ModelParams p = kFigureParams;
  p.d_g = p.d_e;
  EXPECT_FALSE(decoherence_time(p, FockState{100}, 0.0).has_value());
  EXPECT_FALSE(decoherence_time(p, coherent_with_mean_number(100.0), 3.0).has_value());
}

TEST(DecoherenceTime, ShrinksWithParticleNumber) {
  const auto small = decoherence_time(kFigureParams, coherent_with_mean_number(10.0), 0.0);
  const auto medium = decoherence_time(kFigureParams, coherent_with_mean_number(100.0), 0.0);
  const auto large = decoherence_time(kFigureParams, coherent_with_mean_number(10000.0), 0.0);
  ASSERT_TRUE(small && medium && large);
  EXPECT_LT(*large, *medium);
  EXPECT_LT(*medium, *small);
}

TEST(DecoherenceTime, CrossesThresholdAtReturnedValue) {
  for (double t : {0.0, 10.0}) {
    const ApparatusState state = FockState{100};
    const auto tau = decoherence_time(kFigureParams, state, t);
    ASSERT_TRUE(tau.has_value());
    const double threshold = std::exp(-1.0);
    EXPECT_LT(std::abs(decoherence_factor(kFigureParams, state, t, t + *tau)), threshold);
    EXPECT_GE(std::abs(decoherence_factor(kFigureParams, state, t, t + *tau - 1e-4)), threshold);
    // No earlier crossing on a fine grid.
    for (double x = 1e-4; x < *tau - 1e-4; x += 1e-4) {
      ASSERT_GE(std::abs(decoherence_factor(kFigureParams, state, t, t + x)), threshold) << x;
    }
  }
}

TEST(DecoherenceTime, IndependentOfReferenceTimeForCoherentState) {
  const auto a = decoherence_time(kFigureParams, coherent_with_mean_number(10.0), 0.0);
  const auto b = decoherence_time(kFigureParams, coherent_with_mean_number(10.0), 10.0);
  ASSERT_TRUE(a && b);
  EXPECT_LE(std::abs(*b - *a) / *a, 0.25);
}

TEST(DecoherenceTime, RejectsBadThreshold) {
  expect_code(ErrorCode::InvalidArgument,
              [] { decoherence_time(kFigureParams, FockState{10}, 0.0, {1.5}); });
  expect_code(ErrorCode::InvalidArgument,
              [] { decoherence_time(kFigureParams, FockState{10}, 0.0, {0.0}); });
}

}  // namespace
}  // namespace soqd
