#include "soqd/laguerre.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "soqd/error.hpp"

namespace soqd {

namespace {

// L_n(x) and L_{n-1}(x) by the three-term recurrence, sharing a common
// scale factor exp(log_scale) so that large x does not overflow.
struct ScaledLaguerre {
  double ln = 0.0;
  double ln_minus_1 = 0.0;
  double log_scale = 0.0;
};

ScaledLaguerre laguerre_pair(std::size_t n, double x) {
  constexpr double kRescale = 1e150;
  double p_prev = 1.0;  // L_0
  double p = 1.0 - x;   // L_1
  double log_scale = 0.0;
  if (n == 1) return {p, p_prev, 0.0};
  for (std::size_t k = 1; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double p_next = ((2.0 * kd + 1.0 - x) * p - kd * p_prev) / (kd + 1.0);
    p_prev = p;
    p = p_next;
    if (std::abs(p) > kRescale) {
      p /= kRescale;
      p_prev /= kRescale;
      log_scale += std::log(kRescale);
    }
  }
  return {p, p_prev, log_scale};
}

}  // namespace

GaussLaguerreRule gauss_laguerre(std::size_t order) {
  if (order == 0) {
    throw Error(ErrorCode::InsufficientOrder, "Gauss-Laguerre order must be positive");
  }
  const auto n = static_cast<Eigen::Index>(order);

  // Jacobi matrix of the Laguerre recurrence: diagonal 2k+1, off-diagonal k.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index k = 0; k < n; ++k) diag(k) = 2.0 * static_cast<double>(k) + 1.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) sub(k) = static_cast<double>(k + 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, fmt::format("Laguerre Jacobi matrix, order {}", order));
  }

  GaussLaguerreRule rule;
  rule.nodes.resize(order);
  rule.log_weights.resize(order);
  const double nd = static_cast<double>(order);
  for (std::size_t i = 0; i < order; ++i) {
    double x = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    ScaledLaguerre p;
    for (int iter = 0; iter < 8; ++iter) {
      p = laguerre_pair(order, x);
      // L_n'(x) = n (L_n - L_{n-1}) / x; the common scale cancels in the ratio.
      const double derivative = nd * (p.ln - p.ln_minus_1) / x;
      const double dx = p.ln / derivative;
      x -= dx;
      if (std::abs(dx) <= 4.0 * std::numeric_limits<double>::epsilon() * x) break;
    }
    p = laguerre_pair(order, x);
    rule.nodes[i] = x;
    rule.log_weights[i] =
        std::log(x) - 2.0 * (std::log(nd) + std::log(std::abs(p.ln_minus_1)) + p.log_scale);
  }
  return rule;
}

}  // namespace soqd
