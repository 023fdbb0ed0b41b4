#pragma once

#include <cstddef>
#include <vector>

namespace soqd {

/// n-point Gauss-Laguerre rule for  \int_0^inf e^{-x} f(x) dx ~= sum_i w_i f(x_i).
///
/// Weights are kept as logarithms: for the orders used here (up to a few
/// hundred) the outer weights fall far below the smallest double, while the
/// integrands they multiply are correspondingly huge.
struct GaussLaguerreRule {
  std::vector<double> nodes;
  std::vector<double> log_weights;
};

/// Nodes from the eigenvalues of the Jacobi matrix, polished by Newton on
/// L_n; weights from w_i = x_i / (n L_{n-1}(x_i))^2 evaluated in log space.
GaussLaguerreRule gauss_laguerre(std::size_t order);

}  // namespace soqd
