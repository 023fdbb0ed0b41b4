#include "soqd/oracle.hpp"

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

#include "soqd/error.hpp"

namespace soqd {

namespace {

constexpr cplx kI{0.0, 1.0};

void check_sector(std::uint64_t n) {
  if (n > kMaxOracleSector) {
    throw Error(ErrorCode::SectorTooLarge,
                fmt::format("sector {} exceeds the oracle limit {}", n, kMaxOracleSector));
  }
}

// Real tridiagonal form of V(m, n_sys) in sector n.
void tridiagonal(const ModelParams& params, double coupling, std::uint64_t n,
                 Eigen::VectorXd& diag, Eigen::VectorXd& off) {
  const auto size = static_cast<Eigen::Index>(n + 1);
  diag.resize(size);
  off.resize(size - 1);
  const double nd = static_cast<double>(n);
  for (Eigen::Index k = 0; k < size; ++k) {
    const double kd = static_cast<double>(k);
    diag(k) = params.omega1 * kd + params.omega2 * (nd - kd);
    if (k + 1 < size) off(k) = coupling * std::sqrt((kd + 1.0) * (nd - kd));
  }
}

}  // namespace

SectorMatrix sector_hamiltonian(const ModelParams& params, int m, int n_sys,
                                std::uint64_t sector) {
  Eigen::VectorXd diag;
  Eigen::VectorXd off;
  tridiagonal(params, params.d_e * m + params.d_g * n_sys, sector, diag, off);

  const auto size = diag.size();
  SectorMatrix h{sector, Eigen::MatrixXcd::Zero(size, size)};
  h.entries.diagonal() = diag.cast<cplx>();
  for (Eigen::Index k = 0; k + 1 < size; ++k) {
    h.entries(k + 1, k) = off(k);
    h.entries(k, k + 1) = off(k);
  }
  return h;
}

SectorMatrix sector_propagator(const SectorMatrix& h, double duration) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.entries);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::EigenFailure, fmt::format("sector {}", h.sector));
  }
  const Eigen::VectorXcd phases =
      (-kI * duration * solver.eigenvalues().cast<cplx>()).array().exp().matrix();
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  return {h.sector, v * phases.asDiagonal() * v.adjoint()};
}

SectorOracle SectorOracle::up_to(const ModelParams& params, std::uint64_t max_sector) {
  check_sector(max_sector);
  SectorOracle oracle(validate(params));
  for (std::uint64_t n = 0; n <= max_sector; ++n) oracle.add_sector(n);
  return oracle;
}

SectorOracle SectorOracle::single(const ModelParams& params, std::uint64_t n) {
  check_sector(n);
  SectorOracle oracle(validate(params));
  oracle.add_sector(n);
  return oracle;
}

void SectorOracle::add_sector(std::uint64_t n) {
  const auto solve = [&](double coupling) {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
    tridiagonal(params_, coupling, n, diag, off);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::EigenFailure, fmt::format("sector {}", n));
    }
    return Eigensystem{solver.eigenvalues(), solver.eigenvectors()};
  };
  sectors_.emplace(n, Sector{solve(params_.d_e + params_.d_g), solve(params_.d_e),
                             solve(params_.d_g)});
}

const SectorOracle::Sector& SectorOracle::sector(std::uint64_t n) const {
  const auto it = sectors_.find(n);
  if (it == sectors_.end()) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("sector {} was not prepared", n));
  }
  return it->second;
}

cplx SectorOracle::fock(std::uint64_t n, double t, double t_prime) const {
  if (!(t >= 0.0) || !(t_prime >= 0.0)) {
    throw Error(ErrorCode::NegativeTime, fmt::format("t = {}, t' = {}", t, t_prime));
  }
  const Sector& s = sector(n);

  // psi <- exp(-i sign H duration) psi using H = V diag(lambda) V^T.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n + 1));
  psi(0) = 1.0;
  const auto evolve = [&psi](const Eigensystem& e, double sign, double duration) {
    Eigen::VectorXcd coeffs = e.vectors.transpose().cast<cplx>() * psi;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
      coeffs(k) *= std::exp(-kI * (sign * e.values(k) * duration));
    }
    psi = e.vectors.cast<cplx>() * coeffs;
  };

  // Rightmost factor first.
  evolve(s.both, +1.0, t);
  evolve(s.excited, -1.0, t);
  evolve(s.excited, +1.0, t_prime);
  evolve(s.ground, -1.0, t_prime);
  evolve(s.ground, +1.0, t);
  evolve(s.both, -1.0, t);
  return psi(0);
}

OracleCoherentResult SectorOracle::coherent(cplx beta0, double t, double t_prime,
                                            std::uint64_t cutoff) const {
  const double mean = std::norm(beta0);
  if (static_cast<double>(cutoff) < 10.0 * mean) {
    throw Error(ErrorCode::CutoffTooSmall,
                fmt::format("cutoff {} < 10 |beta0|^2 = {}", cutoff, 10.0 * mean));
  }
  cplx sum{0.0, 0.0};
  for (std::uint64_t n = 0; n <= cutoff; ++n) {
    const double nd = static_cast<double>(n);
    const double log_weight =
        n == 0 ? -mean : -mean + nd * std::log(mean) - std::lgamma(nd + 1.0);
    sum += std::exp(log_weight) * fock(n, t, t_prime);
  }
  // P(X > cutoff) for X ~ Poisson(mean) is the lower regularized gamma P(cutoff + 1, mean).
  const double tail =
      mean == 0.0 ? 0.0 : boost::math::gamma_p(static_cast<double>(cutoff) + 1.0, mean);
  return {sum, tail};
}

cplx decoherence_factor_oracle_fock(const ModelParams& params, std::uint64_t n, double t,
                                    double t_prime) {
  return SectorOracle::single(params, n).fock(n, t, t_prime);
}

OracleCoherentResult decoherence_factor_oracle_coherent(const ModelParams& params, cplx beta0,
                                                        double t, double t_prime,
                                                        std::uint64_t cutoff) {
  if (static_cast<double>(cutoff) < 10.0 * std::norm(beta0)) {
    throw Error(ErrorCode::CutoffTooSmall,
                fmt::format("cutoff {} < 10 |beta0|^2 = {}", cutoff, 10.0 * std::norm(beta0)));
  }
  return SectorOracle::up_to(params, cutoff).coherent(beta0, t, t_prime, cutoff);
}

}  // namespace soqd
