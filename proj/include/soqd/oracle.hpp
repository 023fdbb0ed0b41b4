#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include <Eigen/Dense>

#include "soqd/model.hpp"

namespace soqd {

// Brute-force evaluation of the decoherence factor in the truncated Fock
// space. Every step Hamiltonian conserves the apparatus number n1 + n2, so
// each sector is handled exactly and independently.
//
// Basis of sector n: index k = number of quanta in mode 1, i.e. |k, n-k>,
// k = 0..n. The |0, n> preparation is always index 0. Note this is the
// reverse of the (mode 1, mode 2) ordering of ModeTransform: in sector 1,
// entry (0,0) corresponds to m22.

struct SectorMatrix {
  std::uint64_t sector = 0;
  Eigen::MatrixXcd entries;
};

/// Largest sector the oracle will build.
inline constexpr std::uint64_t kMaxOracleSector = 512;

/// Sector block of V(m, n_sys): diagonal w1 k + w2 (n - k), off-diagonals
/// g sqrt((k+1)(n-k)) with g = d_e m + d_g n_sys.
SectorMatrix sector_hamiltonian(const ModelParams& params, int m, int n_sys,
                                std::uint64_t sector);

/// exp(-i H duration) via Hermitian eigendecomposition.
/// Throws Error(EigenFailure) if the eigensolver does not converge.
SectorMatrix sector_propagator(const SectorMatrix& h, double duration);

/// <0,n| e^{iV(1,1)t} e^{-iV(0,1)t} e^{iV(0,1)t'} e^{-iV(1,0)t'} e^{iV(1,0)t} e^{-iV(1,1)t} |0,n>.
/// Throws SectorTooLarge for n > kMaxOracleSector, NegativeTime for t or t' < 0.
cplx decoherence_factor_oracle_fock(const ModelParams& params, std::uint64_t n, double t,
                                    double t_prime);

struct OracleCoherentResult {
  cplx value;
  double tail_bound = 0.0;  ///< Poisson mass beyond the cutoff; bounds |error| since |F_n| <= 1
};

/// Poisson mixture  sum_{n <= cutoff} e^{-|b|^2} |b|^{2n}/n! F_oracle(n)  for the |0, beta0>
/// preparation. Sectors do not interfere because the evolution conserves number.
/// Throws CutoffTooSmall if cutoff < 10 |beta0|^2 and SectorTooLarge past kMaxOracleSector.
OracleCoherentResult decoherence_factor_oracle_coherent(const ModelParams& params, cplx beta0,
                                                        double t, double t_prime,
                                                        std::uint64_t cutoff);

/// Eigendecompositions of V(1,1), V(1,0), V(0,1) for a set of sectors,
/// built once and reused across many (t, t') evaluations. Immutable after
/// construction, so concurrent calls are safe.
class SectorOracle {
 public:
  /// Sectors 0..max_sector.
  static SectorOracle up_to(const ModelParams& params, std::uint64_t max_sector);
  /// The single sector n.
  static SectorOracle single(const ModelParams& params, std::uint64_t n);

  cplx fock(std::uint64_t n, double t, double t_prime) const;
  OracleCoherentResult coherent(cplx beta0, double t, double t_prime, std::uint64_t cutoff) const;

  const ModelParams& params() const { return params_; }

 private:
  struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  struct Sector {
    Eigensystem both;     // V(1,1)
    Eigensystem excited;  // V(1,0)
    Eigensystem ground;   // V(0,1)
  };

  explicit SectorOracle(const ModelParams& params) : params_(params) {}
  void add_sector(std::uint64_t n);
  const Sector& sector(std::uint64_t n) const;

  ModelParams params_;
  std::map<std::uint64_t, Sector> sectors_;
};

}  // namespace soqd
