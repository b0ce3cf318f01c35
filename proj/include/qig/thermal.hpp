#pragma once

#include <cmath>

#include "qig/errors.hpp"
#include "qig/linalg.hpp"
#include "qig/pauli.hpp"

namespace qig {

/// rho = exp(-G)/Z with Z = Tr[exp(-G)], together with the spectral data of
/// the generating Hamiltonian G that every exact path reuses:
/// G = W diag(mu) W^dag, lambda_k = exp(-mu_k)/Z (descending since mu is
/// ascending), sqrt_rho = W diag(sqrt(lambda)) W^dag.
struct ThermalState {
  PauliSum hamiltonian;
  ComplexMatrix g_matrix;
  EigenSystem g_eigen;
  double partition = 0;
  double log_partition = 0;
  RealVector lambdas;
  ComplexMatrix rho;
  ComplexMatrix sqrt_rho;

  Eigen::Index dim() const { return rho.rows(); }
};

inline ThermalState prepare_thermal(const PauliSum& g) {
  ThermalState st{g, g.to_matrix(), {}, 0, 0, {}, {}, {}};
  st.g_eigen = eigendecompose(st.g_matrix);
  const RealVector& mu = st.g_eigen.eigenvalues;
  // Shift by the smallest eigenvalue so the exponentials cannot overflow.
  const double mu_min = mu.minCoeff();
  RealVector shifted = (-(mu.array() - mu_min)).exp();
  const double norm = shifted.sum();
  st.log_partition = std::log(norm) - mu_min;
  if (!std::isfinite(st.log_partition)) {
    throw NumericalError("prepare_thermal: partition function is not representable");
  }
  // The linear-scale value is informational and may overflow to +inf for
  // extreme spectra; every downstream quantity uses the shifted form above.
  st.partition = std::exp(st.log_partition);
  st.lambdas = shifted / norm;
  for (Eigen::Index k = 0; k < st.lambdas.size(); ++k) {
    st.lambdas(k) = std::max(st.lambdas(k), 1e-300);
  }
  const ComplexMatrix& w = st.g_eigen.eigenvectors;
  st.rho = w * st.lambdas.asDiagonal() * w.adjoint();
  st.sqrt_rho = w * st.lambdas.cwiseSqrt().asDiagonal() * w.adjoint();
  return st;
}

/// Canonical purification (sqrt(rho) (x) I) |Gamma>, |Gamma> = sum_k |k>|k>
/// unnormalized. With row-major composite index (a, b) -> a*d + b the
/// amplitude at (a, b) is simply sqrt(rho)_{ab}, so the vector is unit norm
/// and its partial trace over the second register is rho.
struct PurifiedState {
  ComplexVector amplitudes;
  Eigen::Index system_dim = 0;
};

inline PurifiedState purification_from_sqrt(const ComplexMatrix& sqrt_rho) {
  const Eigen::Index d = sqrt_rho.rows();
  PurifiedState psi{ComplexVector(d * d), d};
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) psi.amplitudes(a * d + b) = sqrt_rho(a, b);
  return psi;
}

inline PurifiedState canonical_purification(const ComplexMatrix& rho) {
  return purification_from_sqrt(matrix_sqrt_psd(rho));
}

/// Partial trace over the second register of |psi><psi|.
inline ComplexMatrix purified_reduced_state(const PurifiedState& psi) {
  const Eigen::Index d = psi.system_dim;
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index a2 = 0; a2 < d; ++a2)
      for (Eigen::Index b = 0; b < d; ++b)
        out(a, a2) += psi.amplitudes(a * d + b) * std::conj(psi.amplitudes(a2 * d + b));
  return out;
}

}  // namespace qig
