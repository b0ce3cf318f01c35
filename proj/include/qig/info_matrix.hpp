#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qig/circuit.hpp"
#include "qig/errors.hpp"
#include "qig/linalg.hpp"
#include "qig/thermal.hpp"

namespace qig {

enum class MatrixKind { FB, WY, KM };

enum class Provenance { ExactSpectral, ExactClosedForm, Estimated };

inline std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::FB: return "FB";
    case MatrixKind::WY: return "WY";
    case MatrixKind::KM: return "KM";
  }
  throw std::logic_error("unreachable");
}

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ExactSpectral: return "exact_spectral";
    case Provenance::ExactClosedForm: return "exact_closed_form";
    case Provenance::Estimated: return "estimated";
  }
  throw std::logic_error("unreachable");
}

/// Symmetric J x J information matrix of one metric kind.
struct InfoMatrix {
  MatrixKind kind;
  Provenance provenance;
  RealMatrix values;
};

/// Spectral filter f(x) = tanh(x/2) / (x/2), f(0) = 1; the Fourier transform
/// of the high-peak tent density.
inline double filter_function(double x) {
  const double a = std::abs(x);
  if (a < 1e-12) return 1.0;
  return std::tanh(x / 2.0) / (x / 2.0);
}

/// Phi(X) = integral dt p(t) e^{-iGt} X e^{iGt}: in the eigenbasis of G it
/// multiplies matrix element (k, l) by f(mu_k - mu_l).
inline ComplexMatrix phi_channel(const ThermalState& st, const ComplexMatrix& x) {
  if (x.rows() != st.dim() || x.cols() != st.dim()) {
    throw std::invalid_argument("phi_channel: dimension mismatch");
  }
  const ComplexMatrix& w = st.g_eigen.eigenvectors;
  const RealVector& mu = st.g_eigen.eigenvalues;
  ComplexMatrix xt = w.adjoint() * x * w;
  for (Eigen::Index k = 0; k < xt.rows(); ++k)
    for (Eigen::Index l = 0; l < xt.cols(); ++l)
      xt(k, l) *= filter_function(mu(k) - mu(l));
  return w * xt * w.adjoint();
}

namespace detail {

inline double spectral_weight(MatrixKind kind, double lk, double ll) {
  switch (kind) {
    case MatrixKind::FB:
      return 2.0 / (lk + ll);
    case MatrixKind::WY: {
      const double s = std::sqrt(lk) + std::sqrt(ll);
      return 4.0 / (s * s);
    }
    case MatrixKind::KM: {
      // (ln lk - ln ll)/(lk - ll) degenerates to 1/lk as ll -> lk.
      if (std::abs(lk - ll) <= 1e-10 * std::max(lk, ll)) return 2.0 / (lk + ll);
      return (std::log(lk) - std::log(ll)) / (lk - ll);
    }
  }
  throw std::logic_error("unreachable");
}

inline void check_real_residue(Complex v, const char* where) {
  if (std::abs(v.imag()) > 1e-9) {
    throw NumericalError(std::string(where) + ": imaginary residue " +
                         std::to_string(v.imag()) + " exceeds 1e-9");
  }
}

}  // namespace detail

/// Information matrix from the spectral double sum. Writing the tangent
/// matrix element as <k|d_i rho|l> = i (lambda_k - lambda_l) B^i_{kl} with
/// B^i = W^dag A_i W, every kind becomes
///   I_ij = sum_{k,l} w(lambda_k, lambda_l) (lambda_k - lambda_l)^2
///          B^i_{kl} conj(B^j_{kl}).
inline InfoMatrix spectral_info_matrix(MatrixKind kind, const Circuit& c,
                                       const std::vector<double>& phi,
                                       const ThermalState& st) {
  const int nl = c.n_layers();
  const ComplexMatrix& w = st.g_eigen.eigenvectors;
  std::vector<ComplexMatrix> b;
  b.reserve(nl);
  for (const ComplexMatrix& a : all_heisenberg_generators(c, phi)) {
    b.push_back(w.adjoint() * a * w);
  }
  const RealVector& lam = st.lambdas;
  const Eigen::Index d = lam.size();
  RealMatrix values = RealMatrix::Zero(nl, nl);
  for (int i = 0; i < nl; ++i) {
    for (int j = i; j < nl; ++j) {
      Complex sum = 0;
      for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index l = 0; l < d; ++l) {
          const double diff = lam(k) - lam(l);
          if (diff == 0.0 && k != l) continue;  // degenerate pair contributes 0
          const double wgt = detail::spectral_weight(kind, lam(k), lam(l));
          sum += wgt * diff * diff * b[i](k, l) * std::conj(b[j](k, l));
        }
      }
      detail::check_real_residue(sum, "spectral_info_matrix");
      values(i, j) = sum.real();
      values(j, i) = sum.real();
    }
  }
  return InfoMatrix{kind, Provenance::ExactSpectral, values};
}

namespace detail {

inline void check_symmetry(RealMatrix& m, const char* where) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw NumericalError(std::string(where) + ": asymmetry exceeds 1e-8");
  }
  m = ((m + m.transpose()) / 2.0).eval();
}

}  // namespace detail

/// I^FB_ij = < [[A_j, G], Phi(A_i)] >_rho.
inline InfoMatrix closed_form_fb(const Circuit& c, const std::vector<double>& phi,
                                 const ThermalState& st) {
  const int nl = c.n_layers();
  std::vector<ComplexMatrix> a = all_heisenberg_generators(c, phi);
  std::vector<ComplexMatrix> filtered;
  filtered.reserve(nl);
  for (const auto& ai : a) filtered.push_back(phi_channel(st, ai));
  RealMatrix values(nl, nl);
  for (int i = 0; i < nl; ++i) {
    for (int j = 0; j < nl; ++j) {
      Complex v =
          (commutator(commutator(a[j], st.g_matrix), filtered[i]) * st.rho).trace();
      detail::check_real_residue(v, "closed_form_fb");
      values(i, j) = v.real();
    }
  }
  detail::check_symmetry(values, "closed_form_fb");
  return InfoMatrix{MatrixKind::FB, Provenance::ExactClosedForm, values};
}

/// I^WY_ij = 4 < {A_i, A_j} >_rho - 8 Tr[A_i sqrt(rho) A_j sqrt(rho)],
/// equivalently -4 Tr[[A_i, sqrt(rho)] [A_j, sqrt(rho)]].
inline InfoMatrix closed_form_wy(const Circuit& c, const std::vector<double>& phi,
                                 const ThermalState& st) {
  const int nl = c.n_layers();
  std::vector<ComplexMatrix> a = all_heisenberg_generators(c, phi);
  RealMatrix values(nl, nl);
  for (int i = 0; i < nl; ++i) {
    for (int j = 0; j < nl; ++j) {
      Complex v = 4.0 * (anticommutator(a[i], a[j]) * st.rho).trace() -
                  8.0 * (a[i] * st.sqrt_rho * a[j] * st.sqrt_rho).trace();
      detail::check_real_residue(v, "closed_form_wy");
      values(i, j) = v.real();
    }
  }
  detail::check_symmetry(values, "closed_form_wy");
  return InfoMatrix{MatrixKind::WY, Provenance::ExactClosedForm, values};
}

/// Commutator form of the same matrix, used as an internal cross-check.
inline RealMatrix closed_form_wy_commutator(const Circuit& c,
                                            const std::vector<double>& phi,
                                            const ThermalState& st) {
  const int nl = c.n_layers();
  std::vector<ComplexMatrix> a = all_heisenberg_generators(c, phi);
  std::vector<ComplexMatrix> cm;
  cm.reserve(nl);
  for (const auto& ai : a) cm.push_back(commutator(ai, st.sqrt_rho));
  RealMatrix values(nl, nl);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) {
      Complex v = -4.0 * (cm[i] * cm[j]).trace();
      detail::check_real_residue(v, "closed_form_wy_commutator");
      values(i, j) = v.real();
    }
  detail::check_symmetry(values, "closed_form_wy_commutator");
  return values;
}

/// I^KM_ij = < [[A_j, G], A_i] >_rho.
inline InfoMatrix closed_form_km(const Circuit& c, const std::vector<double>& phi,
                                 const ThermalState& st) {
  const int nl = c.n_layers();
  std::vector<ComplexMatrix> a = all_heisenberg_generators(c, phi);
  RealMatrix values(nl, nl);
  for (int i = 0; i < nl; ++i) {
    for (int j = 0; j < nl; ++j) {
      Complex v = (commutator(commutator(a[j], st.g_matrix), a[i]) * st.rho).trace();
      detail::check_real_residue(v, "closed_form_km");
      values(i, j) = v.real();
    }
  }
  detail::check_symmetry(values, "closed_form_km");
  return InfoMatrix{MatrixKind::KM, Provenance::ExactClosedForm, values};
}

inline InfoMatrix closed_form_info_matrix(MatrixKind kind, const Circuit& c,
                                          const std::vector<double>& phi,
                                          const ThermalState& st) {
  switch (kind) {
    case MatrixKind::FB: return closed_form_fb(c, phi, st);
    case MatrixKind::WY: return closed_form_wy(c, phi, st);
    case MatrixKind::KM: return closed_form_km(c, phi, st);
  }
  throw std::logic_error("unreachable");
}

/// |psi(phi)> = (sqrt(rho(phi)) (x) I) |Gamma|, the canonical purification of
/// the evolved state; sqrt(rho(phi)) = U sqrt(rho) U^dag.
inline PurifiedState purified_state(const Circuit& c, const std::vector<double>& phi,
                                    const ThermalState& st) {
  ComplexMatrix u = full_unitary(c, phi);
  return purification_from_sqrt(u * st.sqrt_rho * u.adjoint());
}

/// |d_j psi> = i ([sqrt(rho(phi)), U_{L_{j+1}} H_j U_{L_{j+1}}^dag] (x) I) |Gamma>.
/// The purification gradient is orthogonal to the state itself.
inline ComplexVector purified_gradient(const Circuit& c, const std::vector<double>& phi,
                                       const ThermalState& st, int j) {
  if (j < 1 || j > c.n_layers()) {
    throw std::invalid_argument("purified_gradient: layer index out of range");
  }
  ComplexMatrix u = full_unitary(c, phi);
  ComplexMatrix sqrt_evolved = u * st.sqrt_rho * u.adjoint();
  ComplexMatrix ul = partial_left(c, phi, j + 1);
  ComplexMatrix lifted = ul * c.layer(j).generator.to_matrix() * ul.adjoint();
  ComplexMatrix cm = Complex(0, 1) * commutator(sqrt_evolved, lifted);
  return purification_from_sqrt(cm).amplitudes;  // vec of the commutator
}

/// Pure-state Fisher-Bures matrix of the purified family,
/// 4 Re[<d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>]; equals the WY matrix
/// of the mixed family.
inline RealMatrix purified_fb_matrix(const Circuit& c, const std::vector<double>& phi,
                                     const ThermalState& st) {
  const int nl = c.n_layers();
  ComplexVector psi = purified_state(c, phi, st).amplitudes;
  std::vector<ComplexVector> grads;
  grads.reserve(nl);
  for (int j = 1; j <= nl; ++j) grads.push_back(purified_gradient(c, phi, st, j));
  RealMatrix values(nl, nl);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) {
      Complex overlap = grads[i].dot(grads[j]);  // <d_i psi|d_j psi>
      Complex berry = grads[i].dot(psi) * psi.dot(grads[j]);
      values(i, j) = 4.0 * (overlap - berry).real();
    }
  return values;
}

}  // namespace qig
