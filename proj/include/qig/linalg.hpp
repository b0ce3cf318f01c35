#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "qig/errors.hpp"
#include "qig/pauli.hpp"

namespace qig {

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-10) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const ComplexMatrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  ComplexMatrix r = m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return r.cwiseAbs().maxCoeff() <= tol;
}

/// Eigenvalues ascending; eigenvector k is column k. The first eigenvector
/// component with magnitude above 1e-8 is phase-fixed to be real positive so
/// repeated decompositions of the same matrix are bitwise identical.
struct EigenSystem {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

inline EigenSystem eigendecompose(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigendecompose: matrix not square");
  if (!is_hermitian(m)) {
    throw std::invalid_argument("eigendecompose: input is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecompose: solver did not converge");
  }
  EigenSystem sys{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < sys.eigenvectors.cols(); ++k) {
    for (Eigen::Index r = 0; r < sys.eigenvectors.rows(); ++r) {
      Complex v = sys.eigenvectors(r, k);
      if (std::abs(v) > 1e-8) {
        sys.eigenvectors.col(k) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
  return sys;
}

/// V f(w) V^dag for a Hermitian matrix given by its eigensystem; f may
/// return real or complex values (e.g. f(w) = exp(-i w t) yields a unitary).
template <typename F>
inline ComplexMatrix matrix_function(const EigenSystem& sys, F&& f) {
  ComplexVector fw(sys.eigenvalues.size());
  for (Eigen::Index k = 0; k < fw.size(); ++k) fw(k) = Complex(f(sys.eigenvalues(k)));
  return sys.eigenvectors * fw.asDiagonal() * sys.eigenvectors.adjoint();
}

template <typename F>
inline ComplexMatrix matrix_function(const ComplexMatrix& m, F&& f) {
  return matrix_function(eigendecompose(m), std::forward<F>(f));
}

inline ComplexMatrix matrix_exp_hermitian(const ComplexMatrix& m) {
  return matrix_function(m, [](double w) { return std::exp(w); });
}

/// Principal square root of a PSD Hermitian matrix; eigenvalues slightly
/// negative from round-off are clamped to zero, genuinely negative ones are
/// a domain error.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  EigenSystem sys = eigendecompose(m);
  if (sys.eigenvalues.minCoeff() < -1e-10) {
    throw std::domain_error("matrix_sqrt_psd: matrix has a negative eigenvalue");
  }
  return matrix_function(sys, [](double w) { return std::sqrt(std::max(w, 0.0)); });
}

inline ComplexMatrix matrix_log_pd(const ComplexMatrix& m) {
  EigenSystem sys = eigendecompose(m);
  if (sys.eigenvalues.minCoeff() <= 0) {
    throw std::domain_error("matrix_log_pd: matrix has a nonpositive eigenvalue");
  }
  return matrix_function(sys, [](double w) { return std::log(w); });
}

/// exp(-i m t) from a precomputed eigensystem of Hermitian m.
inline ComplexMatrix evolution_unitary(const EigenSystem& sys, double t) {
  return matrix_function(sys, [t](double w) { return std::exp(Complex(0, -w * t)); });
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

inline ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace qig
