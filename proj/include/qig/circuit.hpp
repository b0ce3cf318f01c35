#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qig/linalg.hpp"
#include "qig/pauli.hpp"

namespace qig {

/// One circuit layer U_j(phi_j) = exp(-i phi_j H_j) V_j with Hermitian
/// generator H_j and a fixed unitary V_j.
struct Layer {
  PauliSum generator;
  ComplexMatrix fixed_gate;
  EigenSystem generator_eigen;  // cached spectral data of H_j
};

/// Layered circuit U(phi) = U_J(phi_J) ... U_1(phi_1); layer 1 acts first.
class Circuit {
 public:
  Circuit(int n_qubits, std::vector<std::pair<PauliSum, ComplexMatrix>> layers)
      : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("Circuit needs n_qubits >= 1");
    if (layers.empty()) throw std::invalid_argument("Circuit needs at least one layer");
    const Eigen::Index d = dim();
    estimator_compatible_ = true;
    for (std::size_t j = 0; j < layers.size(); ++j) {
      auto& [gen, gate] = layers[j];
      const std::string at = "layer " + std::to_string(j + 1);
      if (gen.n_qubits() != n_qubits) {
        throw std::invalid_argument(at + ": generator acts on " +
                                    std::to_string(gen.n_qubits()) + " qubits, circuit has " +
                                    std::to_string(n_qubits));
      }
      if (gate.rows() != d || gate.cols() != d) {
        throw std::invalid_argument(at + ": fixed gate dimension mismatch");
      }
      if (!is_unitary(gate)) {
        throw std::invalid_argument(at + ": fixed gate is not unitary within 1e-10");
      }
      // Shot estimation needs controlled-H_j, so H_j itself must be a
      // Hermitian unitary: a single Pauli string with coefficient +-1.
      if (gen.terms().size() != 1 || std::abs(gen.terms()[0].coeff) != 1.0) {
        estimator_compatible_ = false;
      }
      layers_.push_back(Layer{gen, std::move(gate), eigendecompose(gen.to_matrix())});
    }
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_qubits_; }
  int n_layers() const { return static_cast<int>(layers_.size()); }
  const Layer& layer(int j) const { return layers_.at(j - 1); }  // 1-based
  bool estimator_compatible() const { return estimator_compatible_; }

 private:
  int n_qubits_;
  std::vector<Layer> layers_;
  bool estimator_compatible_;
};

inline void check_parameters(const Circuit& c, const std::vector<double>& phi) {
  if (static_cast<int>(phi.size()) != c.n_layers()) {
    throw std::invalid_argument("parameter vector length " + std::to_string(phi.size()) +
                                " does not match layer count " +
                                std::to_string(c.n_layers()));
  }
}

inline double parameter_one_norm(const std::vector<double>& phi) {
  double s = 0;
  for (double v : phi) s += std::abs(v);
  return s;
}

inline ComplexMatrix layer_unitary(const Layer& layer, double phi_j) {
  return evolution_unitary(layer.generator_eigen, phi_j) * layer.fixed_gate;
}

/// U_{R_j} = U_j ... U_1 for j in [1, J].
inline ComplexMatrix partial_right(const Circuit& c, const std::vector<double>& phi, int j) {
  check_parameters(c, phi);
  if (j < 1 || j > c.n_layers()) {
    throw std::invalid_argument("partial_right: layer index " + std::to_string(j) +
                                " outside [1, " + std::to_string(c.n_layers()) + "]");
  }
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int m = 1; m <= j; ++m) u = layer_unitary(c.layer(m), phi[m - 1]) * u;
  return u;
}

/// U_{L_j} = U_J ... U_j for j in [1, J+1]; j = J+1 gives the identity.
inline ComplexMatrix partial_left(const Circuit& c, const std::vector<double>& phi, int j) {
  check_parameters(c, phi);
  if (j < 1 || j > c.n_layers() + 1) {
    throw std::invalid_argument("partial_left: layer index " + std::to_string(j) +
                                " outside [1, " + std::to_string(c.n_layers() + 1) + "]");
  }
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int m = j; m <= c.n_layers(); ++m) u = layer_unitary(c.layer(m), phi[m - 1]) * u;
  return u;
}

inline ComplexMatrix full_unitary(const Circuit& c, const std::vector<double>& phi) {
  check_parameters(c, phi);
  ComplexMatrix u = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int m = 1; m <= c.n_layers(); ++m) u = layer_unitary(c.layer(m), phi[m - 1]) * u;
  return u;
}

/// Heisenberg generator A_j = U_{R_j}^dag H_j U_{R_j}. Unitary conjugation
/// preserves the spectrum of H_j.
inline ComplexMatrix heisenberg_generator(const Circuit& c, const std::vector<double>& phi,
                                          int j) {
  ComplexMatrix ur = partial_right(c, phi, j);
  return ur.adjoint() * c.layer(j).generator.to_matrix() * ur;
}

/// All A_j at once via one sweep of prefix products U_{R_j} = U_j U_{R_{j-1}}.
inline std::vector<ComplexMatrix> all_heisenberg_generators(const Circuit& c,
                                                            const std::vector<double>& phi) {
  check_parameters(c, phi);
  std::vector<ComplexMatrix> out;
  out.reserve(c.n_layers());
  ComplexMatrix ur = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int j = 1; j <= c.n_layers(); ++j) {
    ur = layer_unitary(c.layer(j), phi[j - 1]) * ur;
    out.push_back(ur.adjoint() * c.layer(j).generator.to_matrix() * ur);
  }
  return out;
}

/// rho(phi) = U(phi) rho U(phi)^dag.
inline ComplexMatrix evolve(const Circuit& c, const std::vector<double>& phi,
                            const ComplexMatrix& rho) {
  ComplexMatrix u = full_unitary(c, phi);
  return u * rho * u.adjoint();
}

/// d rho(phi) / d phi_j = i [rho(phi), U_{L_{j+1}} H_j U_{L_{j+1}}^dag].
inline ComplexMatrix state_gradient(const Circuit& c, const std::vector<double>& phi,
                                    const ComplexMatrix& rho, int j) {
  if (j < 1 || j > c.n_layers()) {
    throw std::invalid_argument("state_gradient: layer index out of range");
  }
  ComplexMatrix ul = partial_left(c, phi, j + 1);
  ComplexMatrix lifted = ul * c.layer(j).generator.to_matrix() * ul.adjoint();
  return Complex(0, 1) * commutator(evolve(c, phi, rho), lifted);
}

}  // namespace qig
