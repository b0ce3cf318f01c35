#pragma once

// Shared fixtures for the test suite: a seeded random-instance generator
// (thermal Hamiltonian + layered circuit + parameter vector) and the
// single-qubit analytic fixture with its hand-derived values.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <qig/qig.hpp>

namespace testutil {

inline double uniform_in(qig::ShotRng& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

/// Random non-identity Pauli word.
inline qig::PauliString random_word(qig::ShotRng& rng, int n_qubits) {
  static const char letters[4] = {'I', 'X', 'Y', 'Z'};
  std::string w;
  do {
    w.clear();
    for (int q = 0; q < n_qubits; ++q) {
      w.push_back(letters[rng.next_u64() % 4]);
    }
  } while (w.find_first_not_of('I') == std::string::npos);
  return qig::PauliString(w);
}

inline qig::PauliSum random_hamiltonian(qig::ShotRng& rng, int n_qubits, int n_terms,
                                        double coeff_lo, double coeff_hi) {
  qig::PauliSum g(n_qubits);
  for (int k = 0; k < n_terms; ++k) {
    double c = 0.0;
    while (std::abs(c) < 0.05) c = uniform_in(rng, coeff_lo, coeff_hi);
    g.add_term(c, random_word(rng, n_qubits));
  }
  return g;
}

inline qig::ComplexMatrix random_unitary(qig::ShotRng& rng, Eigen::Index dim) {
  qig::ComplexMatrix h(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      h(r, c) = qig::Complex(uniform_in(rng, -1.0, 1.0), uniform_in(rng, -1.0, 1.0));
    }
  }
  qig::ComplexMatrix herm = (h + h.adjoint()) / 2.0;
  return qig::evolution_unitary(qig::eigendecompose(herm), 1.0);
}

struct TestInstance {
  qig::PauliSum g;
  qig::Circuit circuit;
  std::vector<double> phi;
  qig::ThermalState state;
};

/// Seeded instance: 1..max_qubits qubits, 1..max_layers layers, multi-term G
/// with coefficients in [-2, 2], single-Pauli unit-coefficient layer
/// generators (so every instance is also shot-estimator compatible), and a
/// random mix of identity and generic fixed gates.
inline TestInstance random_instance(std::uint64_t seed, int max_qubits = 3,
                                    int max_layers = 4) {
  qig::ShotRng rng(seed);
  const int n = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_qubits));
  const int layers =
      1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_layers));
  const int g_terms = 1 + static_cast<int>(rng.next_u64() % 3);
  qig::PauliSum g = random_hamiltonian(rng, n, g_terms, -2.0, 2.0);

  const Eigen::Index d = Eigen::Index(1) << n;
  std::vector<std::pair<qig::PauliSum, qig::ComplexMatrix>> layer_spec;
  for (int j = 0; j < layers; ++j) {
    qig::PauliSum h(n);
    h.add_term(1.0, random_word(rng, n));
    qig::ComplexMatrix gate = (rng.next_u64() % 2) ? random_unitary(rng, d)
                                                   : qig::ComplexMatrix::Identity(d, d);
    layer_spec.emplace_back(std::move(h), std::move(gate));
  }
  qig::Circuit circuit(n, std::move(layer_spec));

  std::vector<double> phi;
  for (int j = 0; j < layers; ++j) phi.push_back(uniform_in(rng, -1.5, 1.5));
  qig::ThermalState state = qig::prepare_thermal(g);
  return TestInstance{std::move(g), std::move(circuit), std::move(phi), std::move(state)};
}

// Single-qubit fixture: G = Z thermal state, one layer generated by X with an
// identity fixed gate. All three information matrices are 1x1 constants
// independent of the parameter:
//   FB = 4 tanh^2(1), WY = 8 tanh^2(1) / (1 + sech 1), KM = 4 tanh(1),
// and Tr[Z rho(0)] = -tanh(1).
inline constexpr double kFixtureFb = 2.3201026335438955;
inline constexpr double kFixtureWy = 2.8155658106889163;
inline constexpr double kFixtureKm = 3.0463766238230594;
inline constexpr double kFixtureCost = -0.7615941559557649;

// Time-sampling density at t = 1: (2/pi) ln coth(pi/2).
inline constexpr double kTentAtOne = 0.05505595798253517;

inline TestInstance fixture(double phi_value = 0.3) {
  qig::PauliSum g(1);
  g.add_term(1.0, qig::PauliString("Z"));
  qig::PauliSum h(1);
  h.add_term(1.0, qig::PauliString("X"));
  std::vector<std::pair<qig::PauliSum, qig::ComplexMatrix>> layer_spec;
  layer_spec.emplace_back(h, qig::ComplexMatrix::Identity(2, 2));
  qig::Circuit circuit(1, std::move(layer_spec));
  qig::ThermalState state = qig::prepare_thermal(g);
  return TestInstance{std::move(g), std::move(circuit), {phi_value}, std::move(state)};
}

inline qig::PauliSum pauli_z_observable() {
  qig::PauliSum o(1);
  o.add_term(1.0, qig::PauliString("Z"));
  return o;
}

}  // namespace testutil
