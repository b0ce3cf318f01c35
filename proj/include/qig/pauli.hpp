#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qig {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace detail {

inline const ComplexMatrix& pauli_matrix(char op) {
  static const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  static const ComplexMatrix x = (ComplexMatrix(2, 2) << 0, 1, 1, 0).finished();
  static const ComplexMatrix y =
      (ComplexMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const ComplexMatrix z = (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished();
  switch (op) {
    case 'I': return i2;
    case 'X': return x;
    case 'Y': return y;
    case 'Z': return z;
    default:
      throw std::invalid_argument(std::string("invalid Pauli letter '") + op +
                                  "'; expected one of I, X, Y, Z");
  }
}

}  // namespace detail

/// A word over {I, X, Y, Z}, one letter per qubit. Letter 0 is the leftmost
/// Kronecker factor (the most significant qubit of the basis index).
class PauliString {
 public:
  explicit PauliString(std::string ops) : ops_(std::move(ops)) {
    if (ops_.empty()) {
      throw std::invalid_argument("Pauli string must act on at least one qubit");
    }
    for (char c : ops_) detail::pauli_matrix(c);
  }

  int n_qubits() const { return static_cast<int>(ops_.size()); }
  const std::string& ops() const { return ops_; }
  bool is_identity() const { return ops_.find_first_not_of('I') == std::string::npos; }

  ComplexMatrix to_matrix() const {
    ComplexMatrix m = detail::pauli_matrix(ops_[0]);
    for (std::size_t q = 1; q < ops_.size(); ++q) {
      const ComplexMatrix& p = detail::pauli_matrix(ops_[q]);
      ComplexMatrix next(m.rows() * 2, m.cols() * 2);
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          next.block(2 * r, 2 * c, 2, 2) = m(r, c) * p;
      m.swap(next);
    }
    return m;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.ops_ == b.ops_;
  }

 private:
  std::string ops_;
};

struct PauliTerm {
  double coeff;
  PauliString pauli;
};

/// Real linear combination of Pauli strings on a fixed qubit count; always
/// Hermitian. The qubit count is explicit so an empty sum still has a
/// well-defined dense dimension.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("PauliSum needs n_qubits >= 1");
  }

  PauliSum(int n_qubits, std::vector<PauliTerm> terms) : PauliSum(n_qubits) {
    for (auto& t : terms) add_term(t.coeff, std::move(t.pauli));
  }

  void add_term(double coeff, PauliString pauli) {
    if (pauli.n_qubits() != n_qubits_) {
      throw std::invalid_argument(
          "Pauli string length " + std::to_string(pauli.n_qubits()) +
          " does not match operator qubit count " + std::to_string(n_qubits_));
    }
    terms_.push_back({coeff, std::move(pauli)});
  }

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Sum of |coefficients|; the Hoeffding range of the term-sampling
  /// measurement scales with this.
  double one_norm() const {
    double s = 0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
  }

  ComplexMatrix to_matrix() const {
    ComplexMatrix m = ComplexMatrix::Zero(dim(), dim());
    for (const auto& t : terms_) m += t.coeff * t.pauli.to_matrix();
    return m;
  }

 private:
  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

}  // namespace qig
