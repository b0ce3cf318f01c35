#include <catch2/catch_amalgamated.hpp>

#include <qig/pauli.hpp>

using qig::Complex;
using qig::ComplexMatrix;
using qig::PauliString;
using qig::PauliSum;

TEST_CASE("single-letter matrices") {
  const ComplexMatrix x = PauliString("X").to_matrix();
  const ComplexMatrix y = PauliString("Y").to_matrix();
  const ComplexMatrix z = PauliString("Z").to_matrix();
  const ComplexMatrix id = PauliString("I").to_matrix();
  CHECK(x(0, 1) == Complex(1, 0));
  CHECK(x(0, 0) == Complex(0, 0));
  CHECK(y(0, 1) == Complex(0, -1));
  CHECK(y(1, 0) == Complex(0, 1));
  CHECK(z(0, 0) == Complex(1, 0));
  CHECK(z(1, 1) == Complex(-1, 0));
  CHECK(id.isIdentity(0.0));
  CHECK((x * x).isIdentity(1e-15));
  CHECK((y * y).isIdentity(1e-15));
}

TEST_CASE("word matrices use letter 0 as the leftmost tensor factor") {
  const ComplexMatrix xz = PauliString("XZ").to_matrix();
  REQUIRE(xz.rows() == 4);
  // kron(X, Z): top-right 2x2 block is Z.
  CHECK(xz(0, 2) == Complex(1, 0));
  CHECK(xz(1, 3) == Complex(-1, 0));
  CHECK(xz(0, 0) == Complex(0, 0));
  const ComplexMatrix zx = PauliString("ZX").to_matrix();
  CHECK(zx(0, 1) == Complex(1, 0));
  CHECK(zx(2, 3) == Complex(-1, 0));
  CHECK(!(xz - zx).isZero(1e-12));
}

TEST_CASE("word validation") {
  CHECK_THROWS_AS(PauliString(""), std::invalid_argument);
  CHECK_THROWS_AS(PauliString("XA"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString("xz"), std::invalid_argument);
  CHECK(PauliString("II").is_identity());
  CHECK(!PauliString("IZ").is_identity());
}

TEST_CASE("sum validation and one-norm") {
  PauliSum g(2);
  CHECK(g.empty());
  CHECK(g.one_norm() == 0.0);
  CHECK_THROWS_AS(g.add_term(1.0, PauliString("X")), std::invalid_argument);
  g.add_term(0.75, PauliString("ZI"));
  g.add_term(-0.25, PauliString("IX"));
  CHECK(g.one_norm() == Catch::Approx(1.0));
  CHECK(g.n_qubits() == 2);
  CHECK(g.dim() == 4);
  CHECK_THROWS_AS(PauliSum(0), std::invalid_argument);
}

TEST_CASE("sum matrix equals the weighted sum of word matrices") {
  PauliSum g(2);
  g.add_term(0.75, PauliString("ZI"));
  g.add_term(-0.25, PauliString("IX"));
  const ComplexMatrix expected = 0.75 * PauliString("ZI").to_matrix() -
                                 0.25 * PauliString("IX").to_matrix();
  CHECK((g.to_matrix() - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((g.to_matrix() - g.to_matrix().adjoint()).cwiseAbs().maxCoeff() < 1e-15);

  PauliSum zero(2);
  CHECK(zero.to_matrix().isZero(0.0));
}
