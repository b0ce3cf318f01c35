#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <qig/thermal.hpp>

#include "helpers.hpp"

using qig::ComplexMatrix;
using qig::PauliString;
using qig::PauliSum;

TEST_CASE("single-qubit Z thermal state") {
  PauliSum g(1);
  g.add_term(1.0, PauliString("Z"));
  qig::ThermalState st = qig::prepare_thermal(g);
  const double z = 2.0 * std::cosh(1.0);

  CHECK(st.dim() == 2);
  CHECK(st.partition == Catch::Approx(z).epsilon(1e-14));
  CHECK(st.log_partition == Catch::Approx(std::log(z)).epsilon(1e-14));
  // Z|0> = +|0>, so the computational ground component is suppressed.
  CHECK(st.rho(0, 0).real() == Catch::Approx(std::exp(-1.0) / z).epsilon(1e-14));
  CHECK(st.rho(1, 1).real() == Catch::Approx(std::exp(1.0) / z).epsilon(1e-14));
  CHECK(std::abs(st.rho(0, 1)) < 1e-15);
  // Populations are indexed by ascending eigenvalue of G.
  CHECK(st.lambdas(0) == Catch::Approx(std::exp(1.0) / z).epsilon(1e-14));
  CHECK(st.lambdas(1) == Catch::Approx(std::exp(-1.0) / z).epsilon(1e-14));
  CHECK(st.lambdas.sum() == Catch::Approx(1.0).epsilon(1e-14));
  CHECK((st.sqrt_rho * st.sqrt_rho - st.rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero Hamiltonian yields the maximally mixed state") {
  PauliSum g(2);
  qig::ThermalState st = qig::prepare_thermal(g);
  CHECK((st.rho - ComplexMatrix::Identity(4, 4) / 4.0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(st.partition == Catch::Approx(4.0));
}

TEST_CASE("large coefficients do not overflow the partition function") {
  PauliSum g(1);
  g.add_term(800.0, PauliString("Z"));
  qig::ThermalState st = qig::prepare_thermal(g);
  CHECK(std::isfinite(st.log_partition));
  CHECK(st.lambdas.sum() == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(st.lambdas.minCoeff() >= 0.0);
  CHECK(st.rho.trace().real() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random thermal states are valid density matrices") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    auto inst = testutil::random_instance(seed);
    const auto& st = inst.state;
    CHECK(st.rho.trace().real() == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(qig::is_hermitian(st.rho));
    CHECK(st.lambdas.minCoeff() > 0.0);  // thermal states are full rank
    CHECK((st.sqrt_rho * st.sqrt_rho - st.rho).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("canonical purification traces back to the state") {
  auto inst = testutil::random_instance(5);
  const auto& st = inst.state;
  qig::PurifiedState psi = qig::canonical_purification(st.rho);
  CHECK(psi.system_dim == st.dim());
  CHECK(psi.amplitudes.norm() == Catch::Approx(1.0).epsilon(1e-12));
  ComplexMatrix reduced = qig::purified_reduced_state(psi);
  CHECK((reduced - st.rho).cwiseAbs().maxCoeff() < 1e-12);

  qig::PurifiedState via_sqrt = qig::purification_from_sqrt(st.sqrt_rho);
  CHECK((via_sqrt.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("purification amplitude layout is row-major in (system, reference)") {
  // For diagonal rho the purification has amplitude sqrt(rho_aa) on the
  // doubled index (a, a).
  PauliSum g(1);
  g.add_term(1.0, PauliString("Z"));
  qig::ThermalState st = qig::prepare_thermal(g);
  qig::PurifiedState psi = qig::purification_from_sqrt(st.sqrt_rho);
  REQUIRE(psi.amplitudes.size() == 4);
  CHECK(std::abs(psi.amplitudes(0) - std::sqrt(st.rho(0, 0))) < 1e-14);
  CHECK(std::abs(psi.amplitudes(3) - std::sqrt(st.rho(1, 1))) < 1e-14);
  CHECK(std::abs(psi.amplitudes(1)) < 1e-14);
  CHECK(std::abs(psi.amplitudes(2)) < 1e-14);
}
