#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>

#include <qig/qig.hpp>

#include "helpers.hpp"

using qig::Json;

namespace {

// Runs fn, requires a ConfigError, and checks the message names the JSON path.
template <typename Fn>
void expect_config_error(Fn&& fn, const std::string& needle) {
  try {
    fn();
    FAIL("expected a ConfigError mentioning \"" << needle << "\"");
  } catch (const qig::ConfigError& e) {
    INFO("message: " << e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("pauli sum JSON round-trip") {
  qig::PauliSum sum(2);
  sum.add_term(0.75, qig::PauliString("XZ"));
  sum.add_term(-1.25, qig::PauliString("YI"));
  qig::PauliSum back = qig::pauli_sum_from_json(qig::to_json(sum), "/hamiltonian");
  REQUIRE(back.n_qubits() == 2);
  REQUIRE(back.terms().size() == 2);
  CHECK((back.to_matrix() - sum.to_matrix()).norm() < 1e-15);
  CHECK(back.terms()[0].coeff == 0.75);
  CHECK(back.terms()[1].pauli.ops() == "YI");
}

TEST_CASE("pauli sum JSON validation errors carry paths") {
  expect_config_error(
      [] { qig::pauli_sum_from_json(Json{{"terms", Json::array()}}, "/hamiltonian"); },
      "/hamiltonian");
  expect_config_error(
      [] {
        qig::pauli_sum_from_json(
            Json{{"n_qubits", 1},
                 {"terms", Json::array({Json{{"coeff", 1.0}, {"pauli", "Q"}}})}},
            "/hamiltonian");
      },
      "/hamiltonian/terms/0");
  expect_config_error(
      [] {
        qig::pauli_sum_from_json(
            Json{{"n_qubits", 1}, {"terms", Json::array()}, {"weight", 2}}, "/g");
      },
      "weight");
  expect_config_error(
      [] { qig::pauli_sum_from_json(Json{{"n_qubits", 0}, {"terms", Json::array()}}, "/g"); },
      "/g/n_qubits");
}

TEST_CASE("circuit JSON round-trip preserves the unitary") {
  const double s = 1.0 / std::sqrt(2.0);
  Json cfg{
      {"n_qubits", 1},
      {"layers",
       Json::array(
           {Json{{"generator",
                  Json{{"n_qubits", 1},
                       {"terms", Json::array({Json{{"coeff", 1.0}, {"pauli", "X"}}})}}}},
            Json{{"generator",
                  Json{{"n_qubits", 1},
                       {"terms", Json::array({Json{{"coeff", -1.0}, {"pauli", "Z"}}})}}},
                 {"fixed_gate",
                  Json{{"matrix", Json::array({Json::array({s, 0.0}), Json::array({s, 0.0}),
                                               Json::array({s, 0.0}),
                                               Json::array({-s, 0.0})})}}}}})}};
  qig::Circuit c = qig::circuit_from_json(cfg, "/circuit");
  REQUIRE(c.n_layers() == 2);
  CHECK(c.layer(1).fixed_gate.isIdentity(1e-14));
  CHECK(c.layer(2).fixed_gate(1, 1).real() == Catch::Approx(-s));

  qig::Circuit back = qig::circuit_from_json(qig::to_json(c), "/circuit");
  const std::vector<double> phi{0.3, -0.8};
  CHECK((qig::full_unitary(back, phi) - qig::full_unitary(c, phi)).norm() < 1e-14);

  Json serialized = qig::to_json(c);
  CHECK(serialized["layers"][0]["fixed_gate"] == Json("identity"));
  CHECK(serialized["layers"][1]["fixed_gate"].contains("matrix"));
}

TEST_CASE("circuit JSON validation errors") {
  Json base{{"n_qubits", 1}, {"layers", Json::array()}};
  expect_config_error([&] { qig::circuit_from_json(base, "/circuit"); },
                      "/circuit/layers");

  Json gen{{"n_qubits", 1},
           {"terms", Json::array({Json{{"coeff", 1.0}, {"pauli", "X"}}})}};
  Json short_gate{{"matrix", Json::array({Json::array({1.0, 0.0})})}};
  expect_config_error(
      [&] {
        qig::circuit_from_json(
            Json{{"n_qubits", 1},
                 {"layers", Json::array({Json{{"generator", gen},
                                              {"fixed_gate", short_gate}}})}},
            "/circuit");
      },
      "/circuit/layers/0/fixed_gate/matrix");

  // A non-unitary gate parses fine but fails circuit construction.
  Json stretched{{"matrix",
                  Json::array({Json::array({2.0, 0.0}), Json::array({0.0, 0.0}),
                               Json::array({0.0, 0.0}), Json::array({1.0, 0.0})})}};
  expect_config_error(
      [&] {
        qig::circuit_from_json(
            Json{{"n_qubits", 1},
                 {"layers", Json::array({Json{{"generator", gen},
                                              {"fixed_gate", stretched}}})}},
            "/circuit");
      },
      "/circuit");

  expect_config_error(
      [&] {
        qig::circuit_from_json(
            Json{{"n_qubits", 1},
                 {"layers", Json::array({Json{{"generator", gen}, {"angle", 1.0}}})}},
            "/circuit");
      },
      "angle");
}

TEST_CASE("info matrix JSON and CSV forms") {
  qig::InfoMatrix m;
  m.kind = qig::MatrixKind::WY;
  m.provenance = qig::Provenance::ExactClosedForm;
  m.values = qig::RealMatrix(2, 2);
  m.values << 1.0, 0.25, 0.25, 2.0;

  qig::InfoMatrix back = qig::info_matrix_from_json(qig::to_json(m), "/m");
  CHECK(back.kind == m.kind);
  CHECK(back.provenance == m.provenance);
  CHECK((back.values - m.values).norm() == 0.0);

  std::string csv = qig::info_matrix_csv(m);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "kind,provenance");
  std::getline(lines, line);
  CHECK(line == "WY,exact_closed_form");
  std::getline(lines, line);
  CHECK(line == "1,0.25");

  expect_config_error(
      [] {
        qig::info_matrix_from_json(
            Json{{"kind", "GL"}, {"provenance", "estimated"}, {"values", Json::array()}},
            "/m");
      },
      "/m/kind");
  expect_config_error(
      [&] {
        Json j = qig::to_json(m);
        j["values"] = Json::array({Json::array({1.0, 2.0})});  // 1x2, not square
        qig::info_matrix_from_json(j, "/m");
      },
      "/m/values");
}

TEST_CASE("ragged real matrices are rejected") {
  expect_config_error(
      [] {
        qig::real_matrix_from_json(
            Json::array({Json::array({1.0, 2.0}), Json::array({3.0})}), "/values");
      },
      "/values");
}

TEST_CASE("estimate results serialize with optional fields") {
  qig::EstimateResult r;
  r.i = 1;
  r.j = 2;
  r.kind = qig::MatrixKind::KM;
  r.mean = 0.5;
  r.std_error = 0.01;
  r.shots = 100;
  r.seed = 7;

  Json plain = qig::to_json(r);
  CHECK(!plain.contains("degenerate_stderr"));
  CHECK(!plain.contains("exact"));
  CHECK(plain["kind"] == "KM");
  CHECK(plain["shots"] == 100);

  r.degenerate_std_error = true;
  r.exact = 0.75;
  Json full = qig::to_json(r);
  CHECK(full["degenerate_stderr"] == true);
  CHECK(full["exact"] == 0.75);

  std::string csv = qig::estimate_results_csv({r}, true);
  CHECK(csv.rfind("kind,i,j,mean,std_error,shots,seed,degenerate_stderr,exact\n", 0) == 0);
  CHECK(csv.find("KM,1,2,0.5,0.01,100,7,1,0.75") != std::string::npos);
  std::string no_exact = qig::estimate_results_csv({r}, false);
  CHECK(no_exact.rfind("kind,i,j,mean,std_error,shots,seed,degenerate_stderr\n", 0) == 0);
}

TEST_CASE("shot logs and optimization traces") {
  std::vector<qig::ShotRecord> shots(2);
  shots[0] = {0, 1, -1.0, 0.25};
  shots[1] = {1, 0, 1.0, -0.5};
  std::string csv = qig::shot_log_csv(shots);
  CHECK(csv == "b,c,lambda,t\n0,1,-1,0.25\n1,0,1,-0.5\n");

  qig::OptimizationTrace trace(2);
  trace[0] = {0, {0.3}, -0.5, 0.8, 1.0, 0.0};
  trace[1] = {1, {0.26}, -0.55, 0.7, 1.0, 0.0};
  std::string jsonl = qig::trace_jsonl(trace);
  std::istringstream lines(jsonl);
  std::string line;
  int n_lines = 0;
  while (std::getline(lines, line)) {
    Json rec = Json::parse(line);
    CHECK(rec.contains("iter"));
    CHECK(rec.contains("phi"));
    CHECK(rec.contains("cost"));
    CHECK(rec.contains("grad_norm"));
    CHECK(rec.contains("metric_cond"));
    ++n_lines;
  }
  CHECK(n_lines == 2);
  CHECK(qig::trace_csv(trace).rfind("iter,phi_0,cost,grad_norm,metric_cond\n", 0) == 0);
}

TEST_CASE("estimator config block") {
  qig::EstimatorConfig cfg = qig::estimator_config_from_json(
      Json{{"epsilon", 0.2},
           {"delta", 0.1},
           {"shots_override", 37},
           {"seed", 99},
           {"one_norm_shot_rule", true}},
      "/estimator");
  CHECK(cfg.epsilon == 0.2);
  CHECK(cfg.delta == 0.1);
  CHECK(cfg.shots == 37);
  CHECK(cfg.seed == 99);
  CHECK(cfg.one_norm_shot_rule);

  expect_config_error(
      [] {
        qig::estimator_config_from_json(Json{{"shots_override", 0}}, "/estimator");
      },
      "/estimator/shots_override");
  expect_config_error(
      [] { qig::estimator_config_from_json(Json{{"epsilon", -1.0}}, "/estimator"); },
      "/estimator");
  expect_config_error(
      [] { qig::estimator_config_from_json(Json{{"rounds", 5}}, "/estimator"); },
      "rounds");
}

TEST_CASE("optimizer config block") {
  qig::OptimizerConfig plain = qig::optimizer_config_from_json(Json::object(), "/optimizer");
  CHECK(plain.metric_source == qig::MetricSource::Euclidean);

  qig::OptimizerConfig fb = qig::optimizer_config_from_json(
      Json{{"metric", "FB"}, {"learning_rate", 0.1}, {"regularization", 1e-6},
           {"max_iters", 20}, {"grad_tol", 1e-5}},
      "/optimizer");
  CHECK(fb.metric_kind == qig::MatrixKind::FB);
  CHECK(fb.metric_source == qig::MetricSource::ExactSpectral);
  CHECK(fb.learning_rate == 0.1);
  CHECK(fb.lambda_reg == 1e-6);
  CHECK(fb.max_iters == 20);
  CHECK(fb.grad_tol == 1e-5);

  qig::OptimizerConfig est = qig::optimizer_config_from_json(
      Json{{"metric", "KM"},
           {"metric_source", "estimated"},
           {"estimator", Json{{"shots_override", 100}, {"seed", 5}}}},
      "/optimizer");
  CHECK(est.metric_source == qig::MetricSource::Estimated);
  CHECK(est.estimator.shots == 100);

  expect_config_error(
      [] {
        qig::optimizer_config_from_json(Json{{"metric_source", "exact_spectral"}},
                                        "/optimizer");
      },
      "/optimizer/metric_source");
  expect_config_error(
      [] {
        qig::optimizer_config_from_json(
            Json{{"metric", "FB"}, {"metric_source", "oracle"}}, "/optimizer");
      },
      "oracle");
  expect_config_error(
      [] { qig::optimizer_config_from_json(Json{{"learning_rate", 0.0}}, "/optimizer"); },
      "/optimizer");
}

TEST_CASE("experiment config parses a complete file") {
  Json cfg{
      {"hamiltonian",
       Json{{"n_qubits", 1},
            {"terms", Json::array({Json{{"coeff", 1.0}, {"pauli", "Z"}}})}}},
      {"circuit",
       Json{{"n_qubits", 1},
            {"layers",
             Json::array({Json{
                 {"generator",
                  Json{{"n_qubits", 1},
                       {"terms",
                        Json::array({Json{{"coeff", 1.0}, {"pauli", "X"}}})}}}}})}}},
      {"parameters", Json::array({0.3})},
      {"kinds", Json::array({"FB", "KM"})},
      {"pairs", Json::array({Json::array({1, 1})})},
      {"n_copies", 4},
      {"output_format", "csv"}};
  qig::ExperimentConfig parsed = qig::experiment_config_from_json(cfg);
  REQUIRE(parsed.hamiltonian.has_value());
  REQUIRE(parsed.circuit.has_value());
  CHECK(parsed.parameters == std::vector<double>{0.3});
  REQUIRE(parsed.kinds.size() == 2);
  CHECK(parsed.kinds[0] == qig::MatrixKind::FB);
  CHECK(parsed.kinds[1] == qig::MatrixKind::KM);
  REQUIRE(parsed.pairs.size() == 1);
  CHECK(parsed.pairs[0] == std::make_pair(1, 1));
  CHECK(parsed.n_copies == 4);
  CHECK(parsed.output_format == "csv");
  CHECK(!parsed.observable.has_value());
  CHECK(!parsed.estimator.has_value());

  SECTION("kinds default to all three") {
    Json minimal = cfg;
    minimal.erase("kinds");
    CHECK(qig::experiment_config_from_json(minimal).kinds.size() == 3);
  }
  SECTION("unknown root keys are rejected") {
    Json bad = cfg;
    bad["shots"] = 100;
    expect_config_error([&] { qig::experiment_config_from_json(bad); }, "shots");
  }
  SECTION("qubit-count mismatch between hamiltonian and circuit") {
    Json bad = cfg;
    bad["hamiltonian"]["n_qubits"] = 2;
    bad["hamiltonian"]["terms"][0]["pauli"] = "ZZ";
    expect_config_error([&] { qig::experiment_config_from_json(bad); },
                        "/hamiltonian/n_qubits");
  }
  SECTION("parameter count must match the layer count") {
    Json bad = cfg;
    bad["parameters"] = Json::array({0.3, 0.4});
    expect_config_error([&] { qig::experiment_config_from_json(bad); }, "/parameters");
  }
  SECTION("pairs must reference existing layers") {
    Json bad = cfg;
    bad["pairs"] = Json::array({Json::array({1, 2})});
    expect_config_error([&] { qig::experiment_config_from_json(bad); }, "/pairs/0");
  }
  SECTION("observable must act on the circuit's qubits") {
    Json bad = cfg;
    bad["observable"] =
        Json{{"n_qubits", 2},
             {"terms", Json::array({Json{{"coeff", 1.0}, {"pauli", "ZI"}}})}};
    expect_config_error([&] { qig::experiment_config_from_json(bad); },
                        "/observable/n_qubits");
  }
  SECTION("output format is restricted") {
    Json bad = cfg;
    bad["output_format"] = "yaml";
    expect_config_error([&] { qig::experiment_config_from_json(bad); },
                        "/output_format");
  }
}

TEST_CASE("covariance file schema") {
  qig::CovarianceInput cov = qig::covariance_from_json(
      Json{{"values", Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 2.0})})},
           {"n_copies", 5}});
  CHECK(cov.values(1, 1) == 2.0);
  REQUIRE(cov.n_copies.has_value());
  CHECK(*cov.n_copies == 5);
  CHECK(!qig::covariance_from_json(
             Json{{"values", Json::array({Json::array({1.0})})}})
             .n_copies.has_value());

  expect_config_error(
      [] {
        qig::covariance_from_json(
            Json{{"values", Json::array({Json::array({1.0, 2.0})})}});
      },
      "/values");
  expect_config_error(
      [] {
        qig::covariance_from_json(
            Json{{"values", Json::array({Json::array({1.0})})}, {"n_copies", 0}});
      },
      "/n_copies");
}

TEST_CASE("file helpers") {
  auto path = temp_file("qig_serialization_test.json");
  qig::write_text_file(path.string(), "{\"a\": 1}\n");
  Json j = qig::read_json_file(path.string());
  CHECK(j["a"] == 1);

  qig::write_text_file(path.string(), "{not json");
  CHECK_THROWS_AS(qig::read_json_file(path.string()), qig::ConfigError);
  std::remove(path.string().c_str());
  CHECK_THROWS_AS(qig::read_json_file(path.string()), qig::ConfigError);
}

TEST_CASE("csv numbers survive a parse round-trip") {
  for (double x : {std::acos(-1.0), -1.0 / 3.0, 2.3201026335438955, 1e-17, 0.0}) {
    CHECK(std::stod(qig::csv_number(x)) == x);
  }
}
