#pragma once

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qig/circuit.hpp"
#include "qig/errors.hpp"
#include "qig/estimators.hpp"
#include "qig/info_matrix.hpp"
#include "qig/optimizer.hpp"
#include "qig/pauli.hpp"

namespace qig {

using Json = nlohmann::json;

/// 17 significant digits: doubles round-trip exactly, so output files can be
/// compared byte-for-byte.
inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

namespace detail {

[[noreturn]] inline void config_fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

inline std::string join_path(const std::string& path, const std::string& key) {
  return path + "/" + key;
}

inline const Json& require_key(const Json& j, const std::string& path,
                               const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) config_fail(path, "missing required key \"" + key + "\"");
  return *it;
}

inline void require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected a JSON object");
}

/// Unknown keys are rejected rather than ignored so that typos in a config
/// fail loudly instead of silently falling back to defaults.
inline void reject_unknown_keys(const Json& j, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) config_fail(join_path(path, it.key()), "unknown key");
  }
}

inline double number_at(const Json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  return j.get<double>();
}

inline long long integer_at(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  return j.get<long long>();
}

inline bool bool_at(const Json& j, const std::string& path) {
  if (!j.is_boolean()) config_fail(path, "expected a boolean");
  return j.get<bool>();
}

inline std::string string_at(const Json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

}  // namespace detail

inline MatrixKind matrix_kind_from_string(const std::string& s, const std::string& path) {
  if (s == "FB") return MatrixKind::FB;
  if (s == "WY") return MatrixKind::WY;
  if (s == "KM") return MatrixKind::KM;
  detail::config_fail(path, "expected \"FB\", \"WY\" or \"KM\", got \"" + s + "\"");
}

inline Provenance provenance_from_string(const std::string& s, const std::string& path) {
  if (s == "exact_spectral") return Provenance::ExactSpectral;
  if (s == "exact_closed_form") return Provenance::ExactClosedForm;
  if (s == "estimated") return Provenance::Estimated;
  detail::config_fail(path, "unknown provenance \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// PauliSum: {"n_qubits": int, "terms": [{"coeff": float, "pauli": "XZ..."}]}
// ---------------------------------------------------------------------------

inline PauliSum pauli_sum_from_json(const Json& j, const std::string& path) {
  detail::require_object(j, path);
  detail::reject_unknown_keys(j, path, {"n_qubits", "terms"});
  long long n = detail::integer_at(detail::require_key(j, path, "n_qubits"),
                                   detail::join_path(path, "n_qubits"));
  if (n < 1 || n > 30) detail::config_fail(detail::join_path(path, "n_qubits"),
                                           "must be a positive qubit count");
  PauliSum sum(static_cast<int>(n));
  const Json& terms = detail::require_key(j, path, "terms");
  const std::string tpath = detail::join_path(path, "terms");
  if (!terms.is_array()) detail::config_fail(tpath, "expected an array");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string kp = tpath + "/" + std::to_string(k);
    const Json& term = terms[k];
    detail::require_object(term, kp);
    detail::reject_unknown_keys(term, kp, {"coeff", "pauli"});
    double coeff = detail::number_at(detail::require_key(term, kp, "coeff"),
                                     detail::join_path(kp, "coeff"));
    std::string word = detail::string_at(detail::require_key(term, kp, "pauli"),
                                         detail::join_path(kp, "pauli"));
    try {
      sum.add_term(coeff, PauliString(word));
    } catch (const std::invalid_argument& e) {
      detail::config_fail(kp, e.what());
    }
  }
  return sum;
}

inline Json to_json(const PauliSum& sum) {
  Json terms = Json::array();
  for (const PauliTerm& t : sum.terms()) {
    terms.push_back(Json{{"coeff", t.coeff}, {"pauli", t.pauli.ops()}});
  }
  return Json{{"n_qubits", sum.n_qubits()}, {"terms", std::move(terms)}};
}

// ---------------------------------------------------------------------------
// Circuit: {"n_qubits": int, "layers": [{"generator": PauliSum,
//   "fixed_gate": "identity" | {"matrix": [[re, im], ...]}}]}
// The gate matrix is a row-major flat list of [re, im] pairs, length dim^2.
// ---------------------------------------------------------------------------

inline ComplexMatrix gate_from_json(const Json& j, Eigen::Index dim,
                                    const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "identity") return ComplexMatrix::Identity(dim, dim);
    detail::config_fail(path, "the only string form is \"identity\"");
  }
  detail::require_object(j, path);
  detail::reject_unknown_keys(j, path, {"matrix"});
  const Json& entries = detail::require_key(j, path, "matrix");
  const std::string mpath = detail::join_path(path, "matrix");
  if (!entries.is_array() ||
      entries.size() != static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {
    detail::config_fail(mpath, "expected " + std::to_string(dim * dim) +
                                   " row-major [re, im] pairs");
  }
  ComplexMatrix gate(dim, dim);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string ep = mpath + "/" + std::to_string(k);
    const Json& pair = entries[k];
    if (!pair.is_array() || pair.size() != 2) {
      detail::config_fail(ep, "expected a [re, im] pair");
    }
    gate(static_cast<Eigen::Index>(k) / dim, static_cast<Eigen::Index>(k) % dim) =
        Complex(detail::number_at(pair[0], ep + "/0"),
                detail::number_at(pair[1], ep + "/1"));
  }
  return gate;
}

inline Circuit circuit_from_json(const Json& j, const std::string& path) {
  detail::require_object(j, path);
  detail::reject_unknown_keys(j, path, {"n_qubits", "layers"});
  long long n = detail::integer_at(detail::require_key(j, path, "n_qubits"),
                                   detail::join_path(path, "n_qubits"));
  if (n < 1 || n > 30) detail::config_fail(detail::join_path(path, "n_qubits"),
                                           "must be a positive qubit count");
  const Eigen::Index dim = Eigen::Index(1) << n;
  const Json& layers = detail::require_key(j, path, "layers");
  const std::string lpath = detail::join_path(path, "layers");
  if (!layers.is_array() || layers.empty()) {
    detail::config_fail(lpath, "expected a nonempty array of layers");
  }
  std::vector<std::pair<PauliSum, ComplexMatrix>> parsed;
  parsed.reserve(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const std::string kp = lpath + "/" + std::to_string(k);
    const Json& layer = layers[k];
    detail::require_object(layer, kp);
    detail::reject_unknown_keys(layer, kp, {"generator", "fixed_gate"});
    PauliSum gen = pauli_sum_from_json(detail::require_key(layer, kp, "generator"),
                                       detail::join_path(kp, "generator"));
    ComplexMatrix gate =
        layer.contains("fixed_gate")
            ? gate_from_json(layer.at("fixed_gate"), dim, detail::join_path(kp, "fixed_gate"))
            : ComplexMatrix(ComplexMatrix::Identity(dim, dim));
    parsed.emplace_back(std::move(gen), std::move(gate));
  }
  try {
    return Circuit(static_cast<int>(n), std::move(parsed));
  } catch (const std::invalid_argument& e) {
    detail::config_fail(path, e.what());
  }
}

inline Json to_json(const Circuit& c) {
  Json layers = Json::array();
  for (int j = 1; j <= c.n_layers(); ++j) {
    const Layer& layer = c.layer(j);
    Json node{{"generator", to_json(layer.generator)}};
    if (layer.fixed_gate.isIdentity(1e-15)) {
      node["fixed_gate"] = "identity";
    } else {
      Json entries = Json::array();
      for (Eigen::Index r = 0; r < layer.fixed_gate.rows(); ++r) {
        for (Eigen::Index col = 0; col < layer.fixed_gate.cols(); ++col) {
          entries.push_back(Json::array(
              {layer.fixed_gate(r, col).real(), layer.fixed_gate(r, col).imag()}));
        }
      }
      node["fixed_gate"] = Json{{"matrix", std::move(entries)}};
    }
    layers.push_back(std::move(node));
  }
  return Json{{"n_qubits", c.n_qubits()}, {"layers", std::move(layers)}};
}

// ---------------------------------------------------------------------------
// Real vectors and matrices
// ---------------------------------------------------------------------------

inline std::vector<double> real_vector_from_json(const Json& j, const std::string& path) {
  if (!j.is_array()) detail::config_fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(detail::number_at(j[k], path + "/" + std::to_string(k)));
  }
  return out;
}

inline RealMatrix real_matrix_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) detail::config_fail(path, "expected a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  RealMatrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array()) detail::config_fail(rp, "expected an array of numbers");
    if (r == 0) {
      cols = j[r].size();
      if (cols == 0) detail::config_fail(rp, "rows must be nonempty");
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (j[r].size() != cols) {
      detail::config_fail(rp, "ragged rows are not allowed");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          detail::number_at(j[r][c], rp + "/" + std::to_string(c));
    }
  }
  return m;
}

inline Json to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// InfoMatrix: {"kind": "FB|WY|KM", "provenance": "...", "values": [[...]]}
// ---------------------------------------------------------------------------

inline Json to_json(const InfoMatrix& m) {
  return Json{{"kind", to_string(m.kind)},
              {"provenance", to_string(m.provenance)},
              {"values", to_json(m.values)}};
}

inline InfoMatrix info_matrix_from_json(const Json& j, const std::string& path) {
  detail::require_object(j, path);
  detail::reject_unknown_keys(j, path, {"kind", "provenance", "values"});
  InfoMatrix m;
  m.kind = matrix_kind_from_string(
      detail::string_at(detail::require_key(j, path, "kind"), detail::join_path(path, "kind")),
      detail::join_path(path, "kind"));
  m.provenance = provenance_from_string(
      detail::string_at(detail::require_key(j, path, "provenance"),
                        detail::join_path(path, "provenance")),
      detail::join_path(path, "provenance"));
  m.values = real_matrix_from_json(detail::require_key(j, path, "values"),
                                   detail::join_path(path, "values"));
  if (m.values.rows() != m.values.cols()) {
    detail::config_fail(detail::join_path(path, "values"), "matrix must be square");
  }
  return m;
}

/// CSV form: a two-line header naming kind and provenance, then the matrix
/// rows in row-major order at 17 significant digits.
inline std::string info_matrix_csv(const InfoMatrix& m) {
  std::ostringstream out;
  out << "kind,provenance\n" << to_string(m.kind) << "," << to_string(m.provenance) << "\n";
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) {
      if (c) out << ",";
      out << csv_number(m.values(r, c));
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// EstimateResult
// ---------------------------------------------------------------------------

inline Json to_json(const EstimateResult& r) {
  Json j{{"i", r.i},
         {"j", r.j},
         {"kind", to_string(r.kind)},
         {"mean", r.mean},
         {"std_error", r.std_error},
         {"shots", r.shots},
         {"seed", r.seed}};
  if (r.degenerate_std_error) j["degenerate_stderr"] = true;
  if (r.exact.has_value()) j["exact"] = *r.exact;
  return j;
}

inline std::string estimate_results_csv(const std::vector<EstimateResult>& results,
                                        bool with_exact) {
  std::ostringstream out;
  out << "kind,i,j,mean,std_error,shots,seed,degenerate_stderr";
  if (with_exact) out << ",exact";
  out << "\n";
  for (const EstimateResult& r : results) {
    out << to_string(r.kind) << "," << r.i << "," << r.j << "," << csv_number(r.mean) << ","
        << csv_number(r.std_error) << "," << r.shots << "," << r.seed << ","
        << (r.degenerate_std_error ? 1 : 0);
    if (with_exact) out << "," << csv_number(r.exact.value_or(0.0));
    out << "\n";
  }
  return out.str();
}

inline std::string shot_log_csv(const std::vector<ShotRecord>& shots) {
  std::ostringstream out;
  out << "b,c,lambda,t\n";
  for (const ShotRecord& s : shots) {
    out << s.b << "," << s.c << "," << csv_number(s.lam) << "," << csv_number(s.t) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Optimization traces: JSON-lines, one record per iteration.
// ---------------------------------------------------------------------------

inline std::string trace_jsonl(const OptimizationTrace& trace) {
  std::ostringstream out;
  for (const IterationRecord& rec : trace) {
    Json phi = Json::array();
    for (double x : rec.phi) phi.push_back(x);
    Json line{{"iter", rec.iter},
              {"phi", std::move(phi)},
              {"cost", rec.cost_value},
              {"grad_norm", rec.grad_norm},
              {"metric_cond", rec.metric_condition}};
    out << line.dump() << "\n";
  }
  return out.str();
}

inline std::string trace_csv(const OptimizationTrace& trace) {
  std::ostringstream out;
  const std::size_t n_params = trace.empty() ? 0 : trace.front().phi.size();
  out << "iter";
  for (std::size_t k = 0; k < n_params; ++k) out << ",phi_" << k;
  out << ",cost,grad_norm,metric_cond\n";
  for (const IterationRecord& rec : trace) {
    out << rec.iter;
    for (double x : rec.phi) out << "," << csv_number(x);
    out << "," << csv_number(rec.cost_value) << "," << csv_number(rec.grad_norm) << ","
        << csv_number(rec.metric_condition) << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline Json to_json(const CrbReport& r) {
  return Json{{"n_copies", r.n_copies},
              {"min_eig_block", r.min_eig_block},
              {"min_eig_direct", r.min_eig_direct},
              {"satisfied", r.satisfied}};
}

inline Json to_json(const LoewnerReport& r) {
  return Json{{"min_eig_km_minus_wy", r.min_eig_km_minus_wy},
              {"min_eig_wy_minus_fb", r.min_eig_wy_minus_fb},
              {"min_eig_fb_minus_half_wy", r.min_eig_fb_minus_half_wy},
              {"satisfied", r.satisfied}};
}

// ---------------------------------------------------------------------------
// Estimator / optimizer configuration blocks
// ---------------------------------------------------------------------------

inline EstimatorConfig estimator_config_from_json(const Json& j, const std::string& path) {
  detail::require_object(j, path);
  detail::reject_unknown_keys(
      j, path, {"epsilon", "delta", "shots_override", "seed", "one_norm_shot_rule"});
  EstimatorConfig cfg;
  if (j.contains("epsilon")) {
    cfg.epsilon = detail::number_at(j.at("epsilon"), detail::join_path(path, "epsilon"));
  }
  if (j.contains("delta")) {
    cfg.delta = detail::number_at(j.at("delta"), detail::join_path(path, "delta"));
  }
  if (j.contains("shots_override")) {
    long long s = detail::integer_at(j.at("shots_override"),
                                     detail::join_path(path, "shots_override"));
    if (s < 1) detail::config_fail(detail::join_path(path, "shots_override"),
                                   "must be a positive shot count");
    cfg.shots = s;
  }
  if (j.contains("seed")) {
    cfg.seed = static_cast<std::uint64_t>(
        detail::integer_at(j.at("seed"), detail::join_path(path, "seed")));
  }
  if (j.contains("one_norm_shot_rule")) {
    cfg.one_norm_shot_rule = detail::bool_at(j.at("one_norm_shot_rule"),
                                             detail::join_path(path, "one_norm_shot_rule"));
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    detail::config_fail(path, e.what());
  }
  return cfg;
}

inline OptimizerConfig optimizer_config_from_json(const Json& j, const std::string& path) {
  detail::require_object(j, path);
  detail::reject_unknown_keys(j, path,
                              {"learning_rate", "metric", "metric_source", "regularization",
                               "max_iters", "grad_tol", "estimator"});
  OptimizerConfig cfg;
  if (j.contains("learning_rate")) {
    cfg.learning_rate =
        detail::number_at(j.at("learning_rate"), detail::join_path(path, "learning_rate"));
  }
  std::string metric = "euclidean";
  if (j.contains("metric")) {
    metric = detail::string_at(j.at("metric"), detail::join_path(path, "metric"));
  }
  if (metric == "euclidean") {
    cfg.metric_source = MetricSource::Euclidean;
  } else {
    cfg.metric_kind = matrix_kind_from_string(metric, detail::join_path(path, "metric"));
    cfg.metric_source = MetricSource::ExactSpectral;
  }
  if (j.contains("metric_source")) {
    const std::string sp = detail::join_path(path, "metric_source");
    std::string src = detail::string_at(j.at("metric_source"), sp);
    if (metric == "euclidean") {
      detail::config_fail(sp, "metric_source does not apply to the euclidean metric");
    }
    if (src == "exact_spectral") {
      cfg.metric_source = MetricSource::ExactSpectral;
    } else if (src == "exact_closed_form") {
      cfg.metric_source = MetricSource::ExactClosedForm;
    } else if (src == "estimated") {
      cfg.metric_source = MetricSource::Estimated;
    } else {
      detail::config_fail(sp, "expected \"exact_spectral\", \"exact_closed_form\" or "
                              "\"estimated\", got \"" + src + "\"");
    }
  }
  if (j.contains("regularization")) {
    cfg.lambda_reg =
        detail::number_at(j.at("regularization"), detail::join_path(path, "regularization"));
  }
  if (j.contains("max_iters")) {
    cfg.max_iters = static_cast<int>(
        detail::integer_at(j.at("max_iters"), detail::join_path(path, "max_iters")));
  }
  if (j.contains("grad_tol")) {
    cfg.grad_tol = detail::number_at(j.at("grad_tol"), detail::join_path(path, "grad_tol"));
  }
  if (j.contains("estimator")) {
    cfg.estimator =
        estimator_config_from_json(j.at("estimator"), detail::join_path(path, "estimator"));
  }
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    detail::config_fail(path, e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// ExperimentConfig: the single JSON config file consumed by the CLI.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
  std::optional<PauliSum> hamiltonian;
  std::optional<Circuit> circuit;
  std::vector<double> parameters;
  std::optional<PauliSum> observable;
  std::optional<EstimatorConfig> estimator;
  std::optional<OptimizerConfig> optimizer;
  std::vector<MatrixKind> kinds{MatrixKind::FB, MatrixKind::WY, MatrixKind::KM};
  std::vector<std::pair<int, int>> pairs;  // empty means every i <= j
  std::string covariance_path;             // used by the bound-check command
  int n_copies = 1;                        // fallback when the covariance file omits it
  std::string output_path;
  std::string output_format = "json";
};

inline ExperimentConfig experiment_config_from_json(const Json& j) {
  const std::string root = "";
  detail::require_object(j, "/");
  detail::reject_unknown_keys(j, root,
                              {"hamiltonian", "circuit", "parameters", "observable",
                               "estimator", "optimizer", "kinds", "pairs", "covariance",
                               "n_copies", "output_path", "output_format"});
  ExperimentConfig cfg;
  if (j.contains("hamiltonian")) {
    cfg.hamiltonian = pauli_sum_from_json(j.at("hamiltonian"), "/hamiltonian");
  }
  if (j.contains("circuit")) {
    cfg.circuit = circuit_from_json(j.at("circuit"), "/circuit");
  }
  if (j.contains("parameters")) {
    cfg.parameters = real_vector_from_json(j.at("parameters"), "/parameters");
  }
  if (j.contains("observable")) {
    cfg.observable = pauli_sum_from_json(j.at("observable"), "/observable");
  }
  if (j.contains("estimator")) {
    cfg.estimator = estimator_config_from_json(j.at("estimator"), "/estimator");
  }
  if (j.contains("optimizer")) {
    cfg.optimizer = optimizer_config_from_json(j.at("optimizer"), "/optimizer");
  }
  if (j.contains("kinds")) {
    const Json& kinds = j.at("kinds");
    if (!kinds.is_array() || kinds.empty()) {
      detail::config_fail("/kinds", "expected a nonempty array of kind strings");
    }
    cfg.kinds.clear();
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const std::string kp = "/kinds/" + std::to_string(k);
      cfg.kinds.push_back(matrix_kind_from_string(detail::string_at(kinds[k], kp), kp));
    }
  }
  if (j.contains("pairs")) {
    const Json& pairs = j.at("pairs");
    if (!pairs.is_array()) detail::config_fail("/pairs", "expected an array of [i, j] pairs");
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const std::string kp = "/pairs/" + std::to_string(k);
      if (!pairs[k].is_array() || pairs[k].size() != 2) {
        detail::config_fail(kp, "expected an [i, j] pair of 1-based layer indices");
      }
      cfg.pairs.emplace_back(static_cast<int>(detail::integer_at(pairs[k][0], kp + "/0")),
                             static_cast<int>(detail::integer_at(pairs[k][1], kp + "/1")));
    }
  }
  if (j.contains("covariance")) {
    cfg.covariance_path = detail::string_at(j.at("covariance"), "/covariance");
  }
  if (j.contains("n_copies")) {
    long long n = detail::integer_at(j.at("n_copies"), "/n_copies");
    if (n < 1) detail::config_fail("/n_copies", "must be >= 1");
    cfg.n_copies = static_cast<int>(n);
  }
  if (j.contains("output_path")) {
    cfg.output_path = detail::string_at(j.at("output_path"), "/output_path");
  }
  if (j.contains("output_format")) {
    cfg.output_format = detail::string_at(j.at("output_format"), "/output_format");
    if (cfg.output_format != "json" && cfg.output_format != "csv") {
      detail::config_fail("/output_format", "expected \"json\" or \"csv\"");
    }
  }

  // Cross-field dimension checks.
  if (cfg.hamiltonian && cfg.circuit &&
      cfg.hamiltonian->n_qubits() != cfg.circuit->n_qubits()) {
    detail::config_fail("/hamiltonian/n_qubits",
                        "does not match /circuit/n_qubits");
  }
  if (cfg.circuit && j.contains("parameters") &&
      static_cast<int>(cfg.parameters.size()) != cfg.circuit->n_layers()) {
    detail::config_fail("/parameters", "expected one value per circuit layer (" +
                                           std::to_string(cfg.circuit->n_layers()) + ")");
  }
  if (cfg.observable && cfg.circuit &&
      cfg.observable->n_qubits() != cfg.circuit->n_qubits()) {
    detail::config_fail("/observable/n_qubits", "does not match /circuit/n_qubits");
  }
  if (cfg.circuit) {
    for (std::size_t k = 0; k < cfg.pairs.size(); ++k) {
      const auto& [pi, pj] = cfg.pairs[k];
      if (pi < 1 || pi > cfg.circuit->n_layers() || pj < 1 || pj > cfg.circuit->n_layers()) {
        detail::config_fail("/pairs/" + std::to_string(k),
                            "layer indices must lie in [1, " +
                                std::to_string(cfg.circuit->n_layers()) + "]");
      }
    }
  }
  return cfg;
}

struct CovarianceInput {
  RealMatrix values;
  std::optional<int> n_copies;
};

inline CovarianceInput covariance_from_json(const Json& j) {
  detail::require_object(j, "/");
  detail::reject_unknown_keys(j, "", {"values", "n_copies"});
  CovarianceInput cov;
  cov.values = real_matrix_from_json(detail::require_key(j, "", "values"), "/values");
  if (cov.values.rows() != cov.values.cols()) {
    detail::config_fail("/values", "covariance must be square");
  }
  if (j.contains("n_copies")) {
    long long n = detail::integer_at(j.at("n_copies"), "/n_copies");
    if (n < 1) detail::config_fail("/n_copies", "must be >= 1");
    cov.n_copies = static_cast<int>(n);
  }
  return cov;
}

// ---------------------------------------------------------------------------
// File helpers
// ---------------------------------------------------------------------------

inline Json read_json_file(const std::string& file_path) {
  std::ifstream in(file_path, std::ios::binary);
  if (!in) throw ConfigError("cannot open \"" + file_path + "\" for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("\"" + file_path + "\": " + e.what());
  }
}

inline void write_text_file(const std::string& file_path, const std::string& content) {
  std::ofstream out(file_path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open \"" + file_path + "\" for writing");
  out << content;
  if (!out) throw ConfigError("failed writing \"" + file_path + "\"");
}

inline std::string dump_pretty(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qig
