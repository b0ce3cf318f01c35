#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qig/circuit.hpp"
#include "qig/errors.hpp"
#include "qig/info_matrix.hpp"
#include "qig/linalg.hpp"
#include "qig/rng.hpp"
#include "qig/sampling.hpp"
#include "qig/thermal.hpp"

namespace qig {

struct EstimatorConfig {
  double epsilon = 0.1;
  double delta = 0.05;
  long long shots = 0;  // 0 derives the count from (epsilon, delta)
  std::uint64_t seed = 0;
  // Shot rule using the parameter one-norm in place of the per-shot range.
  // Kept for compatibility; the range-based rule is the default because the
  // guarantee must scale with what a shot can actually return.
  bool one_norm_shot_rule = false;
};

inline void validate(const EstimatorConfig& cfg) {
  if (!(cfg.epsilon > 0)) throw ConfigError("estimator.epsilon must be > 0");
  if (!(cfg.delta > 0 && cfg.delta < 1)) throw ConfigError("estimator.delta must be in (0, 1)");
  if (cfg.shots < 0) throw ConfigError("estimator.shots must be >= 0");
}

/// Hoeffding count N = ceil(2 R^2 ln(2/delta) / epsilon^2) for per-shot
/// values in [-R, R]; an explicit shot override wins.
inline long long default_shot_count(const EstimatorConfig& cfg, double range_bound,
                                    const std::vector<double>& phi = {}) {
  validate(cfg);
  if (cfg.shots > 0) return cfg.shots;
  const double r = cfg.one_norm_shot_rule ? parameter_one_norm(phi) : range_bound;
  const double n = std::ceil(2.0 * r * r * std::log(2.0 / cfg.delta) /
                             (cfg.epsilon * cfg.epsilon));
  return std::max(1LL, static_cast<long long>(n));
}

/// One measured shot: ancilla bits b and c, the sampled eigenvalue lam, and
/// the evolution time t (NaN for circuits without a time parameter).
struct ShotRecord {
  int b = 0;
  int c = 0;
  double lam = 1.0;
  double t = std::numeric_limits<double>::quiet_NaN();
};

struct OutcomeProbability {
  ShotRecord outcome;
  double probability;
  double value;  // unscaled per-shot estimate contributed by this outcome
};

using OutcomeTable = std::vector<OutcomeProbability>;

/// Which estimation circuit a distribution or shot stream refers to.
///   FbTwoAncilla:     two ancillas, controlled A_i, e^{-iGt}, controlled A_j
///   KmTwoAncilla:     the same circuit without the time evolution
///   WyAnticommutator: one ancilla, measures (1/2) <{A_i, A_j}>_rho
///   WyPurified:       purification register pair, measures
///                     Tr[A_i sqrt(rho) A_j sqrt(rho)]
enum class EstimationCircuit { FbTwoAncilla, KmTwoAncilla, WyAnticommutator, WyPurified };

struct HadamardTestSpec {
  EstimationCircuit circuit = EstimationCircuit::KmTwoAncilla;
  int i = 1;           // layer index of the first controlled generator
  int j = 1;           // layer index of the second controlled generator
  int pauli_term = 0;  // index into the Hamiltonian terms (two-ancilla circuits)
  double time = 0.0;   // evolution time (FbTwoAncilla only)
};

namespace detail {

inline void require_estimator_compatible(const Circuit& c) {
  if (!c.estimator_compatible()) {
    throw CapabilityError(
        "shot estimation requires every layer generator to be a single Pauli "
        "string with coefficient +1 or -1, so the controlled generator is a gate");
  }
}

inline const ComplexMatrix& pauli_proj(bool one) {
  static const ComplexMatrix p0 = (ComplexMatrix(2, 2) << 1, 0, 0, 0).finished();
  static const ComplexMatrix p1 = (ComplexMatrix(2, 2) << 0, 0, 0, 1).finished();
  return one ? p1 : p0;
}

inline ComplexMatrix hadamard_2x2() {
  const double s = 1.0 / std::sqrt(2.0);
  return (ComplexMatrix(2, 2) << s, s, s, -s).finished();
}

/// S * Had |1>, the ancilla state after the preparation column.
inline ComplexMatrix ancilla_prep() {
  ComplexMatrix s = (ComplexMatrix(2, 2) << 1, 0, 0, Complex(0, 1)).finished();
  return s * hadamard_2x2();
}

inline void check_spec(const HadamardTestSpec& spec, const Circuit& c,
                       const ThermalState& st) {
  if (spec.i < 1 || spec.i > c.n_layers() || spec.j < 1 || spec.j > c.n_layers()) {
    throw std::invalid_argument("hadamard test: layer index out of range");
  }
  const bool two_ancilla = spec.circuit == EstimationCircuit::FbTwoAncilla ||
                           spec.circuit == EstimationCircuit::KmTwoAncilla;
  if (two_ancilla) {
    if (st.hamiltonian.empty()) {
      throw CapabilityError("two-ancilla estimation needs a nonempty Hamiltonian");
    }
    if (spec.pauli_term < 0 ||
        spec.pauli_term >= static_cast<int>(st.hamiltonian.terms().size())) {
      throw std::invalid_argument("hadamard test: Pauli term index out of range");
    }
  }
}

inline double clip_probability(double p, const char* where) {
  if (p < -1e-12) {
    throw NumericalError(std::string(where) + ": negative outcome probability");
  }
  return std::max(p, 0.0);
}

}  // namespace detail

/// Exact joint outcome distribution of one estimation circuit, computed by
/// dense density-matrix simulation of the literal gate sequence. The per-shot
/// value of an outcome is (-1)^b (-1)^c lam for the interferometric circuits
/// and lam = h1 h2 for the purified one.
inline OutcomeTable hadamard_test_distribution(const HadamardTestSpec& spec,
                                               const Circuit& c,
                                               const std::vector<double>& phi,
                                               const ThermalState& st) {
  detail::require_estimator_compatible(c);
  detail::check_spec(spec, c, st);
  check_parameters(c, phi);
  const Eigen::Index d = c.dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix hi = c.layer(spec.i).generator.to_matrix();
  const ComplexMatrix hj = c.layer(spec.j).generator.to_matrix();
  const ComplexMatrix uri = partial_right(c, phi, spec.i);
  const ComplexMatrix urj = partial_right(c, phi, spec.j);
  OutcomeTable table;

  switch (spec.circuit) {
    case EstimationCircuit::FbTwoAncilla:
    case EstimationCircuit::KmTwoAncilla: {
      const ComplexMatrix prep = detail::ancilla_prep();
      const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
      ComplexMatrix anc = prep.col(1) * prep.col(1).adjoint();  // from |1>
      ComplexMatrix sigma = kron(kron(anc, anc), st.rho);
      auto lift = [&](const ComplexMatrix& u) { return kron(ComplexMatrix::Identity(4, 4), u); };
      auto apply = [&](const ComplexMatrix& g) { sigma = g * sigma * g.adjoint(); };
      apply(lift(uri));
      apply(kron(kron(detail::pauli_proj(false), i2), id) +
            kron(kron(detail::pauli_proj(true), i2), hi));
      apply(lift(uri.adjoint()));
      if (spec.circuit == EstimationCircuit::FbTwoAncilla) {
        apply(lift(evolution_unitary(st.g_eigen, spec.time)));
      }
      apply(lift(urj));
      apply(kron(kron(i2, detail::pauli_proj(false)), id) +
            kron(kron(i2, detail::pauli_proj(true)), hj));
      apply(lift(urj.adjoint()));
      apply(kron(kron(detail::hadamard_2x2(), detail::hadamard_2x2()), id));

      const auto& term = st.hamiltonian.terms()[spec.pauli_term];
      const double sign = term.coeff >= 0 ? 1.0 : -1.0;
      const ComplexMatrix gk = sign * term.pauli.to_matrix();
      const double t_rec = spec.circuit == EstimationCircuit::FbTwoAncilla
                               ? spec.time
                               : std::numeric_limits<double>::quiet_NaN();
      for (int b = 0; b <= 1; ++b) {
        for (int cb = 0; cb <= 1; ++cb) {
          for (double lam : {1.0, -1.0}) {
            ComplexMatrix meas = kron(kron(detail::pauli_proj(b), detail::pauli_proj(cb)),
                                      (id + lam * gk) / 2.0);
            double p = detail::clip_probability((meas * sigma).trace().real(),
                                                "hadamard_test_distribution");
            double value = (b ? -1.0 : 1.0) * (cb ? -1.0 : 1.0) * lam;
            table.push_back({ShotRecord{b, cb, lam, t_rec}, p, value});
          }
        }
      }
      break;
    }
    case EstimationCircuit::WyAnticommutator: {
      const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
      const ComplexMatrix had = detail::hadamard_2x2();
      ComplexMatrix anc = had.col(0) * had.col(0).adjoint();  // Had |0> = |+>
      ComplexMatrix sigma = kron(anc, st.rho);
      auto lift = [&](const ComplexMatrix& u) { return kron(i2, u); };
      auto apply = [&](const ComplexMatrix& g) { sigma = g * sigma * g.adjoint(); };
      apply(lift(urj));
      apply(kron(detail::pauli_proj(false), id) + kron(detail::pauli_proj(true), hj));
      apply(lift(urj.adjoint()));
      apply(lift(uri));
      apply(kron(had, id));
      for (int b = 0; b <= 1; ++b) {
        for (double h : {1.0, -1.0}) {
          ComplexMatrix meas = kron(detail::pauli_proj(b), (id + h * hi) / 2.0);
          double p = detail::clip_probability((meas * sigma).trace().real(),
                                              "hadamard_test_distribution");
          double value = (b ? -1.0 : 1.0) * h;
          table.push_back({ShotRecord{b, 0, h, std::numeric_limits<double>::quiet_NaN()},
                           p, value});
        }
      }
      break;
    }
    case EstimationCircuit::WyPurified: {
      // (U_{R_i} (x) conj(U_{R_j})) |psi> on the purification of the initial
      // thermal state; as a d x d amplitude matrix that is
      // U_{R_i} sqrt(rho) U_{R_j}^dag. Both registers are then measured in
      // the generator eigenbases; the per-shot value is the product h1 h2.
      ComplexMatrix amp = uri * st.sqrt_rho * urj.adjoint();
      for (double h1 : {1.0, -1.0}) {
        for (double h2 : {1.0, -1.0}) {
          ComplexMatrix p1 = (id + h1 * hi) / 2.0;
          ComplexMatrix p2t = (id + h2 * hj) / 2.0;  // transpose of (id + h2 conj(hj))/2
          double p = detail::clip_probability(
              (amp.adjoint() * p1 * amp * p2t).trace().real(),
              "hadamard_test_distribution");
          table.push_back({ShotRecord{h1 < 0 ? 1 : 0, h2 < 0 ? 1 : 0, h1 * h2,
                                      std::numeric_limits<double>::quiet_NaN()},
                           p, h1 * h2});
        }
      }
      break;
    }
  }

  double total = 0;
  for (const auto& row : table) total += row.probability;
  if (std::abs(total - 1.0) > 1e-9) {
    throw NumericalError("hadamard_test_distribution: probabilities sum to " +
                         std::to_string(total));
  }
  return table;
}

namespace detail {

/// Shot sampler for the two-ancilla circuits. Probabilities are reduced once
/// to per-term coefficient matrices K_s with
///   P_s(t) = Re sum_{p,q} K_s[p, q] exp(-i (mu_p - mu_q) t),
/// so drawing a shot at a fresh time t costs O(d^2) instead of a circuit
/// simulation. The reduction uses that (I (x) U_R^dag)(ctrl-H)(I (x) U_R) is
/// exactly ctrl-(U_R^dag H U_R), i.e. the controlled Heisenberg generator.
class TwoAncillaSampler {
 public:
  TwoAncillaSampler(const Circuit& c, const std::vector<double>& phi,
                    const ThermalState& st, int i, int j, bool with_time)
      : with_time_(with_time), mu_(st.g_eigen.eigenvalues) {
    require_estimator_compatible(c);
    check_parameters(c, phi);
    if (st.hamiltonian.empty() || st.hamiltonian.one_norm() <= 0) {
      throw CapabilityError("two-ancilla estimation needs a Hamiltonian with "
                            "nonzero one-norm to sample measurement terms");
    }
    const Eigen::Index d = c.dim();
    const ComplexMatrix& w = st.g_eigen.eigenvectors;
    auto gens = all_heisenberg_generators(c, phi);
    ComplexMatrix ai = w.adjoint() * gens[i - 1] * w;  // rotated to the G eigenbasis
    ComplexMatrix aj = w.adjoint() * gens[j - 1] * w;

    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
    const ComplexMatrix prep = ancilla_prep();
    ComplexMatrix anc = prep.col(1) * prep.col(1).adjoint();
    ComplexMatrix ctrl_i =
        kron(kron(pauli_proj(false), i2), id) + kron(kron(pauli_proj(true), i2), ai);
    ComplexMatrix chi =
        kron(kron(anc, anc), ComplexMatrix(st.lambdas.cast<Complex>().asDiagonal()));
    chi = ctrl_i * chi * ctrl_i.adjoint();

    ComplexMatrix ctrl_j =
        kron(kron(i2, pauli_proj(false)), id) + kron(kron(i2, pauli_proj(true)), aj);
    ComplexMatrix second =
        kron(kron(hadamard_2x2(), hadamard_2x2()), id) * ctrl_j;

    // Measurement weights per Hamiltonian term and per (b, c) ancilla pair:
    // M = second^dag (proj_b (x) proj_c (x) (I + lam sign G_k)/2) second.
    // Only the system-diagonal blocks enter P_s(t); aggregate them into K_s.
    const auto& terms = st.hamiltonian.terms();
    term_weight_.reserve(terms.size());
    double norm = st.hamiltonian.one_norm();
    one_norm_ = norm;
    for (const auto& term : terms) term_weight_.push_back(std::abs(term.coeff) / norm);
    coeff_.resize(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double sign = terms[k].coeff >= 0 ? 1.0 : -1.0;
      ComplexMatrix gk = w.adjoint() * (sign * terms[k].pauli.to_matrix()) * w;
      coeff_[k].reserve(8);
      for (int b = 0; b <= 1; ++b) {
        for (int cb = 0; cb <= 1; ++cb) {
          for (double lam : {1.0, -1.0}) {
            ComplexMatrix meas = kron(kron(pauli_proj(b), pauli_proj(cb)),
                                      (id + lam * gk) / 2.0);
            ComplexMatrix m = second.adjoint() * meas * second;
            ComplexMatrix ks = ComplexMatrix::Zero(d, d);
            for (Eigen::Index p = 0; p < d; ++p)
              for (Eigen::Index q = 0; q < d; ++q)
                for (Eigen::Index av = 0; av < 4; ++av)
                  for (Eigen::Index au = 0; au < 4; ++au)
                    ks(p, q) += m(au * d + q, av * d + p) * chi(av * d + p, au * d + q);
            coeff_[k].push_back(std::move(ks));
          }
        }
      }
    }
  }

  double scale() const { return 4.0 * one_norm_; }

  /// Probabilities of the 8 outcomes for term k at time t, in the fixed
  /// order (b, c, lam) = (0,0,+),(0,0,-),(0,1,+),...
  std::array<double, 8> probabilities(int k, double t) const {
    const Eigen::Index d = mu_.size();
    ComplexVector z(d);
    for (Eigen::Index p = 0; p < d; ++p) z(p) = std::exp(Complex(0, -mu_(p) * t));
    std::array<double, 8> out{};
    for (int s = 0; s < 8; ++s) {
      // sum_{p,q} K[p,q] z_p conj(z_q) written as z^dag (K^T z)
      Complex v = z.dot(coeff_[k][s].transpose() * z);
      out[s] = clip_probability(v.real(), "TwoAncillaSampler");
    }
    return out;
  }

  /// Draw order per shot: evolution time (when present), Hamiltonian term,
  /// then the joint outcome.
  ShotRecord sample(ShotRng& rng) const {
    double t = 0.0;
    if (with_time_) t = sample_high_peak_tent(rng);
    double u = rng.uniform();
    int k = static_cast<int>(term_weight_.size()) - 1;
    for (std::size_t m = 0; m < term_weight_.size(); ++m) {
      u -= term_weight_[m];
      if (u < 0) {
        k = static_cast<int>(m);
        break;
      }
    }
    auto probs = probabilities(k, t);
    double total = 0;
    for (double p : probs) total += p;
    if (std::abs(total - 1.0) > 1e-9) {
      throw NumericalError("TwoAncillaSampler: outcome probabilities sum to " +
                           std::to_string(total));
    }
    double pick = rng.uniform() * total;
    int s = 7;
    for (int m = 0; m < 8; ++m) {
      pick -= probs[m];
      if (pick < 0) {
        s = m;
        break;
      }
    }
    return ShotRecord{(s >> 2) & 1, (s >> 1) & 1, (s & 1) ? -1.0 : 1.0,
                      with_time_ ? t : std::numeric_limits<double>::quiet_NaN()};
  }

 private:
  bool with_time_;
  RealVector mu_;
  double one_norm_ = 0;
  std::vector<double> term_weight_;
  std::vector<std::vector<ComplexMatrix>> coeff_;  // [term][outcome] K matrices
};

/// Sampler over a fixed categorical outcome table.
class TableSampler {
 public:
  explicit TableSampler(OutcomeTable table) : table_(std::move(table)) {}

  const OutcomeTable& table() const { return table_; }

  const OutcomeProbability& sample(ShotRng& rng) const {
    double u = rng.uniform();
    std::size_t idx = table_.size() - 1;
    for (std::size_t m = 0; m < table_.size(); ++m) {
      u -= table_[m].probability;
      if (u < 0) {
        idx = m;
        break;
      }
    }
    return table_[idx];
  }

 private:
  OutcomeTable table_;
};

struct MeanAccumulator {
  long long n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  double std_error() const {
    if (n < 2) return 0.0;
    const double var = m2 / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

// Substream domains: one per (circuit role, i, j) so every estimate has an
// independent, reproducible shot stream.
inline std::uint64_t stream_domain(int role, int i, int j) {
  return (static_cast<std::uint64_t>(role) << 48) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 24) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
}

}  // namespace detail

struct EstimateResult {
  int i = 1;
  int j = 1;
  MatrixKind kind = MatrixKind::FB;
  double mean = 0;
  double std_error = 0;
  long long shots = 0;  // shots per circuit (the WY estimate runs two circuits)
  std::uint64_t seed = 0;
  bool degenerate_std_error = false;
  std::optional<double> exact;
};

/// Per-shot range bound R of the scaled single-shot estimate.
inline double shot_range_bound(MatrixKind kind, const ThermalState& st) {
  switch (kind) {
    case MatrixKind::FB:
    case MatrixKind::KM:
      return 4.0 * st.hamiltonian.one_norm();
    case MatrixKind::WY:
      return 8.0;  // each WY circuit returns a value in [-1, 1] scaled by 8
  }
  throw std::logic_error("unreachable");
}

/// Shot-sampled Fisher-Bures element: per shot draw t ~ p(t), a Hamiltonian
/// term, and a joint outcome; the estimate is 4 ||alpha||_1 times the mean of
/// (-1)^b (-1)^c lam.
inline EstimateResult estimate_fb(const Circuit& c, const std::vector<double>& phi,
                                  const ThermalState& st, int i, int j,
                                  const EstimatorConfig& cfg,
                                  std::vector<ShotRecord>* shot_log = nullptr) {
  detail::TwoAncillaSampler sampler(c, phi, st, i, j, /*with_time=*/true);
  const long long n = default_shot_count(cfg, shot_range_bound(MatrixKind::FB, st), phi);
  ShotRng base = ShotRng(cfg.seed).substream(detail::stream_domain(1, i, j));
  detail::MeanAccumulator acc;
  for (long long shot = 0; shot < n; ++shot) {
    ShotRng rng = base.substream(static_cast<std::uint64_t>(shot));
    ShotRecord rec = sampler.sample(rng);
    if (shot_log) shot_log->push_back(rec);
    acc.add((rec.b ? -1.0 : 1.0) * (rec.c ? -1.0 : 1.0) * rec.lam);
  }
  const double scale = sampler.scale();
  return EstimateResult{i, j, MatrixKind::FB, scale * acc.mean,
                        scale * acc.std_error(), n, cfg.seed, n < 2, std::nullopt};
}

/// Shot-sampled Kubo-Mori element: the same interferometric circuit without
/// the intermediate time evolution.
inline EstimateResult estimate_km(const Circuit& c, const std::vector<double>& phi,
                                  const ThermalState& st, int i, int j,
                                  const EstimatorConfig& cfg,
                                  std::vector<ShotRecord>* shot_log = nullptr) {
  detail::TwoAncillaSampler sampler(c, phi, st, i, j, /*with_time=*/false);
  const long long n = default_shot_count(cfg, shot_range_bound(MatrixKind::KM, st), phi);
  ShotRng base = ShotRng(cfg.seed).substream(detail::stream_domain(2, i, j));
  detail::MeanAccumulator acc;
  for (long long shot = 0; shot < n; ++shot) {
    ShotRng rng = base.substream(static_cast<std::uint64_t>(shot));
    ShotRecord rec = sampler.sample(rng);
    if (shot_log) shot_log->push_back(rec);
    acc.add((rec.b ? -1.0 : 1.0) * (rec.c ? -1.0 : 1.0) * rec.lam);
  }
  const double scale = sampler.scale();
  return EstimateResult{i, j, MatrixKind::KM, scale * acc.mean,
                        scale * acc.std_error(), n, cfg.seed, n < 2, std::nullopt};
}

/// Shot-sampled Wigner-Yanase element, combining the anticommutator circuit
/// (scaled by 8) and the purified-overlap circuit (scaled by -8); the two
/// standard errors add in quadrature.
inline EstimateResult estimate_wy(const Circuit& c, const std::vector<double>& phi,
                                  const ThermalState& st, int i, int j,
                                  const EstimatorConfig& cfg,
                                  std::vector<ShotRecord>* shot_log = nullptr) {
  detail::require_estimator_compatible(c);
  HadamardTestSpec spec1{EstimationCircuit::WyAnticommutator, i, j, 0, 0.0};
  HadamardTestSpec spec2{EstimationCircuit::WyPurified, i, j, 0, 0.0};
  detail::TableSampler term1(hadamard_test_distribution(spec1, c, phi, st));
  detail::TableSampler term2(hadamard_test_distribution(spec2, c, phi, st));
  const long long n = default_shot_count(cfg, shot_range_bound(MatrixKind::WY, st), phi);
  ShotRng base1 = ShotRng(cfg.seed).substream(detail::stream_domain(3, i, j));
  ShotRng base2 = ShotRng(cfg.seed).substream(detail::stream_domain(4, i, j));
  detail::MeanAccumulator acc1, acc2;
  for (long long shot = 0; shot < n; ++shot) {
    ShotRng rng = base1.substream(static_cast<std::uint64_t>(shot));
    const auto& row = term1.sample(rng);
    if (shot_log) shot_log->push_back(row.outcome);
    acc1.add(row.value);
  }
  for (long long shot = 0; shot < n; ++shot) {
    ShotRng rng = base2.substream(static_cast<std::uint64_t>(shot));
    const auto& row = term2.sample(rng);
    if (shot_log) shot_log->push_back(row.outcome);
    acc2.add(row.value);
  }
  const double mean = 8.0 * acc1.mean - 8.0 * acc2.mean;
  const double se1 = acc1.std_error(), se2 = acc2.std_error();
  const double se = 8.0 * std::sqrt(se1 * se1 + se2 * se2);
  return EstimateResult{i, j, MatrixKind::WY, mean, se, n, cfg.seed, n < 2, std::nullopt};
}

inline EstimateResult estimate_entry(MatrixKind kind, const Circuit& c,
                                     const std::vector<double>& phi,
                                     const ThermalState& st, int i, int j,
                                     const EstimatorConfig& cfg,
                                     std::vector<ShotRecord>* shot_log = nullptr) {
  switch (kind) {
    case MatrixKind::FB: return estimate_fb(c, phi, st, i, j, cfg, shot_log);
    case MatrixKind::WY: return estimate_wy(c, phi, st, i, j, cfg, shot_log);
    case MatrixKind::KM: return estimate_km(c, phi, st, i, j, cfg, shot_log);
  }
  throw std::logic_error("unreachable");
}

/// Full J x J estimated matrix: entries with i <= j are sampled on
/// independent substreams and mirrored.
inline InfoMatrix estimated_info_matrix(MatrixKind kind, const Circuit& c,
                                        const std::vector<double>& phi,
                                        const ThermalState& st,
                                        const EstimatorConfig& cfg) {
  const int nl = c.n_layers();
  RealMatrix values(nl, nl);
  for (int i = 1; i <= nl; ++i) {
    for (int j = i; j <= nl; ++j) {
      EstimateResult r = estimate_entry(kind, c, phi, st, i, j, cfg);
      values(i - 1, j - 1) = r.mean;
      values(j - 1, i - 1) = r.mean;
    }
  }
  return InfoMatrix{kind, Provenance::Estimated, values};
}

}  // namespace qig
