#pragma once

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qig/circuit.hpp"
#include "qig/errors.hpp"
#include "qig/estimators.hpp"
#include "qig/info_matrix.hpp"
#include "qig/linalg.hpp"
#include "qig/thermal.hpp"

namespace qig {

/// C(phi) = Tr[O rho(phi)].
inline double cost(const PauliSum& observable, const Circuit& c,
                   const std::vector<double>& phi, const ThermalState& st) {
  if (observable.n_qubits() != c.n_qubits()) {
    throw std::invalid_argument("cost: observable qubit count does not match circuit");
  }
  Complex v = (observable.to_matrix() * evolve(c, phi, st.rho)).trace();
  return v.real();
}

/// dC/dphi_j = Tr[O d_j rho(phi)] with the commutator form of the state
/// derivative; one evolved state and one suffix sweep, no finite differences.
inline std::vector<double> cost_gradient(const PauliSum& observable, const Circuit& c,
                                         const std::vector<double>& phi,
                                         const ThermalState& st) {
  check_parameters(c, phi);
  if (observable.n_qubits() != c.n_qubits()) {
    throw std::invalid_argument("cost_gradient: observable qubit count mismatch");
  }
  const int nl = c.n_layers();
  const ComplexMatrix obs = observable.to_matrix();
  const ComplexMatrix evolved = evolve(c, phi, st.rho);
  std::vector<double> grad(nl);
  // Suffix products U_{L_{j+1}} built from the top layer downward.
  ComplexMatrix ul = ComplexMatrix::Identity(c.dim(), c.dim());
  for (int j = nl; j >= 1; --j) {
    ComplexMatrix lifted = ul * c.layer(j).generator.to_matrix() * ul.adjoint();
    Complex v = (obs * (Complex(0, 1) * commutator(evolved, lifted))).trace();
    grad[j - 1] = v.real();
    ul = ul * layer_unitary(c.layer(j), phi[j - 1]);
  }
  return grad;
}

inline std::vector<double> gd_step(const std::vector<double>& phi,
                                   const std::vector<double>& grad, double learning_rate) {
  if (phi.size() != grad.size()) {
    throw std::invalid_argument("gd_step: gradient length does not match parameters");
  }
  std::vector<double> next(phi.size());
  for (std::size_t m = 0; m < phi.size(); ++m) next[m] = phi[m] - learning_rate * grad[m];
  return next;
}

struct NgStep {
  std::vector<double> phi_next;
  double metric_condition;
};

/// Natural-gradient step phi - mu (M + lambda I)^{-1} grad via a symmetric
/// positive-definite solve. With M = I and lambda = 0 this reproduces
/// gd_step to solver round-off.
inline NgStep ng_step(const std::vector<double>& phi, const std::vector<double>& grad,
                      const RealMatrix& metric, double learning_rate, double lambda_reg) {
  const Eigen::Index nl = static_cast<Eigen::Index>(phi.size());
  if (grad.size() != phi.size()) {
    throw std::invalid_argument("ng_step: gradient length does not match parameters");
  }
  if (metric.rows() != nl || metric.cols() != nl) {
    throw std::invalid_argument("ng_step: metric dimension does not match parameters");
  }
  if (lambda_reg < 0) throw std::invalid_argument("ng_step: negative regularization");
  RealMatrix m = (metric + metric.transpose()) / 2.0;
  m.diagonal().array() += lambda_reg;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(m);
  const double w_min = eig.eigenvalues().minCoeff();
  const double w_max = eig.eigenvalues().maxCoeff();
  if (!(w_min > 0)) {
    throw NumericalError(
        "ng_step: regularized metric is not positive definite; "
        "increase the regularization lambda_reg");
  }
  Eigen::Map<const RealVector> g(grad.data(), nl);
  RealVector direction = Eigen::LDLT<RealMatrix>(m).solve(g);
  const double residual = (m * direction - g).norm();
  if (residual > 1e-8 * std::max(1.0, g.norm())) {
    throw NumericalError(
        "ng_step: metric solve residual " + std::to_string(residual) +
        "; the metric is near-singular, increase lambda_reg");
  }
  std::vector<double> next(phi.size());
  for (std::size_t k = 0; k < phi.size(); ++k) {
    next[k] = phi[k] - learning_rate * direction(static_cast<Eigen::Index>(k));
  }
  return NgStep{std::move(next), w_max / w_min};
}

/// Replace eigenvalues below `floor` by `floor`; shot noise can push an
/// estimated metric slightly indefinite.
inline RealMatrix clip_eigenvalues(const RealMatrix& m, double floor) {
  RealMatrix sym = (m + m.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
  RealVector w = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * w.asDiagonal() * eig.eigenvectors().transpose();
}

enum class MetricSource { ExactSpectral, ExactClosedForm, Estimated, Euclidean };

inline std::string to_string(MetricSource s) {
  switch (s) {
    case MetricSource::ExactSpectral: return "exact_spectral";
    case MetricSource::ExactClosedForm: return "exact_closed_form";
    case MetricSource::Estimated: return "estimated";
    case MetricSource::Euclidean: return "euclidean";
  }
  throw std::logic_error("unreachable");
}

struct OptimizerConfig {
  double learning_rate = 0.05;
  MatrixKind metric_kind = MatrixKind::FB;
  MetricSource metric_source = MetricSource::Euclidean;
  double lambda_reg = 1e-8;
  int max_iters = 50;
  double grad_tol = 1e-8;
  EstimatorConfig estimator;  // used when metric_source == Estimated
};

inline void validate(const OptimizerConfig& cfg) {
  if (!(cfg.learning_rate > 0)) throw ConfigError("optimizer.learning_rate must be > 0");
  if (cfg.lambda_reg < 0) throw ConfigError("optimizer.lambda_reg must be >= 0");
  if (cfg.max_iters < 0) throw ConfigError("optimizer.max_iters must be >= 0");
  if (cfg.grad_tol < 0) throw ConfigError("optimizer.grad_tol must be >= 0");
}

struct IterationRecord {
  int iter = 0;
  std::vector<double> phi;
  double cost_value = 0;
  double grad_norm = 0;
  double metric_condition = 1.0;
  double wall_seconds = 0;  // in-memory only, not serialized
};

using OptimizationTrace = std::vector<IterationRecord>;

namespace detail {

inline RealMatrix optimizer_metric(const OptimizerConfig& cfg, const Circuit& c,
                                   const std::vector<double>& phi, const ThermalState& st,
                                   int iter) {
  switch (cfg.metric_source) {
    case MetricSource::Euclidean:
      return RealMatrix::Identity(c.n_layers(), c.n_layers());
    case MetricSource::ExactSpectral:
      return spectral_info_matrix(cfg.metric_kind, c, phi, st).values;
    case MetricSource::ExactClosedForm:
      return closed_form_info_matrix(cfg.metric_kind, c, phi, st).values;
    case MetricSource::Estimated: {
      EstimatorConfig shot_cfg = cfg.estimator;
      // Fresh shot noise each iteration, still reproducible from one seed.
      shot_cfg.seed = ShotRng(cfg.estimator.seed)
                          .substream(0xA11CE + static_cast<std::uint64_t>(iter))
                          .next_u64();
      RealMatrix raw = estimated_info_matrix(cfg.metric_kind, c, phi, st, shot_cfg).values;
      return clip_eigenvalues(raw, -cfg.lambda_reg);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Gradient descent (euclidean source) or natural gradient descent on
/// C(phi) = Tr[O rho(phi)]; the metric is recomputed at every iterate. The
/// trace records every visited iterate including the final one, whose
/// metric_condition refers to the metric evaluated at that point.
inline OptimizationTrace optimize(const PauliSum& observable, const Circuit& c,
                                  std::vector<double> phi, const ThermalState& st,
                                  const OptimizerConfig& cfg) {
  validate(cfg);
  check_parameters(c, phi);
  OptimizationTrace trace;
  const auto t0 = std::chrono::steady_clock::now();
  for (int iter = 0;; ++iter) {
    const std::vector<double> grad = cost_gradient(observable, c, phi, st);
    double grad_norm = 0;
    for (double g : grad) grad_norm += g * g;
    grad_norm = std::sqrt(grad_norm);

    IterationRecord rec;
    rec.iter = iter;
    rec.phi = phi;
    rec.cost_value = cost(observable, c, phi, st);
    rec.grad_norm = grad_norm;

    const bool done = iter >= cfg.max_iters || grad_norm < cfg.grad_tol;
    if (cfg.metric_source == MetricSource::Euclidean) {
      rec.metric_condition = 1.0;
      if (!done) phi = gd_step(phi, grad, cfg.learning_rate);
    } else {
      try {
        RealMatrix metric = detail::optimizer_metric(cfg, c, phi, st, iter);
        NgStep step = ng_step(phi, grad, metric, cfg.learning_rate, cfg.lambda_reg);
        rec.metric_condition = step.metric_condition;
        if (!done) phi = std::move(step.phi_next);
      } catch (const NumericalError& e) {
        throw NumericalError("iteration " + std::to_string(iter) + ": " + e.what());
      }
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace.push_back(std::move(rec));
    if (done) break;
  }
  return trace;
}

/// Cramer-Rao check for n independent copies: the bound
/// Cov >= (1/n) F^{-1} holds iff the block matrix [[Cov, I], [I, n F]] is
/// PSD. Both the block eigenvalue and the direct-difference eigenvalue are
/// reported; `satisfied` follows the block form.
struct CrbReport {
  int n_copies = 1;
  double min_eig_block = 0;
  double min_eig_direct = 0;
  bool satisfied = false;
};

inline CrbReport crb_check(const RealMatrix& covariance, const RealMatrix& fisher,
                           int n_copies, double tol = 1e-8) {
  const Eigen::Index nl = fisher.rows();
  if (fisher.cols() != nl || covariance.rows() != nl || covariance.cols() != nl) {
    throw std::invalid_argument("crb_check: matrix dimensions do not match");
  }
  if (n_copies < 1) throw std::invalid_argument("crb_check: n_copies must be >= 1");
  const double cov_scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-8 * cov_scale) {
    throw std::invalid_argument("crb_check: covariance is not symmetric");
  }
  RealMatrix block(2 * nl, 2 * nl);
  block.topLeftCorner(nl, nl) = (covariance + covariance.transpose()) / 2.0;
  block.topRightCorner(nl, nl) = RealMatrix::Identity(nl, nl);
  block.bottomLeftCorner(nl, nl) = RealMatrix::Identity(nl, nl);
  block.bottomRightCorner(nl, nl) =
      static_cast<double>(n_copies) * (fisher + fisher.transpose()) / 2.0;
  Eigen::SelfAdjointEigenSolver<RealMatrix> beig(block);

  Eigen::SelfAdjointEigenSolver<RealMatrix> feig((fisher + fisher.transpose()) / 2.0);
  if (!(feig.eigenvalues().minCoeff() >
        1e-12 * std::max(1.0, feig.eigenvalues().maxCoeff()))) {
    throw NumericalError("crb_check: Fisher matrix is singular, the direct "
                         "inverse form is unavailable");
  }
  RealMatrix inv = feig.eigenvectors() *
                   feig.eigenvalues().cwiseInverse().asDiagonal() *
                   feig.eigenvectors().transpose();
  RealMatrix direct = block.topLeftCorner(nl, nl) - inv / static_cast<double>(n_copies);
  Eigen::SelfAdjointEigenSolver<RealMatrix> deig(direct);

  CrbReport rep;
  rep.n_copies = n_copies;
  rep.min_eig_block = beig.eigenvalues().minCoeff();
  rep.min_eig_direct = deig.eigenvalues().minCoeff();
  rep.satisfied = rep.min_eig_block >= -tol;
  return rep;
}

/// Ordering of the three metrics: KM >= WY >= FB >= WY/2 in the Loewner
/// sense; reports the smallest eigenvalue of each difference.
struct LoewnerReport {
  double min_eig_km_minus_wy = 0;
  double min_eig_wy_minus_fb = 0;
  double min_eig_fb_minus_half_wy = 0;
  bool satisfied = false;
};

inline LoewnerReport loewner_chain_check(const RealMatrix& fb, const RealMatrix& wy,
                                         const RealMatrix& km, double tol = 1e-8) {
  auto min_eig = [](const RealMatrix& m) {
    RealMatrix sym = (m + m.transpose()) / 2.0;
    return Eigen::SelfAdjointEigenSolver<RealMatrix>(sym).eigenvalues().minCoeff();
  };
  LoewnerReport rep;
  rep.min_eig_km_minus_wy = min_eig(km - wy);
  rep.min_eig_wy_minus_fb = min_eig(wy - fb);
  rep.min_eig_fb_minus_half_wy = min_eig(fb - wy / 2.0);
  rep.satisfied = rep.min_eig_km_minus_wy >= -tol && rep.min_eig_wy_minus_fb >= -tol &&
                  rep.min_eig_fb_minus_half_wy >= -tol;
  return rep;
}

}  // namespace qig
