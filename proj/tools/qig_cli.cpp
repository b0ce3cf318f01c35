// Command-line driver: exact and shot-estimated information matrices of
// layered parameterized circuits on thermal states, natural-gradient
// optimization traces, Cramer-Rao bound checks, and a sampler diagnostic.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qig/qig.hpp>

namespace {

using qig::Json;

struct CliOptions {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long shots = 0;
  bool shots_set = false;
  bool with_exact = false;
  bool dump_shots = false;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    qig::write_text_file(out_path, text);
  }
}

std::string resolve_output(const CliOptions& opts, const qig::ExperimentConfig& cfg) {
  return !opts.output_path.empty() ? opts.output_path : cfg.output_path;
}

std::string resolve_format(const CliOptions& opts, const qig::ExperimentConfig& cfg) {
  if (!opts.format.empty()) return opts.format;
  return cfg.output_format;
}

void require_field(bool present, const std::string& path, const char* cmd) {
  if (!present) {
    throw qig::ConfigError(path + ": required by the \"" + std::string(cmd) +
                           "\" command");
  }
}

qig::ExperimentConfig load_config(const CliOptions& opts) {
  return qig::experiment_config_from_json(qig::read_json_file(opts.config_path));
}

std::vector<std::pair<int, int>> entry_pairs(const qig::ExperimentConfig& cfg) {
  if (!cfg.pairs.empty()) return cfg.pairs;
  std::vector<std::pair<int, int>> all;
  const int nl = cfg.circuit->n_layers();
  for (int i = 1; i <= nl; ++i)
    for (int j = i; j <= nl; ++j) all.emplace_back(i, j);
  return all;
}

std::string loewner_csv(const qig::LoewnerReport& rep) {
  std::ostringstream out;
  out << "min_eig_km_minus_wy,min_eig_wy_minus_fb,min_eig_fb_minus_half_wy,satisfied\n"
      << qig::csv_number(rep.min_eig_km_minus_wy) << ","
      << qig::csv_number(rep.min_eig_wy_minus_fb) << ","
      << qig::csv_number(rep.min_eig_fb_minus_half_wy) << "," << (rep.satisfied ? 1 : 0)
      << "\n";
  return out.str();
}

int cmd_exact(const CliOptions& opts) {
  qig::ExperimentConfig cfg = load_config(opts);
  require_field(cfg.hamiltonian.has_value(), "/hamiltonian", "exact");
  require_field(cfg.circuit.has_value(), "/circuit", "exact");
  require_field(!cfg.parameters.empty() ||
                    (cfg.circuit && cfg.circuit->n_layers() == 0),
                "/parameters", "exact");
  const qig::ThermalState st = qig::prepare_thermal(*cfg.hamiltonian);

  std::vector<qig::InfoMatrix> matrices;
  const qig::MatrixKind kinds[] = {qig::MatrixKind::FB, qig::MatrixKind::WY,
                                   qig::MatrixKind::KM};
  for (qig::MatrixKind kind : kinds) {
    qig::InfoMatrix closed =
        qig::closed_form_info_matrix(kind, *cfg.circuit, cfg.parameters, st);
    qig::InfoMatrix spectral =
        qig::spectral_info_matrix(kind, *cfg.circuit, cfg.parameters, st);
    const double gap = (closed.values - spectral.values).norm();
    if (gap > 1e-7 * std::max(1.0, spectral.values.norm())) {
      throw qig::NumericalError("closed-form and spectral " + qig::to_string(kind) +
                                " matrices disagree by " + std::to_string(gap));
    }
    matrices.push_back(std::move(closed));
    matrices.push_back(std::move(spectral));
  }
  qig::LoewnerReport chain = qig::loewner_chain_check(
      matrices[0].values, matrices[2].values, matrices[4].values);

  const std::string out_path = resolve_output(opts, cfg);
  if (resolve_format(opts, cfg) == "json") {
    Json doc;
    Json list = Json::array();
    for (const qig::InfoMatrix& m : matrices) list.push_back(qig::to_json(m));
    doc["matrices"] = std::move(list);
    doc["loewner"] = qig::to_json(chain);
    emit(qig::dump_pretty(doc), out_path);
  } else {
    std::string text;
    for (const qig::InfoMatrix& m : matrices) text += qig::info_matrix_csv(m) + "\n";
    text += loewner_csv(chain);
    emit(text, out_path);
  }
  return 0;
}

std::string shot_log_path(const std::string& out_path, qig::MatrixKind kind, int i,
                          int j) {
  std::string stem = out_path;
  const std::size_t dot = stem.find_last_of('.');
  const std::size_t sep = stem.find_last_of('/');
  if (dot != std::string::npos && (sep == std::string::npos || dot > sep)) {
    stem.resize(dot);
  }
  return stem + "." + qig::to_string(kind) + "." + std::to_string(i) + "_" +
         std::to_string(j) + ".shots.csv";
}

int cmd_estimate(const CliOptions& opts) {
  qig::ExperimentConfig cfg = load_config(opts);
  require_field(cfg.hamiltonian.has_value(), "/hamiltonian", "estimate");
  require_field(cfg.circuit.has_value(), "/circuit", "estimate");
  require_field(!cfg.parameters.empty(), "/parameters", "estimate");
  require_field(cfg.estimator.has_value(), "/estimator", "estimate");
  qig::EstimatorConfig est = *cfg.estimator;
  if (opts.seed_set) est.seed = opts.seed;
  if (opts.shots_set) {
    if (opts.shots < 1) throw qig::ConfigError("--shots must be a positive count");
    est.shots = opts.shots;
  }
  const std::string out_path = resolve_output(opts, cfg);
  if (opts.dump_shots && out_path.empty()) {
    throw qig::ConfigError("--dump-shots requires --output (or output_path in the "
                           "config) so the shot logs have a filename stem");
  }
  const qig::ThermalState st = qig::prepare_thermal(*cfg.hamiltonian);

  std::vector<qig::EstimateResult> results;
  for (qig::MatrixKind kind : cfg.kinds) {
    qig::InfoMatrix exact;
    if (opts.with_exact) {
      exact = qig::spectral_info_matrix(kind, *cfg.circuit, cfg.parameters, st);
    }
    for (const auto& [i, j] : entry_pairs(cfg)) {
      std::vector<qig::ShotRecord> shot_log;
      qig::EstimateResult r = qig::estimate_entry(
          kind, *cfg.circuit, cfg.parameters, st, i, j, est,
          opts.dump_shots ? &shot_log : nullptr);
      if (opts.with_exact) r.exact = exact.values(i - 1, j - 1);
      if (opts.dump_shots) {
        qig::write_text_file(shot_log_path(out_path, kind, i, j),
                             qig::shot_log_csv(shot_log));
      }
      results.push_back(std::move(r));
    }
  }

  if (resolve_format(opts, cfg) == "json") {
    Json list = Json::array();
    for (const qig::EstimateResult& r : results) list.push_back(qig::to_json(r));
    emit(qig::dump_pretty(list), out_path);
  } else {
    emit(qig::estimate_results_csv(results, opts.with_exact), out_path);
  }
  return 0;
}

int cmd_optimize(const CliOptions& opts) {
  qig::ExperimentConfig cfg = load_config(opts);
  require_field(cfg.hamiltonian.has_value(), "/hamiltonian", "optimize");
  require_field(cfg.circuit.has_value(), "/circuit", "optimize");
  require_field(!cfg.parameters.empty(), "/parameters", "optimize");
  require_field(cfg.observable.has_value(), "/observable", "optimize");
  require_field(cfg.optimizer.has_value(), "/optimizer", "optimize");
  qig::OptimizerConfig opt = *cfg.optimizer;
  if (opts.seed_set) opt.estimator.seed = opts.seed;
  const qig::ThermalState st = qig::prepare_thermal(*cfg.hamiltonian);

  qig::OptimizationTrace trace =
      qig::optimize(*cfg.observable, *cfg.circuit, cfg.parameters, st, opt);

  const std::string out_path = resolve_output(opts, cfg);
  emit(resolve_format(opts, cfg) == "json" ? qig::trace_jsonl(trace)
                                           : qig::trace_csv(trace),
       out_path);
  std::cerr << "final cost " << qig::csv_number(trace.back().cost_value) << " after "
            << trace.back().iter << " iterations\n";
  return 0;
}

int cmd_crb(const CliOptions& opts) {
  qig::ExperimentConfig cfg = load_config(opts);
  require_field(cfg.hamiltonian.has_value(), "/hamiltonian", "crb");
  require_field(cfg.circuit.has_value(), "/circuit", "crb");
  require_field(!cfg.parameters.empty(), "/parameters", "crb");
  require_field(!cfg.covariance_path.empty(), "/covariance", "crb");
  qig::CovarianceInput cov =
      qig::covariance_from_json(qig::read_json_file(cfg.covariance_path));
  if (cov.values.rows() != cfg.circuit->n_layers()) {
    throw qig::ConfigError("/covariance: matrix is " +
                           std::to_string(cov.values.rows()) + "x" +
                           std::to_string(cov.values.cols()) + ", circuit has " +
                           std::to_string(cfg.circuit->n_layers()) + " parameters");
  }
  const int n_copies = cov.n_copies.value_or(cfg.n_copies);
  const qig::ThermalState st = qig::prepare_thermal(*cfg.hamiltonian);

  qig::InfoMatrix fb =
      qig::spectral_info_matrix(qig::MatrixKind::FB, *cfg.circuit, cfg.parameters, st);
  qig::InfoMatrix wy =
      qig::spectral_info_matrix(qig::MatrixKind::WY, *cfg.circuit, cfg.parameters, st);
  qig::InfoMatrix km =
      qig::spectral_info_matrix(qig::MatrixKind::KM, *cfg.circuit, cfg.parameters, st);
  auto matrix_for = [&](qig::MatrixKind kind) -> const qig::RealMatrix& {
    switch (kind) {
      case qig::MatrixKind::FB: return fb.values;
      case qig::MatrixKind::WY: return wy.values;
      case qig::MatrixKind::KM: return km.values;
    }
    throw std::logic_error("unreachable");
  };
  qig::LoewnerReport chain = qig::loewner_chain_check(fb.values, wy.values, km.values);

  const std::string out_path = resolve_output(opts, cfg);
  if (resolve_format(opts, cfg) == "json") {
    Json doc;
    Json crb = Json::object();
    for (qig::MatrixKind kind : cfg.kinds) {
      crb[qig::to_string(kind)] =
          qig::to_json(qig::crb_check(cov.values, matrix_for(kind), n_copies));
    }
    doc["crb"] = std::move(crb);
    doc["loewner"] = qig::to_json(chain);
    doc["n_copies"] = n_copies;
    emit(qig::dump_pretty(doc), out_path);
  } else {
    std::ostringstream text;
    text << "kind,n_copies,min_eig_block,min_eig_direct,satisfied\n";
    for (qig::MatrixKind kind : cfg.kinds) {
      qig::CrbReport rep = qig::crb_check(cov.values, matrix_for(kind), n_copies);
      text << qig::to_string(kind) << "," << rep.n_copies << ","
           << qig::csv_number(rep.min_eig_block) << ","
           << qig::csv_number(rep.min_eig_direct) << "," << (rep.satisfied ? 1 : 0)
           << "\n";
    }
    text << "\n" << loewner_csv(chain);
    emit(text.str(), out_path);
  }
  return 0;
}

int cmd_sample_density(const CliOptions& opts) {
  const long long n = opts.shots_set ? opts.shots : 100000;
  if (n < 1) throw qig::ConfigError("--shots must be a positive sample count");
  constexpr int kBins = 101;
  constexpr double kLo = -3.0, kHi = 3.0;
  const double width = (kHi - kLo) / kBins;

  std::vector<long long> counts(kBins, 0);
  qig::ShotRng rng(opts.seed);
  for (long long s = 0; s < n; ++s) {
    const double t = qig::sample_high_peak_tent(rng);
    if (t < kLo || t >= kHi) continue;
    int bin = static_cast<int>((t - kLo) / width);
    if (bin >= kBins) bin = kBins - 1;
    ++counts[bin];
  }

  // The reference column is the bin-averaged density (bin mass / width): the
  // pointwise density diverges logarithmically at t = 0, but every bin mass
  // is finite, and shots * width * density is the expected count.
  const qig::TentCdf cdf;
  std::ostringstream out;
  out << "bin,count,density\n";
  for (int b = 0; b < kBins; ++b) {
    const double lo = kLo + b * width;
    const double center = lo + 0.5 * width;
    const double mass = cdf(lo + width) - cdf(lo);
    out << qig::csv_number(center) << "," << counts[b] << ","
        << qig::csv_number(mass / width) << "\n";
  }
  emit(out.str(), opts.output_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information matrices (Fisher-Bures, Wigner-Yanase, Kubo-Mori) of "
               "layered parameterized circuits on thermal states: exact values, "
               "shot-sampled estimates, natural-gradient descent, and "
               "Cramer-Rao bound checks"};
  app.require_subcommand(1);
  CliOptions opts;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment config JSON")
        ->required();
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", opts.output_path, "output file (default: stdout)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* exact = app.add_subcommand(
      "exact", "closed-form and spectral information matrices plus the ordering report");
  add_config(exact);
  add_output(exact);
  add_format(exact);

  CLI::App* estimate =
      app.add_subcommand("estimate", "shot-sampled information-matrix entries");
  add_config(estimate);
  add_output(estimate);
  add_format(estimate);
  CLI::Option* est_seed = estimate->add_option("--seed", opts.seed, "RNG seed override");
  CLI::Option* est_shots =
      estimate->add_option("--shots", opts.shots, "shot-count override");
  estimate->add_flag("--with-exact", opts.with_exact,
                     "attach the exact spectral value to each estimate");
  estimate->add_flag("--dump-shots", opts.dump_shots,
                     "write per-shot outcome logs next to the output file");

  CLI::App* optimize = app.add_subcommand(
      "optimize", "gradient or natural-gradient descent on Tr[O rho(phi)]");
  add_config(optimize);
  add_output(optimize);
  add_format(optimize);
  CLI::Option* opt_seed = optimize->add_option("--seed", opts.seed,
                                               "seed override for estimated metrics");

  CLI::App* crb = app.add_subcommand(
      "crb", "Cramer-Rao bound check of a covariance matrix against the exact metrics");
  add_config(crb);
  add_output(crb);
  add_format(crb);

  CLI::App* density = app.add_subcommand(
      "sample-density", "histogram of the time-sampling density against its formula");
  add_output(density);
  CLI::Option* den_seed = density->add_option("--seed", opts.seed, "RNG seed");
  CLI::Option* den_shots =
      density->add_option("--shots", opts.shots, "number of samples (default 100000)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  opts.seed_set = est_seed->count() > 0 || opt_seed->count() > 0 || den_seed->count() > 0;
  opts.shots_set = est_shots->count() > 0 || den_shots->count() > 0;

  try {
    if (app.got_subcommand(exact)) return cmd_exact(opts);
    if (app.got_subcommand(estimate)) return cmd_estimate(opts);
    if (app.got_subcommand(optimize)) return cmd_optimize(opts);
    if (app.got_subcommand(crb)) return cmd_crb(opts);
    if (app.got_subcommand(density)) return cmd_sample_density(opts);
    std::cerr << "no subcommand selected\n";
    return 2;
  } catch (const qig::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qig::CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 4;
  } catch (const qig::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
