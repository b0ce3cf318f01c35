#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qig/errors.hpp"
#include "qig/pauli.hpp"
#include "qig/quadrature.hpp"
#include "qig/rng.hpp"

namespace qig {

inline constexpr double kPi = 3.14159265358979323846;

/// p(t) = (2/pi) ln|coth(pi t / 2)|: even, normalized, log-divergent at 0,
/// tails ~ (4/pi) exp(-pi |t|). Its Fourier transform is the spectral filter
/// tanh(x/2)/(x/2). Evaluated as log1p(q) - log(-expm1(-2x)) with
/// q = exp(-2x), x = pi|t|/2, which is stable at both ends.
inline double high_peak_tent_density(double t) {
  const double x = kPi * std::abs(t) / 2.0;
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  const double q = std::exp(-2.0 * x);
  return (2.0 / kPi) * (std::log1p(q) - std::log(-std::expm1(-2.0 * x)));
}

namespace detail {

/// Envelope constants for rejection sampling, tabulated at first use.
///
/// Peak piece, |t| <= 1: p(t) <= (2/pi) ln(c_peak/|t|) because
/// t coth(pi t/2) increases on (0, 1] to coth(pi/2); a log density is sampled
/// exactly as a mixture of U(0,1] (weight ln c_peak) and U1*U2 (weight 1).
/// Tail piece, |t| > 1: p(t) <= (2/pi) c_tail exp(-pi |t|) because
/// ln(coth(pi t/2)) e^{pi t} decreases on [1, inf) to 2.
struct TentEnvelope {
  double c_peak;
  double c_tail;
  double mass_peak;  // integral of the peak envelope over [-1, 1]
  double mass_tail;  // integral of the tail envelope over |t| > 1

  TentEnvelope() {
    const double margin = 1.0 + 1e-9;
    c_peak = margin / std::tanh(kPi / 2.0);
    c_tail = margin * std::exp(kPi) * (kPi / 2.0) * high_peak_tent_density(1.0);
    mass_peak = (4.0 / kPi) * (std::log(c_peak) + 1.0);
    mass_tail = (4.0 / (kPi * kPi)) * c_tail * std::exp(-kPi);
  }
};

inline const TentEnvelope& tent_envelope() {
  static const TentEnvelope env;
  return env;
}

}  // namespace detail

/// Draw t from the high-peak tent density by rejection from the two-piece
/// envelope; the acceptance rate is about 0.70.
inline double sample_high_peak_tent(ShotRng& rng) {
  const auto& env = detail::tent_envelope();
  const double peak_fraction = env.mass_peak / (env.mass_peak + env.mass_tail);
  const double log_mix = std::log(env.c_peak) / (std::log(env.c_peak) + 1.0);
  for (;;) {
    double t, envelope;
    if (rng.uniform() < peak_fraction) {
      t = rng.uniform() < log_mix ? rng.uniform_positive()
                                  : rng.uniform_positive() * rng.uniform_positive();
      envelope = (2.0 / kPi) * std::log(env.c_peak / t);
    } else {
      t = 1.0 - std::log(rng.uniform_positive()) / kPi;
      envelope = (2.0 / kPi) * env.c_tail * std::exp(-kPi * t);
    }
    if (rng.uniform() * envelope < high_peak_tent_density(t)) {
      return rng.uniform() < 0.5 ? t : -t;
    }
  }
}

/// Integral of p over [0, delta], accurate for small delta: the first term
/// integrates the leading ln(2/(pi t)) part exactly, the second integrates
/// the smooth remainder ln((pi t/2) coth(pi t/2)).
inline double tent_mass_near_zero(double delta) {
  if (delta <= 0) return 0.0;
  const double lead = (2.0 / kPi) * delta * (std::log(2.0 / (kPi * delta)) + 1.0);
  auto remainder = [](double t) {
    const double x = kPi * t / 2.0;
    return (2.0 / kPi) * std::log(x / std::tanh(x));
  };
  return lead + adaptive_simpson(remainder, delta * 1e-6, delta, 1e-14);
}

/// Integral of p(t) g(t) over the whole line, splitting off the logarithmic
/// singularity at 0 analytically. `g` need not be even.
inline double integrate_against_tent(const std::function<double(double)>& g,
                                     double tol = 1e-10, double t_max = 35.0) {
  const double delta = 1e-6;
  auto even = [&](double t) { return g(t) + g(-t); };
  auto integrand = [&](double t) { return high_peak_tent_density(t) * even(t); };
  double core = adaptive_simpson(integrand, delta, 1.0, tol) +
                adaptive_simpson(integrand, 1.0, t_max, tol);
  return core + tent_mass_near_zero(delta) * even(delta / 2.0);
}

/// Total mass of the density restricted to [-t_max, t_max].
inline double tent_total_mass(double t_max = 30.0) {
  return integrate_against_tent([](double) { return 0.5; }, 1e-12, t_max) * 2.0;
}

/// Fourier transform of the density at frequency x: integral p(t) e^{-ixt} dt,
/// real and even, so computed as the cosine transform.
inline double tent_fourier_transform(double x) {
  return integrate_against_tent([x](double t) { return std::cos(x * t); }, 1e-12, 40.0);
}

/// Cumulative distribution of the tent density tabulated on a uniform grid,
/// linearly interpolated between nodes.
class TentCdf {
 public:
  explicit TentCdf(double t_max = 8.0, int cells_per_side = 80000)
      : t_max_(t_max), n_(cells_per_side) {
    half_.resize(n_ + 1);
    half_[0] = 0.0;
    const double h = t_max_ / n_;
    half_[1] = tent_mass_near_zero(h);
    for (int k = 1; k < n_; ++k) {
      double a = k * h, b = (k + 1) * h;
      half_[k + 1] = half_[k] + adaptive_simpson(high_peak_tent_density, a, b, 1e-13);
    }
  }

  double operator()(double t) const {
    const double a = std::abs(t);
    double cum;
    if (a >= t_max_) {
      cum = 0.5;
    } else {
      const double pos = a / (t_max_ / n_);
      const int k = static_cast<int>(pos);
      const double frac = pos - k;
      cum = half_[k] + frac * (half_[k + 1] - half_[k]);
    }
    return t >= 0 ? 0.5 + cum : 0.5 - cum;
  }

 private:
  double t_max_;
  int n_;
  std::vector<double> half_;
};

/// Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> samples,
                           const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double ks = 0.0;
  for (std::size_t idx = 0; idx < samples.size(); ++idx) {
    const double f = cdf(samples[idx]);
    ks = std::max(ks, std::abs((idx + 1) / n - f));
    ks = std::max(ks, std::abs(idx / n - f));
  }
  return ks;
}

/// Draw a term index k with probability |alpha_k| / ||alpha||_1.
inline int sample_pauli_term(const PauliSum& sum, ShotRng& rng) {
  if (sum.empty()) throw std::domain_error("sample_pauli_term: empty Pauli sum");
  const double norm = sum.one_norm();
  if (norm <= 0) throw std::domain_error("sample_pauli_term: zero one-norm");
  double u = rng.uniform() * norm;
  for (std::size_t k = 0; k < sum.terms().size(); ++k) {
    u -= std::abs(sum.terms()[k].coeff);
    if (u < 0) return static_cast<int>(k);
  }
  return static_cast<int>(sum.terms().size()) - 1;
}

}  // namespace qig
