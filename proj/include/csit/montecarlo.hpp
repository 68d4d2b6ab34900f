#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "csit/channel.hpp"
#include "csit/metrics.hpp"
#include "csit/rng.hpp"

namespace csit::mc {

struct McConfig {
  std::int64_t samples = 1000000;
  std::uint64_t seed = 0;
  std::int64_t batches = 32;  // for batch-based standard errors

  void validate() const {
    if (samples < 1) throw std::invalid_argument("McConfig: samples must be >= 1");
    if (batches < 1) throw std::invalid_argument("McConfig: batches must be >= 1");
    if (samples < batches) throw std::invalid_argument("McConfig: samples must be >= batches");
  }
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples_used = 0;
};

// Empirical average outage probability: the fraction of joint draws whose
// next-slot instantaneous SNR falls below the rate-selection threshold
// gamma_hat / delta. Strictly below: success on equality, as the complement
// of the success event, which keeps the degenerate perfectly-correlated
// boundary case exact. Binomial standard error.
inline McEstimate empirical_outage(const metrics::LinkStatistics& stats, double delta,
                                   const McConfig& cfg) {
  cfg.validate();
  if (!(delta > 0.0)) throw std::domain_error("empirical_outage: delta must be > 0");
  Rng rng(cfg.seed);
  std::int64_t outages = 0;
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    const auto s = channel::sample_joint_pair(stats.rho_tilde, stats.sigma_e_sq, rng);
    if (s.gamma_next < s.gamma_hat / delta) ++outages;
  }
  const double n = static_cast<double>(cfg.samples);
  const double p = static_cast<double>(outages) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), cfg.samples};
}

// Empirical average effective rate: per draw, the selected rate times the
// success indicator. Standard error from equal batches of the sample stream.
inline McEstimate empirical_effective_rate(const metrics::RateAdaptParams& p,
                                           const metrics::LinkStatistics& stats,
                                           const McConfig& cfg) {
  cfg.validate();
  p.validate();
  Rng rng(cfg.seed);
  const std::int64_t base = cfg.samples / cfg.batches;
  const std::int64_t extra = cfg.samples % cfg.batches;
  std::vector<double> batch_means;
  batch_means.reserve(static_cast<std::size_t>(cfg.batches));
  double total = 0.0;
  for (std::int64_t b = 0; b < cfg.batches; ++b) {
    const std::int64_t count = base + (b < extra ? 1 : 0);
    double acc = 0.0;
    for (std::int64_t i = 0; i < count; ++i) {
      const auto s = channel::sample_joint_pair(stats.rho_tilde, stats.sigma_e_sq, rng);
      if (s.gamma_next >= s.gamma_hat / p.delta) acc += metrics::rate(s.gamma_hat, p);
    }
    total += acc;
    batch_means.push_back(count > 0 ? acc / static_cast<double>(count) : 0.0);
  }
  const double mean = total / static_cast<double>(cfg.samples);
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  const auto nb = static_cast<double>(cfg.batches);
  const double se = cfg.batches > 1 ? std::sqrt(var / (nb - 1.0) / nb) : 0.0;
  return {mean, se, cfg.samples};
}

// Empirical outage conditioned on a fixed estimate: draws the next channel
// sample from the exact conditional law of the jointly Gaussian pair
// (regression coefficient rho_tilde / sigma^2 on the fixed estimate,
// residual variance 1 - rho^2), which is the scaled noncentral chi-squared
// conditional in disguise. The estimate's phase is immaterial; it is
// exposed so the invariance can be exercised.
inline McEstimate empirical_conditional_outage(double gamma_hat,
                                               const metrics::LinkStatistics& stats, double delta,
                                               const McConfig& cfg, double hat_phase = 0.0) {
  cfg.validate();
  if (gamma_hat < 0.0)
    throw std::domain_error("empirical_conditional_outage: gamma_hat must be >= 0");
  if (!(delta > 0.0)) throw std::domain_error("empirical_conditional_outage: delta must be > 0");
  Rng rng(cfg.seed);
  const std::complex<double> h_hat =
      std::sqrt(gamma_hat) * std::complex<double>(std::cos(hat_phase), std::sin(hat_phase));
  const std::complex<double> cond_mean = (stats.rho_tilde / stats.sigma_sq()) * h_hat;
  const double resid_std = std::sqrt(std::max(0.0, 1.0 - stats.rho_sq()));
  const double threshold = gamma_hat / delta;
  std::int64_t outages = 0;
  for (std::int64_t i = 0; i < cfg.samples; ++i) {
    const std::complex<double> h_next = cond_mean + resid_std * rng.complex_normal();
    if (std::norm(h_next) < threshold) ++outages;
  }
  const double n = static_cast<double>(cfg.samples);
  const double p = static_cast<double>(outages) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), cfg.samples};
}

}  // namespace csit::mc
