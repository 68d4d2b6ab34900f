#pragma once

#include <cmath>
#include <stdexcept>

#include "csit/quadrature.hpp"
#include "csit/specfun.hpp"

namespace csit::metrics {

// Rate-adaptation knobs, all linear: average data SNR, backoff factor
// (multiplicative SNR margin standing in for a more protected MCS), and the
// SNR gap to capacity.
struct RateAdaptParams {
  double snr_data = 1.0;
  double delta = 1.0;
  double gamma_gap = 1.0;

  void validate() const {
    if (!(snr_data > 0.0)) throw std::invalid_argument("RateAdaptParams: snr_data must be > 0");
    if (!(delta > 0.0)) throw std::invalid_argument("RateAdaptParams: delta must be > 0");
    if (!(gamma_gap >= 1.0))
      throw std::invalid_argument("RateAdaptParams: gamma_gap must be >= 1");
  }
};

// Second-order statistics of the (delayed, noisy) channel knowledge:
// raw autocorrelation rho_tilde at the CSI lag plus the estimation-error
// variance. sigma_sq is the mean of the estimate's power, rho the
// noise-normalized correlation.
struct LinkStatistics {
  double rho_tilde = 1.0;
  double sigma_e_sq = 0.0;

  LinkStatistics(double rho_tilde_, double sigma_e_sq_)
      : rho_tilde(rho_tilde_), sigma_e_sq(sigma_e_sq_) {
    if (!(std::abs(rho_tilde) <= 1.0))
      throw std::invalid_argument("LinkStatistics: |rho_tilde| must be <= 1");
    if (!(sigma_e_sq >= 0.0))
      throw std::invalid_argument("LinkStatistics: sigma_e_sq must be >= 0");
  }

  double sigma_sq() const { return 1.0 + sigma_e_sq; }
  double rho() const { return rho_tilde / std::sqrt(sigma_sq()); }
  double rho_sq() const { return rho_tilde * rho_tilde / sigma_sq(); }
};

class InfeasibleTargetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Transmission rate selected from the estimated instantaneous SNR, in
// nats/symbol.
inline double rate(double gamma_hat, const RateAdaptParams& p) {
  if (gamma_hat < 0.0) throw std::domain_error("rate: gamma_hat must be >= 0");
  p.validate();
  return std::log1p(p.snr_data * gamma_hat / (p.delta * p.gamma_gap));
}

// Outage probability conditioned on the estimate gamma_hat:
//
//   eps(g) = 1 - Q1( sqrt(2 rho^2 g / ((1-rho^2) sigma^2)),
//                    sqrt(2 g / ((1-rho^2) Delta)) ).
//
// In the perfect-correlation limit the conditional law collapses onto a
// point and the expression degenerates into a step: outage for all
// gamma_hat > 0 iff the backoff fails to cover the estimate's power
// inflation. That branch is taken when 1 - rho^2 underflows below 1e-12,
// where the generic Marcum arguments diverge.
inline double conditional_outage(double gamma_hat, const LinkStatistics& stats, double delta) {
  if (gamma_hat < 0.0) throw std::domain_error("conditional_outage: gamma_hat must be >= 0");
  if (!(delta > 0.0)) throw std::domain_error("conditional_outage: delta must be > 0");
  if (gamma_hat == 0.0) return 0.0;
  const double sigma_sq = stats.sigma_sq();
  const double rho_sq = stats.rho_sq();
  const double one_minus_rho_sq = 1.0 - rho_sq;
  if (one_minus_rho_sq < 1e-12) return sigma_sq > delta ? 1.0 : 0.0;
  const double a = std::sqrt(2.0 * rho_sq * gamma_hat / (one_minus_rho_sq * sigma_sq));
  const double b = std::sqrt(2.0 * gamma_hat / (one_minus_rho_sq * delta));
  return 1.0 - specfun::marcum_q1(a, b);
}

// Average outage probability in closed form:
//
//   P_out = 1/2 + (sigma^2 - Delta) / (2 sqrt((Delta + sigma^2)^2
//           - 4 rho_tilde^2 Delta)).
inline double outage_probability(const LinkStatistics& stats, double delta) {
  if (!(delta > 0.0)) throw std::domain_error("outage_probability: delta must be > 0");
  const double sigma_sq = stats.sigma_sq();
  const double sum = delta + sigma_sq;
  const double disc = sum * sum - 4.0 * stats.rho_tilde * stats.rho_tilde * delta;
  if (!(disc > 0.0))
    throw std::logic_error("outage_probability: nonpositive discriminant");
  return 0.5 + (sigma_sq - delta) / (2.0 * std::sqrt(disc));
}

// Average effective rate (nats/symbol): the success probability times the
// selected rate, averaged over the exponential estimate distribution.
// Evaluated by adaptive quadrature with the estimate's mean as decay scale.
inline double average_effective_rate(const RateAdaptParams& p, const LinkStatistics& stats,
                                     double tol = 1e-8) {
  p.validate();
  if (!(tol > 0.0)) throw std::domain_error("average_effective_rate: tol must be > 0");
  const double sigma_sq = stats.sigma_sq();
  const auto integrand = [&](double x) {
    const double success = 1.0 - conditional_outage(x, stats, p.delta);
    return success * std::exp(-x / sigma_sq) * rate(x, p) / sigma_sq;
  };
  return quad::integrate_semi_infinite(integrand, sigma_sq, tol, 10.0 * tol).value;
}

// Backoff that hits a target average outage probability. The closed form is
// strictly decreasing in the backoff for |rho_tilde| < 1, so plain bisection
// over a bracket spanning -60 dB to +60 dB converges unconditionally.
inline double calibrate_backoff(double target_pout, const LinkStatistics& stats) {
  if (!(target_pout > 0.0 && target_pout < 1.0))
    throw std::domain_error("calibrate_backoff: target must be in (0,1)");
  double lo = 1e-6;
  double hi = 1e6;
  const double p_lo = outage_probability(stats, lo);
  const double p_hi = outage_probability(stats, hi);
  if (!(target_pout <= p_lo && target_pout >= p_hi))
    throw InfeasibleTargetError("calibrate_backoff: target outside reachable range");
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (outage_probability(stats, mid) > target_pout)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 1e-10 * lo) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace csit::metrics
