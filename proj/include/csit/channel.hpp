#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "csit/rng.hpp"
#include "csit/specfun.hpp"
#include "csit/units.hpp"

namespace csit::channel {

struct FadingParams {
  double carrier_hz = 2e9;
  double speed_kmh = 0.0;
  double csi_delay_s = 0.0;

  void validate() const {
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("FadingParams: carrier_hz must be > 0");
    if (speed_kmh < 0.0) throw std::invalid_argument("FadingParams: speed_kmh must be >= 0");
    if (csi_delay_s < 0.0) throw std::invalid_argument("FadingParams: csi_delay_s must be >= 0");
  }
};

struct EstimationModel {
  double c_e = 0.0544;
  double sinr_csi = 1.0;  // +inf marks noiseless estimation (variance 0)
};

struct SelfInterferenceParams {
  double inr = 0.0;
  double mu = 0.0;  // residual channel mean; kept configurable, default 0
};

struct PilotSimConfig {
  std::size_t n_bs = 1;
  std::size_t pilot_len = 8;
  std::vector<double> snr_dl_per_bs;
  SelfInterferenceParams si;

  void validate() const {
    if (n_bs < 1) throw std::invalid_argument("PilotSimConfig: n_bs must be >= 1");
    if (pilot_len < n_bs)
      throw std::invalid_argument("PilotSimConfig: pilot_len must be >= n_bs for orthogonality");
    if (snr_dl_per_bs.size() != n_bs)
      throw std::invalid_argument("PilotSimConfig: snr_dl_per_bs needs one entry per BS");
    for (double s : snr_dl_per_bs)
      if (!(s > 0.0)) throw std::invalid_argument("PilotSimConfig: SNR values must be > 0");
    if (si.inr < 0.0) throw std::invalid_argument("PilotSimConfig: inr must be >= 0");
  }
};

// One draw of (estimated instantaneous SNR, next-slot true instantaneous SNR).
struct JointSample {
  double gamma_hat = 0.0;
  double gamma_next = 0.0;
};

inline double doppler_frequency(double speed_kmh, double carrier_hz) {
  if (speed_kmh < 0.0) throw std::domain_error("doppler_frequency: negative speed");
  if (!(carrier_hz > 0.0)) throw std::domain_error("doppler_frequency: carrier must be > 0");
  return (speed_kmh / 3.6) * carrier_hz / kSpeedOfLightMps;
}

// Clarke temporal autocorrelation of the fading process at lag delay_s.
inline double autocorrelation(double doppler_hz, double delay_s) {
  if (doppler_hz < 0.0 || delay_s < 0.0)
    throw std::domain_error("autocorrelation: negative argument");
  return specfun::bessel_j0(2.0 * std::numbers::pi * doppler_hz * delay_s);
}

inline double estimation_variance(const EstimationModel& model) {
  if (!(model.c_e > 0.0)) throw std::domain_error("estimation_variance: c_e must be > 0");
  if (!(model.sinr_csi > 0.0))
    throw std::domain_error("estimation_variance: sinr_csi must be > 0");
  return model.c_e / model.sinr_csi;  // exactly 0 for sinr_csi = +inf
}

// Correlation between the noisy estimate and the next true channel sample,
// normalized by both powers.
inline double normalized_correlation(double rho_tilde, double sigma_e_sq) {
  if (std::abs(rho_tilde) > 1.0)
    throw std::domain_error("normalized_correlation: |rho_tilde| > 1");
  if (sigma_e_sq < 0.0) throw std::domain_error("normalized_correlation: sigma_e_sq < 0");
  return rho_tilde / std::sqrt(1.0 + sigma_e_sq);
}

// Draws (|h + e|^2, |h'|^2) where h' = rho_tilde h + sqrt(1 - rho_tilde^2) w
// is the one-step Gauss-Markov evolution of the channel and e is the
// estimation error. Only the pairwise correlation at the CSI lag matters for
// the metrics, so no full Doppler process synthesis is needed.
inline JointSample sample_joint_pair(double rho_tilde, double sigma_e_sq, Rng& rng) {
  if (std::abs(rho_tilde) > 1.0) throw std::domain_error("sample_joint_pair: |rho_tilde| > 1");
  if (sigma_e_sq < 0.0) throw std::domain_error("sample_joint_pair: sigma_e_sq < 0");
  const std::complex<double> h = rng.complex_normal();
  const std::complex<double> w = rng.complex_normal();
  const std::complex<double> e = rng.complex_normal();
  const std::complex<double> h_next =
      rho_tilde * h + std::sqrt(1.0 - rho_tilde * rho_tilde) * w;
  const std::complex<double> h_hat = h + std::sqrt(sigma_e_sq) * e;
  return {std::norm(h_hat), std::norm(h_next)};
}

// Pilot sequence of BS j, normalized to unit energy and exactly orthogonal
// across BSs: Sylvester-Hadamard rows (real, exactly orthogonal even in
// floating point) when the length is a power of two, DFT rows otherwise.
inline std::vector<std::complex<double>> orthogonal_pilot(std::size_t bs, std::size_t len) {
  if (bs >= len) throw std::invalid_argument("orthogonal_pilot: bs index must be < len");
  std::vector<std::complex<double>> p(len);
  const double scale = 1.0 / std::sqrt(static_cast<double>(len));
  if (std::has_single_bit(len)) {
    for (std::size_t l = 0; l < len; ++l) {
      const bool negative = (std::popcount(bs & l) & 1) != 0;
      p[l] = {negative ? -scale : scale, 0.0};
    }
  } else {
    for (std::size_t l = 0; l < len; ++l) {
      const double phase =
          2.0 * std::numbers::pi * static_cast<double>(bs * l % len) / static_cast<double>(len);
      p[l] = {scale * std::cos(phase), scale * std::sin(phase)};
    }
  }
  return p;
}

// Symbol-level simulation of the downlink pilot reception at a full-duplex
// terminal: per block, every BS's pilot plus the residual self-interference
// (the terminal's own data symbols through the residual channel) plus noise.
// Returns the empirical post-projection signal-to-(interference+noise) power
// ratio for the target BS; its expectation is snr_dl / (1 + inr).
inline double simulate_pilot_sinr(const PilotSimConfig& cfg, std::size_t target_bs,
                                  std::int64_t blocks, Rng& rng) {
  cfg.validate();
  if (target_bs >= cfg.n_bs)
    throw std::invalid_argument("simulate_pilot_sinr: target_bs out of range");
  if (blocks < 1) throw std::invalid_argument("simulate_pilot_sinr: blocks must be >= 1");

  std::vector<std::vector<std::complex<double>>> pilots(cfg.n_bs);
  for (std::size_t j = 0; j < cfg.n_bs; ++j) pilots[j] = orthogonal_pilot(j, cfg.pilot_len);
  const auto& pt = pilots[target_bs];

  const double sqrt_inr = std::sqrt(cfg.si.inr);
  double signal_power = 0.0;
  double distortion_power = 0.0;
  std::vector<std::complex<double>> y(cfg.pilot_len);

  for (std::int64_t blk = 0; blk < blocks; ++blk) {
    std::vector<std::complex<double>> h(cfg.n_bs);
    for (std::size_t j = 0; j < cfg.n_bs; ++j) h[j] = rng.complex_normal();
    const std::complex<double> h0 = cfg.si.mu + rng.complex_normal();
    for (std::size_t l = 0; l < cfg.pilot_len; ++l) {
      std::complex<double> v{0.0, 0.0};
      for (std::size_t j = 0; j < cfg.n_bs; ++j)
        v += std::sqrt(cfg.snr_dl_per_bs[j]) * h[j] * pilots[j][l];
      v += sqrt_inr * h0 * rng.complex_normal();  // own unit-power data symbol
      v += rng.complex_normal();                  // receiver noise
      y[l] = v;
    }
    // Least-squares projection onto the target pilot.
    std::complex<double> z{0.0, 0.0};
    for (std::size_t l = 0; l < cfg.pilot_len; ++l) z += std::conj(pt[l]) * y[l];
    const std::complex<double> desired = std::sqrt(cfg.snr_dl_per_bs[target_bs]) * h[target_bs];
    signal_power += std::norm(desired);
    distortion_power += std::norm(z - desired);
  }
  return signal_power / distortion_power;
}

// Number of symbols that fit within the time over which the channel stays
// correlated above corr_threshold, at the given sampling bandwidth. A static
// channel never decorrelates; that case returns a documented cap so the
// result stays a plain count.
inline constexpr std::int64_t kUnboundedCoherenceBudget =
    std::numeric_limits<std::int32_t>::max();

inline std::int64_t coherence_symbol_budget(double speed_kmh, double carrier_hz,
                                            double bandwidth_hz, double corr_threshold) {
  if (!(corr_threshold > 0.0 && corr_threshold < 1.0))
    throw std::domain_error("coherence_symbol_budget: threshold must be in (0,1)");
  if (!(bandwidth_hz > 0.0))
    throw std::domain_error("coherence_symbol_budget: bandwidth must be > 0");
  const double fd = doppler_frequency(speed_kmh, carrier_hz);
  if (fd == 0.0) return kUnboundedCoherenceBudget;
  // First crossing of J0 with the threshold lies before the first Bessel
  // zero, where J0 is strictly decreasing; bisect in the argument domain.
  double lo = 0.0;
  double hi = 2.404825557695773;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (specfun::bessel_j0(mid) > corr_threshold)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14 * hi) break;
  }
  const double t_star = 0.5 * (lo + hi) / (2.0 * std::numbers::pi * fd);
  const double budget = std::floor(bandwidth_hz * t_star);
  if (budget >= static_cast<double>(kUnboundedCoherenceBudget)) return kUnboundedCoherenceBudget;
  return static_cast<std::int64_t>(budget);
}

}  // namespace csit::channel
