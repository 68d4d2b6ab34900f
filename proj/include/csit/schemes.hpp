#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "csit/channel.hpp"
#include "csit/metrics.hpp"
#include "csit/units.hpp"

namespace csit::schemes {

// CSIT acquisition schemes under comparison:
//   pcsi   - perfect CSI upper bound (noiseless, zero delay)
//   probe  - half-duplex probing before transmission (round-trip delay)
//   fdcsi  - full-duplex estimation from continuously broadcast downlink
//            pilots (minimal delay, residual self-interference penalty)
//   fddata - full duplex spent on downlink data instead, both legs probing
enum class SchemeTag { pcsi, probe, fdcsi, fddata };

enum class Leg { uplink, downlink };

inline std::string to_string(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::pcsi: return "PCSI";
    case SchemeTag::probe: return "PROBE";
    case SchemeTag::fdcsi: return "FDCSI";
    case SchemeTag::fddata: return "FDDATA";
  }
  throw std::logic_error("to_string: bad SchemeTag");
}

// Link budget with all power ratios linear and referenced to 1 MHz
// bandwidth. kappa is the fraction of the downlink megahertz spent on
// pilots (fdcsi) or downlink data (fddata).
struct LinkBudget {
  double snr_ul = 1.0;
  double snr_dl = 1.0;
  double inr = 0.0;
  double kappa = 0.1;
  double t_min_s = 2e-3;
  double t_pr_s = 4e-3;
  double c_e = 0.0544;

  void validate() const {
    if (!(snr_ul > 0.0) || !(snr_dl > 0.0))
      throw std::invalid_argument("LinkBudget: SNR values must be > 0");
    if (inr < 0.0) throw std::invalid_argument("LinkBudget: inr must be >= 0");
    if (!(kappa > 0.0 && kappa <= 1.0))
      throw std::invalid_argument("LinkBudget: kappa must be in (0,1]");
    if (!(t_min_s > 0.0 && t_min_s <= t_pr_s))
      throw std::invalid_argument("LinkBudget: need 0 < t_min_s <= t_pr_s");
    if (!(c_e > 0.0)) throw std::invalid_argument("LinkBudget: c_e must be > 0");
  }
};

struct ThroughputComponents {
  double uplink_mnats = 0.0;
  double downlink_mnats = 0.0;  // already weighted by kappa
  double uplink_pout = 0.0;
  double downlink_pout = 0.0;
};

struct ThroughputReport {
  SchemeTag scheme = SchemeTag::pcsi;
  double throughput_mnats_per_s = 0.0;
  double pout = 0.0;
  std::optional<ThroughputComponents> components;  // fddata only
};

// Bandwidth scaling rule: shrinking the band by kappa concentrates the same
// transmit power into less noise bandwidth, so SNR divides by kappa. INR is
// unaffected (interference and noise scale together).
inline double scale_snr(double snr_1mhz, double kappa) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::domain_error("scale_snr: kappa not in (0,1]");
  return snr_1mhz / kappa;
}

// SINR experienced by the channel estimation stage. +inf marks the unbounded
// acquisition SNR of the perfect-CSI bound (estimation variance exactly 0
// downstream).
inline double scheme_sinr_csi(SchemeTag tag, const LinkBudget& budget, Leg leg = Leg::uplink) {
  budget.validate();
  switch (tag) {
    case SchemeTag::pcsi:
      return std::numeric_limits<double>::infinity();
    case SchemeTag::probe:
      return budget.snr_ul;
    case SchemeTag::fdcsi:
      return scale_snr(budget.snr_dl, budget.kappa) / (budget.inr + 1.0);
    case SchemeTag::fddata:
      return leg == Leg::uplink ? budget.snr_ul
                                : scale_snr(budget.snr_dl, budget.kappa) / (budget.inr + 1.0);
  }
  throw std::logic_error("scheme_sinr_csi: bad SchemeTag");
}

// Bandwidth-normalized throughput of one scheme, in Mnats/s at a 1 MHz
// reference: 1 MHz times the uplink average effective rate, plus (for
// fddata) kappa MHz times the downlink leg's. The reported outage is the
// analytic average; fddata reports the uplink leg's, with the downlink leg
// available in the component breakdown. The downlink data leg sees no
// inter-BS interference term by construction.
inline ThroughputReport scheme_throughput(SchemeTag tag, const LinkBudget& budget,
                                          const channel::FadingParams& fading, double delta_db,
                                          double gamma_gap_db, double tol = 1e-8) {
  budget.validate();
  fading.validate();
  const double fd = channel::doppler_frequency(fading.speed_kmh, fading.carrier_hz);
  const double delta = db_to_linear(delta_db);
  const double gamma_gap = db_to_linear(gamma_gap_db);

  const auto leg_rate = [&](double snr_data, double sinr_csi, double t_csi) {
    const double rho_tilde = channel::autocorrelation(fd, t_csi);
    const double sigma_e_sq =
        std::isinf(sinr_csi) ? 0.0 : channel::estimation_variance({budget.c_e, sinr_csi});
    const metrics::LinkStatistics stats(rho_tilde, sigma_e_sq);
    const metrics::RateAdaptParams params{snr_data, delta, gamma_gap};
    return std::pair{metrics::average_effective_rate(params, stats, tol), stats};
  };

  ThroughputReport report;
  report.scheme = tag;
  switch (tag) {
    case SchemeTag::pcsi: {
      const auto [eta, stats] = leg_rate(budget.snr_ul, scheme_sinr_csi(tag, budget), 0.0);
      report.throughput_mnats_per_s = eta;
      report.pout = 0.0;  // zero by definition for the perfect-CSI bound
      (void)stats;
      break;
    }
    case SchemeTag::probe: {
      const auto [eta, stats] =
          leg_rate(budget.snr_ul, scheme_sinr_csi(tag, budget), budget.t_pr_s);
      report.throughput_mnats_per_s = eta;
      report.pout = metrics::outage_probability(stats, delta);
      break;
    }
    case SchemeTag::fdcsi: {
      const auto [eta, stats] =
          leg_rate(budget.snr_ul, scheme_sinr_csi(tag, budget), budget.t_min_s);
      report.throughput_mnats_per_s = eta;
      report.pout = metrics::outage_probability(stats, delta);
      break;
    }
    case SchemeTag::fddata: {
      const auto [eta_ul, stats_ul] =
          leg_rate(budget.snr_ul, scheme_sinr_csi(tag, budget, Leg::uplink), budget.t_pr_s);
      const double snr_dl_eff = scheme_sinr_csi(tag, budget, Leg::downlink);
      const auto [eta_dl, stats_dl] = leg_rate(snr_dl_eff, snr_dl_eff, budget.t_pr_s);
      ThroughputComponents parts;
      parts.uplink_mnats = eta_ul;
      parts.downlink_mnats = budget.kappa * eta_dl;
      parts.uplink_pout = metrics::outage_probability(stats_ul, delta);
      parts.downlink_pout = metrics::outage_probability(stats_dl, delta);
      report.throughput_mnats_per_s = parts.uplink_mnats + parts.downlink_mnats;
      report.pout = parts.uplink_pout;
      report.components = parts;
      break;
    }
  }
  return report;
}

}  // namespace csit::schemes
