#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "csit/metrics.hpp"
#include "csit/montecarlo.hpp"
#include "csit/rng.hpp"

namespace csit::validate {

// One cell of the closed-form vs Monte Carlo agreement grid.
struct AgreementCell {
  double rho_tilde = 0.0;
  double sigma_e_sq = 0.0;
  double delta = 1.0;
  double pout_closed = 0.0;
  double pout_mc = 0.0;
  double pout_se = 0.0;
  double ase_quad = 0.0;
  double ase_mc = 0.0;
  double ase_se = 0.0;
  bool pout_ok = false;
  bool ase_ok = false;

  bool pass() const { return pout_ok && ase_ok; }
};

inline const std::vector<double>& grid_rho_tilde() {
  static const std::vector<double> v{0.0, 0.5, 0.9, 0.99};
  return v;
}
inline const std::vector<double>& grid_sigma_e_sq() {
  static const std::vector<double> v{0.0, 0.00544, 0.17};
  return v;
}
inline const std::vector<double>& grid_delta() {
  static const std::vector<double> v{1.5, 2.0, 3.6};
  return v;
}

// Cross grid of correlation, estimation variance and backoff: every closed
// form is checked against its empirical estimate at 3 standard errors.
// snr/gamma_gap fix the rate curve used by the effective-rate comparison.
inline std::vector<AgreementCell> agreement_grid(std::int64_t samples, std::uint64_t seed,
                                                 double snr_data = 3.1622776601683795,
                                                 double gamma_gap = 1.2589254117941673) {
  std::vector<AgreementCell> cells;
  std::uint64_t index = 0;
  for (double rho_tilde : grid_rho_tilde()) {
    for (double sigma_e_sq : grid_sigma_e_sq()) {
      for (double delta : grid_delta()) {
        AgreementCell cell;
        cell.rho_tilde = rho_tilde;
        cell.sigma_e_sq = sigma_e_sq;
        cell.delta = delta;
        const metrics::LinkStatistics stats(rho_tilde, sigma_e_sq);
        cell.pout_closed = metrics::outage_probability(stats, delta);
        const metrics::RateAdaptParams params{snr_data, delta, gamma_gap};
        cell.ase_quad = metrics::average_effective_rate(params, stats);

        Rng seeder = derive_stream(seed, index++);
        mc::McConfig pout_cfg;
        pout_cfg.samples = samples;
        pout_cfg.seed = seeder.next_u64();
        const auto pout_est = mc::empirical_outage(stats, delta, pout_cfg);
        mc::McConfig ase_cfg = pout_cfg;
        ase_cfg.seed = seeder.next_u64();
        const auto ase_est = mc::empirical_effective_rate(params, stats, ase_cfg);

        cell.pout_mc = pout_est.mean;
        cell.pout_se = pout_est.std_error;
        cell.ase_mc = ase_est.mean;
        cell.ase_se = ase_est.std_error;
        cell.pout_ok = std::abs(cell.pout_mc - cell.pout_closed) <= 3.0 * cell.pout_se;
        cell.ase_ok = std::abs(cell.ase_mc - cell.ase_quad) <= 3.0 * cell.ase_se;
        cells.push_back(cell);
      }
    }
  }
  return cells;
}

}  // namespace csit::validate
