#include <catch_amalgamated.hpp>

#include <cmath>

#include "csit/metrics.hpp"
#include "csit/montecarlo.hpp"
#include "csit/validate.hpp"
#include "oracles.hpp"

namespace mc = csit::mc;
namespace mt = csit::metrics;

TEST_CASE("empirical_outage degenerate and closed-form cases") {
  mc::McConfig cfg;
  cfg.samples = 100000;
  cfg.seed = 11;
  // perfectly correlated noiseless estimate never underestimates by 3 dB
  const auto zero = mc::empirical_outage(mt::LinkStatistics(1.0, 0.0), 2.0, cfg);
  CHECK(zero.mean == 0.0);
  CHECK(zero.std_error == 0.0);
  CHECK(zero.samples_used == cfg.samples);

  cfg.samples = 1000000;
  const auto third = mc::empirical_outage(mt::LinkStatistics(0.0, 0.0), 2.0, cfg);
  CHECK(std::abs(third.mean - 1.0 / 3.0) <= 3.0 * third.std_error);
  CHECK(third.std_error > 0.0);
}

TEST_CASE("estimates are bit-identical for identical seeds") {
  const mt::LinkStatistics stats(0.9, 0.00544);
  mc::McConfig cfg;
  cfg.samples = 50000;
  cfg.seed = 321;
  const auto a = mc::empirical_outage(stats, 2.0, cfg);
  const auto b = mc::empirical_outage(stats, 2.0, cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  cfg.seed = 322;
  const auto c = mc::empirical_outage(stats, 2.0, cfg);
  CHECK(a.mean != c.mean);

  const mt::RateAdaptParams p{3.1622776601683795, 2.0, 1.2589254117941673};
  cfg.seed = 321;
  const auto r1 = mc::empirical_effective_rate(p, stats, cfg);
  const auto r2 = mc::empirical_effective_rate(p, stats, cfg);
  CHECK(r1.mean == r2.mean);
  CHECK(r1.std_error == r2.std_error);
}

TEST_CASE("empirical_effective_rate limits and quadrature agreement") {
  const mt::LinkStatistics perfect(1.0, 0.0);
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 8081;
  const mt::RateAdaptParams starved{1.0, 1e9, 1.0};
  CHECK(mc::empirical_effective_rate(starved, perfect, cfg).mean < 1e-6);

  const mt::RateAdaptParams unit{1.0, 1.0, 1.0};
  const auto est = mc::empirical_effective_rate(unit, perfect, cfg);
  const double expected = std::exp(1.0) * oracles::exp_integral_e1(1.0);
  CHECK(std::abs(est.mean - expected) <= 3.0 * est.std_error);

  // representative full-duplex acquisition operating point
  const mt::LinkStatistics fdcsi(0.96973, 0.0189);
  const mt::RateAdaptParams p{3.1622776601683795, 1.9952623149688795, 1.2589254117941673};
  const auto mc_est = mc::empirical_effective_rate(p, fdcsi, cfg);
  const double quad = mt::average_effective_rate(p, fdcsi);
  CHECK(std::abs(mc_est.mean - quad) <= 3.0 * mc_est.std_error);
}

TEST_CASE("empirical_conditional_outage") {
  mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 9001;
  const mt::LinkStatistics uncorrelated(0.0, 0.0);
  CHECK(mc::empirical_conditional_outage(0.0, uncorrelated, 2.0, cfg).mean == 0.0);
  const auto est = mc::empirical_conditional_outage(1.0, uncorrelated, 2.0, cfg);
  CHECK(std::abs(est.mean - (1.0 - std::exp(-0.5))) <= 3.0 * est.std_error);

  const mt::LinkStatistics stats(0.9696, 0.00544);
  const double delta = 1.9952623149688795;
  const auto general = mc::empirical_conditional_outage(1.0, stats, delta, cfg);
  const double closed = mt::conditional_outage(1.0, stats, delta);
  CHECK(std::abs(general.mean - closed) <= 3.0 * general.std_error);
}

TEST_CASE("empirical_conditional_outage is phase invariant") {
  const mt::LinkStatistics stats(0.9, 0.1);
  mc::McConfig cfg;
  cfg.samples = 400000;
  cfg.seed = 606;
  const auto a = mc::empirical_conditional_outage(1.3, stats, 2.0, cfg, 0.0);
  const auto b = mc::empirical_conditional_outage(1.3, stats, 2.0, cfg, 2.1);
  const double se = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * se);
}

TEST_CASE("closed forms and estimates agree across the reference grid") {
  const auto cells = csit::validate::agreement_grid(100000, 20250810);
  std::size_t passed = 0;
  for (const auto& c : cells)
    if (c.pass()) ++passed;
  CHECK(passed == cells.size());
}

TEST_CASE("McConfig validation") {
  mc::McConfig cfg;
  cfg.samples = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.samples = 10;
  cfg.batches = 20;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
