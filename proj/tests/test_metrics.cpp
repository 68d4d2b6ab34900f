#include <catch_amalgamated.hpp>

#include <cmath>

#include "csit/metrics.hpp"
#include "csit/montecarlo.hpp"
#include "csit/quadrature.hpp"
#include "csit/rng.hpp"
#include "oracles.hpp"

namespace mt = csit::metrics;

namespace {
const std::vector<double> kRhoGrid{0.0, 0.5, 0.9, 0.99};
const std::vector<double> kSigeGrid{0.0, 0.00544, 0.17};
const std::vector<double> kDeltaGrid{1.5, 2.0, 3.6};
}  // namespace

TEST_CASE("rate examples") {
  const mt::RateAdaptParams p{3.1622776601683795, 1.9952623149688795, 1.2589254117941673};
  CHECK(mt::rate(0.0, p) == 0.0);
  // snr 5 dB, backoff 3 dB, gap 1 dB at unit estimate: log(1 + 10^0.1)
  CHECK_THAT(mt::rate(1.0, p), Catch::Matchers::WithinAbs(0.8148892187000116, 1e-12));
  const mt::RateAdaptParams huge_backoff{3.1622776601683795, 1e12, 1.2589254117941673};
  CHECK(mt::rate(1.0, huge_backoff) < 1e-11);
  CHECK_THROWS_AS(mt::rate(-1.0, p), std::domain_error);
}

TEST_CASE("conditional_outage closed reductions") {
  const mt::LinkStatistics uncorrelated(0.0, 0.0);
  CHECK(mt::conditional_outage(0.0, uncorrelated, 2.0) == 0.0);
  CHECK_THAT(mt::conditional_outage(1.0, uncorrelated, 2.0),
             Catch::Matchers::WithinAbs(1.0 - std::exp(-0.5), 1e-12));
  // perfect-correlation limit branch
  const mt::LinkStatistics perfect(1.0, 0.0);
  CHECK(mt::conditional_outage(1.0, perfect, 2.0) == 0.0);
  CHECK(mt::conditional_outage(1.0, perfect, 0.5) == 1.0);
  CHECK_THROWS_AS(mt::conditional_outage(1.0, uncorrelated, 0.0), std::domain_error);
}

TEST_CASE("conditional_outage agrees with the conditional sampler") {
  const mt::LinkStatistics stats(0.9696, 0.00544);
  const double delta = 1.9952623149688795;
  const double closed = mt::conditional_outage(1.0, stats, delta);
  csit::mc::McConfig cfg;
  cfg.samples = 1000000;
  cfg.seed = 5150;
  const auto est = csit::mc::empirical_conditional_outage(1.0, stats, delta, cfg);
  CHECK(std::abs(est.mean - closed) <= 3.0 * est.std_error);
}

TEST_CASE("conditional_outage never increases with backoff") {
  const mt::LinkStatistics stats(0.9, 0.05);
  for (double g : {0.2, 1.0, 4.0}) {
    for (double delta : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      CHECK(mt::conditional_outage(g, stats, 2.0 * delta) <=
            mt::conditional_outage(g, stats, delta) + 1e-12);
    }
  }
}

TEST_CASE("outage_probability reference values") {
  CHECK_THAT(mt::outage_probability(mt::LinkStatistics(1.0, 0.0), 2.0),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  // delta equal to the estimate power pins the probability at one half
  CHECK(mt::outage_probability(mt::LinkStatistics(0.7, 0.3), 1.3) == 0.5);
  CHECK_THAT(mt::outage_probability(mt::LinkStatistics(0.0, 0.0), 2.0),
             Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
  CHECK_THROWS_AS(mt::outage_probability(mt::LinkStatistics(1.0, 0.0), 1.0), std::logic_error);
  CHECK_THROWS_AS(mt::outage_probability(mt::LinkStatistics(0.5, 0.0), -2.0), std::domain_error);
}

TEST_CASE("outage_probability zero-correlation identity") {
  csit::Rng rng(246);
  for (int i = 0; i < 100; ++i) {
    const double sige = 2.0 * rng.uniform();
    const double delta = 0.01 + 10.0 * rng.uniform();
    const double s2 = 1.0 + sige;
    const double expected = s2 / (delta + s2);
    CHECK_THAT(mt::outage_probability(mt::LinkStatistics(0.0, sige), delta),
               Catch::Matchers::WithinAbs(expected, 1e-12));
  }
}

TEST_CASE("outage_probability threshold at delta = sigma^2") {
  csit::Rng rng(135);
  for (int i = 0; i < 1000; ++i) {
    const double rho = 2.0 * rng.uniform() - 1.0;
    if (std::abs(rho) >= 1.0) continue;
    const double sige = 3.0 * rng.uniform();
    const double delta = std::exp(3.0 * (2.0 * rng.uniform() - 1.0));
    const double p = mt::outage_probability(mt::LinkStatistics(rho, sige), delta);
    CHECK((p < 0.5) == (delta > 1.0 + sige));
  }
}

TEST_CASE("outage_probability monotone in correlation and backoff") {
  for (double sige : kSigeGrid) {
    for (double delta : kDeltaGrid) {
      double prev = 1.0;
      for (double rho : {0.0, 0.3, 0.6, 0.9, 0.99}) {
        const double p = mt::outage_probability(mt::LinkStatistics(rho, sige), delta);
        CHECK(p <= prev + 1e-12);
        prev = p;
      }
    }
  }
  for (double rho : kRhoGrid) {
    for (double sige : kSigeGrid) {
      double prev = 1.0;
      for (double delta : {1.1, 1.5, 2.0, 3.6, 8.0}) {
        const double p = mt::outage_probability(mt::LinkStatistics(rho, sige), delta);
        CHECK(p <= prev + 1e-12);
        prev = p;
      }
    }
  }
}

TEST_CASE("averaging the conditional outage reproduces the closed form") {
  for (double rho : kRhoGrid) {
    for (double sige : kSigeGrid) {
      for (double delta : kDeltaGrid) {
        const mt::LinkStatistics stats(rho, sige);
        const double s2 = stats.sigma_sq();
        const auto integral = csit::quad::integrate_semi_infinite(
            [&](double x) {
              return mt::conditional_outage(x, stats, delta) * std::exp(-x / s2) / s2;
            },
            s2, 1e-9, 1e-8);
        CHECK_THAT(integral.value,
                   Catch::Matchers::WithinAbs(mt::outage_probability(stats, delta), 1e-6));
      }
    }
  }
}

TEST_CASE("average_effective_rate perfect-CSI limit") {
  const mt::RateAdaptParams p{1.0, 1.0, 1.0};
  const mt::LinkStatistics perfect(1.0, 0.0);
  const double expected = std::exp(1.0) * oracles::exp_integral_e1(1.0);
  CHECK_THAT(mt::average_effective_rate(p, perfect), Catch::Matchers::WithinAbs(expected, 1e-7));
  const mt::RateAdaptParams starved{1.0, 1e9, 1.0};
  CHECK(mt::average_effective_rate(starved, perfect) < 1e-6);
}

TEST_CASE("average_effective_rate bounded by the perfect-CSI ergodic rate") {
  const double snr = 3.1622776601683795;
  const mt::RateAdaptParams ideal{snr, 1.0, 1.0};
  const mt::LinkStatistics perfect(1.0, 0.0);
  const double upper = mt::average_effective_rate(ideal, perfect);
  for (double rho : {0.5, 0.9}) {
    for (double sige : {0.00544, 0.17}) {
      for (double delta : {1.5, 3.6}) {
        const mt::RateAdaptParams p{snr, delta, 1.0};
        const double eta = mt::average_effective_rate(p, mt::LinkStatistics(rho, sige));
        CHECK(eta >= 0.0);
        CHECK(eta <= upper + 1e-9);
      }
    }
  }
}

TEST_CASE("calibrate_backoff") {
  const mt::LinkStatistics stats(0.0, 0.0);
  CHECK_THAT(mt::calibrate_backoff(0.5, stats), Catch::Matchers::WithinRel(1.0, 1e-9));
  CHECK_THAT(mt::calibrate_backoff(1.0 / 3.0, stats), Catch::Matchers::WithinRel(2.0, 1e-9));
  const mt::LinkStatistics noisy(0.82, 0.21);
  CHECK_THAT(mt::calibrate_backoff(0.5, noisy), Catch::Matchers::WithinRel(1.21, 1e-9));
  // round trip
  csit::Rng rng(864);
  for (int i = 0; i < 50; ++i) {
    const double rho = 0.98 * (2.0 * rng.uniform() - 1.0);
    const double sige = rng.uniform();
    const double target = 0.02 + 0.45 * rng.uniform();
    const mt::LinkStatistics s(rho, sige);
    const double delta = mt::calibrate_backoff(target, s);
    CHECK_THAT(mt::outage_probability(s, delta), Catch::Matchers::WithinAbs(target, 1e-9));
  }
  CHECK_THROWS_AS(mt::calibrate_backoff(1e-9, stats), mt::InfeasibleTargetError);
  CHECK_THROWS_AS(mt::calibrate_backoff(0.0, stats), std::domain_error);
}
