#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "csit/channel.hpp"
#include "csit/rng.hpp"
#include "oracles.hpp"

namespace ch = csit::channel;

TEST_CASE("doppler_frequency hand-checked values") {
  CHECK(ch::doppler_frequency(0.0, 2e9) == 0.0);
  CHECK_THAT(ch::doppler_frequency(15.0, 2e9),
             Catch::Matchers::WithinRel(27.797007933179337, 1e-12));
  CHECK_THAT(ch::doppler_frequency(50.0, 2e9),
             Catch::Matchers::WithinRel(92.656693110597792, 1e-12));
  CHECK_THROWS_AS(ch::doppler_frequency(-1.0, 2e9), std::domain_error);
  CHECK_THROWS_AS(ch::doppler_frequency(1.0, 0.0), std::domain_error);
}

TEST_CASE("autocorrelation equals J0 of the Doppler-lag product") {
  CHECK(ch::autocorrelation(123.45, 0.0) == 1.0);
  CHECK(ch::autocorrelation(0.0, 5.0) == 1.0);
  const double arg1 = 2.0 * std::numbers::pi * 27.796 * 0.002;
  CHECK_THAT(ch::autocorrelation(27.796, 0.002),
             Catch::Matchers::WithinAbs(oracles::bessel_j0_series(arg1), 1e-12));
  CHECK_THAT(ch::autocorrelation(27.796, 0.002),
             Catch::Matchers::WithinAbs(0.9697300810904188, 1e-10));
  const double arg2 = 2.0 * std::numbers::pi * 92.656 * 0.004;
  CHECK_THAT(ch::autocorrelation(92.656, 0.004),
             Catch::Matchers::WithinAbs(oracles::bessel_j0_series(arg2), 1e-12));
  CHECK_THAT(ch::autocorrelation(92.656, 0.004),
             Catch::Matchers::WithinAbs(0.0401210426799773, 1e-10));
  for (double fd : {1.0, 20.0, 300.0})
    for (double t : {1e-4, 2e-3, 0.4}) CHECK(std::abs(ch::autocorrelation(fd, t)) <= 1.0);
}

TEST_CASE("estimation_variance") {
  CHECK(ch::estimation_variance({0.0544, std::numeric_limits<double>::infinity()}) == 0.0);
  CHECK_THAT(ch::estimation_variance({0.0544, 10.0}), Catch::Matchers::WithinRel(0.00544, 1e-12));
  CHECK_THAT(ch::estimation_variance({0.0544, 0.313}),
             Catch::Matchers::WithinRel(0.17380191693290735, 1e-12));
  CHECK_THROWS_AS(ch::estimation_variance({0.0544, 0.0}), std::domain_error);
  CHECK_THROWS_AS(ch::estimation_variance({0.0544, -1.0}), std::domain_error);
}

TEST_CASE("normalized_correlation") {
  CHECK(ch::normalized_correlation(1.0, 0.0) == 1.0);
  CHECK(ch::normalized_correlation(0.0, 7.0) == 0.0);
  CHECK_THAT(ch::normalized_correlation(0.9696, 0.00544),
             Catch::Matchers::WithinRel(0.9669733996842976, 1e-12));
  // strictly decreasing in the error variance
  double prev = 1.0;
  for (double s : {0.001, 0.01, 0.1, 0.5, 2.0}) {
    const double r = ch::normalized_correlation(0.9, s);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("sample_joint_pair moments and correlation") {
  csit::Rng rng(314159);
  const double sigma_e_sq = 0.00544;
  const int n = 1000000;
  double sum_hat = 0.0, sum_next = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto s = ch::sample_joint_pair(0.9, sigma_e_sq, rng);
    sum_hat += s.gamma_hat;
    sum_next += s.gamma_next;
  }
  const double mean_hat = sum_hat / n;
  const double mean_next = sum_next / n;
  // exponential mean has std error mean/sqrt(n)
  CHECK(std::abs(mean_hat - (1.0 + sigma_e_sq)) < 3.0 * (1.0 + sigma_e_sq) / std::sqrt(n));
  CHECK(std::abs(mean_next - 1.0) < 3.0 / std::sqrt(n));
}

TEST_CASE("sample_joint_pair reproduces the requested correlation") {
  // for jointly exponential unit-mean pairs, E[g1 g2] = 1 + rho_tilde^2
  csit::Rng rng(2718);
  const double rho_tilde = 0.9;
  const int batches = 32, per_batch = 31250;
  std::vector<double> batch_means;
  double total = 0.0;
  for (int b = 0; b < batches; ++b) {
    double acc = 0.0;
    for (int i = 0; i < per_batch; ++i) {
      const auto s = ch::sample_joint_pair(rho_tilde, 0.0, rng);
      acc += s.gamma_hat * s.gamma_next;
    }
    total += acc;
    batch_means.push_back(acc / per_batch);
  }
  const double mean = total / (batches * per_batch);
  double var = 0.0;
  for (double m : batch_means) var += (m - mean) * (m - mean);
  const double se = std::sqrt(var / (batches - 1) / batches);
  CHECK(std::abs(mean - (1.0 + rho_tilde * rho_tilde)) < 3.0 * se);
}

TEST_CASE("sample_joint_pair marginal is exponential (KS at the 1% level)") {
  csit::Rng rng(99);
  const int n = 100000;
  std::vector<double> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i)
    draws.push_back(ch::sample_joint_pair(0.7, 0.1, rng).gamma_next);
  const double d =
      oracles::ks_distance(std::move(draws), [](double x) { return 1.0 - std::exp(-x); });
  CHECK(d < 1.62762 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("orthogonal pilots are exactly orthogonal") {
  // Hadamard construction (power-of-two length): exact in floating point
  const auto p0 = ch::orthogonal_pilot(0, 8);
  const auto p1 = ch::orthogonal_pilot(1, 8);
  std::complex<double> dot{0.0, 0.0};
  double energy = 0.0;
  for (std::size_t l = 0; l < 8; ++l) {
    dot += std::conj(p0[l]) * p1[l];
    energy += std::norm(p1[l]);
  }
  CHECK(dot.real() == 0.0);
  CHECK(dot.imag() == 0.0);
  CHECK_THAT(energy, Catch::Matchers::WithinAbs(1.0, 1e-12));
  // projecting a pure cross-BS signal leaks exactly nothing
  const std::complex<double> h2{0.83, -0.41};
  std::complex<double> leak{0.0, 0.0};
  for (std::size_t l = 0; l < 8; ++l) leak += std::conj(p0[l]) * (h2 * p1[l]);
  CHECK(std::norm(leak) == 0.0);

  // DFT construction for non-power-of-two lengths
  const auto q0 = ch::orthogonal_pilot(0, 6);
  const auto q2 = ch::orthogonal_pilot(2, 6);
  std::complex<double> dot2{0.0, 0.0};
  for (std::size_t l = 0; l < 6; ++l) dot2 += std::conj(q0[l]) * q2[l];
  CHECK(std::abs(dot2) < 1e-14);
}

TEST_CASE("simulate_pilot_sinr converges to the analytic post-projection SINR") {
  const double snr = 3.16227766016838;  // 5 dB
  for (double inr : {0.0, 1.0}) {
    ch::PilotSimConfig cfg;
    cfg.n_bs = 1;
    cfg.pilot_len = 8;
    cfg.snr_dl_per_bs = {snr};
    cfg.si.inr = inr;
    csit::Rng rng(4242);
    const double emp = ch::simulate_pilot_sinr(cfg, 0, 100000, rng);
    const double analytic = snr / (1.0 + inr);
    CHECK(std::abs(emp - analytic) / analytic < 0.05);
  }
}

TEST_CASE("simulate_pilot_sinr with two base stations keeps pilots separable") {
  ch::PilotSimConfig cfg;
  cfg.n_bs = 2;
  cfg.pilot_len = 8;
  cfg.snr_dl_per_bs = {3.16227766016838, 10.0};
  cfg.si.inr = 0.5;
  csit::Rng rng(777);
  const double emp = ch::simulate_pilot_sinr(cfg, 0, 100000, rng);
  const double analytic = cfg.snr_dl_per_bs[0] / (1.0 + cfg.si.inr);
  CHECK(std::abs(emp - analytic) / analytic < 0.05);
}

TEST_CASE("simulate_pilot_sinr validates configuration") {
  ch::PilotSimConfig cfg;
  cfg.n_bs = 4;
  cfg.pilot_len = 2;  // orthogonality impossible
  cfg.snr_dl_per_bs = {1.0, 1.0, 1.0, 1.0};
  csit::Rng rng(1);
  CHECK_THROWS_AS(ch::simulate_pilot_sinr(cfg, 0, 10, rng), std::invalid_argument);
  cfg.pilot_len = 8;
  CHECK_THROWS_AS(ch::simulate_pilot_sinr(cfg, 9, 10, rng), std::invalid_argument);
}

TEST_CASE("coherence_symbol_budget") {
  const std::int64_t budget = ch::coherence_symbol_budget(50.0, 2e9, 1e5, 0.8);
  CHECK(budget > 150);
  // independent route: bisection on the rational series oracle
  const double fd = 50.0 / 3.6 * 2e9 / 299792458.0;
  const double z = oracles::bessel_j0_first_crossing(0.8);
  const auto expected =
      static_cast<std::int64_t>(std::floor(1e5 * z / (2.0 * std::numbers::pi * fd)));
  CHECK(budget == expected);
  CHECK(std::abs(budget - 156) <= 1);
  CHECK(ch::coherence_symbol_budget(0.0, 2e9, 1e5, 0.8) == ch::kUnboundedCoherenceBudget);
  CHECK_THROWS_AS(ch::coherence_symbol_budget(50.0, 2e9, 1e5, 1.2), std::domain_error);
  CHECK_THROWS_AS(ch::coherence_symbol_budget(50.0, 2e9, 1e5, 0.0), std::domain_error);
}
