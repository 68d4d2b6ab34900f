#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csit/channel.hpp"
#include "csit/metrics.hpp"
#include "csit/montecarlo.hpp"
#include "csit/scenario.hpp"
#include "csit/schemes.hpp"
#include "csit/svg.hpp"
#include "csit/units.hpp"
#include "csit/validate.hpp"

namespace csit::cli {

namespace detail {

inline std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

inline void write_artifact(const std::string& body, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output path: " + path);
  file.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!file) throw std::runtime_error("write failed: " + path);
}

inline void emit_sweep(const scenario::SweepResult& result, const scenario::ScenarioConfig& cfg,
                       const std::string& format, const std::string& y_metric,
                       const std::string& path, std::ostream& out) {
  if (format == "csv") {
    write_artifact(scenario::to_csv(result), path, out);
    return;
  }
  if (format == "svg") {
    const bool want_pout = y_metric == "pout" || cfg.axis == scenario::Axis::rho_tilde;
    const auto metric = want_pout ? svg::Metric::pout : svg::Metric::throughput;
    write_artifact(svg::render(result, scenario::to_string(cfg.axis), metric), path, out);
    return;
  }
  throw CLI::ValidationError("--format", "unknown format: " + format);
}

struct McFlags {
  bool enabled = false;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 1;
};

inline void apply_mc_flags(scenario::ScenarioConfig& cfg, const McFlags& flags) {
  if (!flags.enabled) return;
  mc::McConfig m;
  m.samples = flags.samples;
  m.seed = flags.seed;
  cfg.mc = m;
}

}  // namespace detail

// Parses and runs one invocation. Returns the process exit status: 0 on
// success, 1 on numeric/convergence/I-O failure (and on a failed validation
// run), 2 on usage errors. `args` holds the arguments without the program
// name.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"uplink rate adaptation under delayed, noisy CSIT: outage, effective rate and "
               "throughput analysis with Monte Carlo cross-checks"};
  app.require_subcommand(1);

  // --- pout ---
  auto* pout_cmd = app.add_subcommand("pout", "closed-form average outage probability");
  double pout_rho = 0.0, pout_sige = 0.0, pout_delta_db = 0.0;
  pout_cmd->add_option("--rho-tilde", pout_rho, "channel autocorrelation at the CSI lag")
      ->required();
  pout_cmd->add_option("--sigma-e-sq", pout_sige, "estimation error variance")
      ->capture_default_str();
  pout_cmd->add_option("--delta-db", pout_delta_db, "backoff [dB]")->required();

  // --- rate ---
  auto* rate_cmd = app.add_subcommand("rate", "instantaneous rate for an SNR estimate");
  double rate_gamma = 1.0, rate_snr_db = 5.0, rate_delta_db = 0.0, rate_gap_db = 0.0;
  rate_cmd->add_option("--gamma-hat", rate_gamma, "estimated instantaneous SNR (linear)")
      ->required();
  rate_cmd->add_option("--snr-db", rate_snr_db, "average data SNR [dB]")->required();
  rate_cmd->add_option("--delta-db", rate_delta_db, "backoff [dB]")->capture_default_str();
  rate_cmd->add_option("--gamma-gap-db", rate_gap_db, "capacity gap [dB]")->capture_default_str();

  // --- ase ---
  auto* ase_cmd = app.add_subcommand("ase", "average effective rate [nats/symbol]");
  double ase_rho = 0.0, ase_sige = 0.0, ase_snr_db = 5.0, ase_delta_db = 0.0, ase_gap_db = 0.0,
         ase_tol = 1e-8;
  ase_cmd->add_option("--rho-tilde", ase_rho, "channel autocorrelation at the CSI lag")
      ->required();
  ase_cmd->add_option("--sigma-e-sq", ase_sige, "estimation error variance")
      ->capture_default_str();
  ase_cmd->add_option("--snr-db", ase_snr_db, "average data SNR [dB]")->required();
  ase_cmd->add_option("--delta-db", ase_delta_db, "backoff [dB]")->capture_default_str();
  ase_cmd->add_option("--gamma-gap-db", ase_gap_db, "capacity gap [dB]")->capture_default_str();
  ase_cmd->add_option("--tol", ase_tol, "quadrature tolerance")->capture_default_str();

  // --- throughput ---
  auto* tput_cmd = app.add_subcommand("throughput", "bandwidth-normalized scheme throughput");
  std::string tput_scheme;
  double tp_snr_ul = 5.0, tp_snr_dl = 5.0, tp_inr = 0.0, tp_kappa = 0.1, tp_tmin = 2.0,
         tp_tpr = 4.0, tp_ce = 0.0544, tp_speed = 15.0, tp_carrier = 2.0, tp_gap_db = 1.0;
  std::optional<double> tp_delta_db;
  tput_cmd->add_option("--scheme", tput_scheme, "PCSI|PROBE|FDCSI|FDDATA[@frac]")->required();
  tput_cmd->add_option("--snr-ul-db", tp_snr_ul, "uplink SNR at 1 MHz [dB]")
      ->capture_default_str();
  tput_cmd->add_option("--snr-dl-db", tp_snr_dl, "downlink SNR at 1 MHz [dB]")
      ->capture_default_str();
  tput_cmd->add_option("--inr-db", tp_inr, "residual self-interference ratio [dB]")
      ->capture_default_str();
  tput_cmd->add_option("--kappa", tp_kappa, "downlink bandwidth fraction")->capture_default_str();
  tput_cmd->add_option("--t-min-ms", tp_tmin, "full-duplex CSI delay [ms]")
      ->capture_default_str();
  tput_cmd->add_option("--t-pr-ms", tp_tpr, "probing CSI delay [ms]")->capture_default_str();
  tput_cmd->add_option("--c-e", tp_ce, "estimation constant")->capture_default_str();
  tput_cmd->add_option("--speed-kmh", tp_speed, "UE speed [km/h]")->capture_default_str();
  tput_cmd->add_option("--carrier-ghz", tp_carrier, "carrier frequency [GHz]")
      ->capture_default_str();
  tput_cmd->add_option("--delta-db", tp_delta_db, "backoff [dB] (default per scheme)");
  tput_cmd->add_option("--gamma-gap-db", tp_gap_db, "capacity gap [dB]")->capture_default_str();

  // --- sweep ---
  auto* sweep_cmd = app.add_subcommand("sweep", "run a sweep from a JSON scenario file");
  std::string sweep_config, sweep_out, sweep_format = "csv", sweep_y = "throughput";
  bool sweep_parallel = false;
  detail::McFlags sweep_mc;
  sweep_cmd->add_option("--config", sweep_config, "scenario JSON path")
      ->required()
      ->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "output path (default: stdout)");
  sweep_cmd->add_option("--format", sweep_format, "csv|svg")->capture_default_str();
  sweep_cmd->add_option("--y", sweep_y, "svg metric: throughput|pout")->capture_default_str();
  sweep_cmd->add_flag("--parallel", sweep_parallel, "evaluate grid points concurrently");
  sweep_cmd->add_flag("--mc", sweep_mc.enabled, "add Monte Carlo columns");
  sweep_cmd->add_option("--samples", sweep_mc.samples, "Monte Carlo samples per point")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_mc.seed, "Monte Carlo base seed")->capture_default_str();

  // --- figure ---
  auto* fig_cmd = app.add_subcommand("figure", "run a shipped preset sweep");
  std::string fig_id, fig_out, fig_format = "csv", fig_y = "throughput";
  bool fig_parallel = false;
  detail::McFlags fig_mc;
  fig_cmd->add_option("id", fig_id, "fig2|fig3|fig4")->required();
  fig_cmd->add_option("--out", fig_out, "output path (default: stdout)");
  fig_cmd->add_option("--format", fig_format, "csv|svg")->capture_default_str();
  fig_cmd->add_option("--y", fig_y, "svg metric: throughput|pout")->capture_default_str();
  fig_cmd->add_flag("--parallel", fig_parallel, "evaluate grid points concurrently");
  fig_cmd->add_flag("--mc", fig_mc.enabled, "add Monte Carlo columns");
  fig_cmd->add_option("--samples", fig_mc.samples, "Monte Carlo samples per point")
      ->capture_default_str();
  fig_cmd->add_option("--seed", fig_mc.seed, "Monte Carlo base seed")->capture_default_str();

  // --- mc-validate ---
  auto* val_cmd = app.add_subcommand(
      "mc-validate", "closed-form vs Monte Carlo agreement over the reference grid");
  std::int64_t val_samples = 1000000;
  std::uint64_t val_seed = 1;
  val_cmd->add_option("--samples", val_samples, "samples per grid cell")->capture_default_str();
  val_cmd->add_option("--seed", val_seed, "base seed")->capture_default_str();

  // --- pilot-sim ---
  auto* pilot_cmd =
      app.add_subcommand("pilot-sim", "symbol-level pilot reception and projection SINR");
  std::vector<double> ps_snr_db{5.0};
  double ps_inr_db = 0.0, ps_mu = 0.0;
  std::size_t ps_len = 8, ps_target = 0;
  std::int64_t ps_blocks = 100000;
  std::uint64_t ps_seed = 1;
  pilot_cmd->add_option("--snr-dl-db", ps_snr_db, "per-BS downlink SNR [dB] (repeatable)")
      ->capture_default_str();
  pilot_cmd->add_option("--inr-db", ps_inr_db, "residual self-interference ratio [dB]")
      ->capture_default_str();
  pilot_cmd->add_option("--mu", ps_mu, "residual self-interference channel mean")
      ->capture_default_str();
  pilot_cmd->add_option("--pilot-len", ps_len, "pilot sequence length [symbols]")
      ->capture_default_str();
  pilot_cmd->add_option("--target", ps_target, "target BS index (0-based)")
      ->capture_default_str();
  pilot_cmd->add_option("--blocks", ps_blocks, "number of simulated blocks")
      ->capture_default_str();
  pilot_cmd->add_option("--seed", ps_seed, "random seed")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (*pout_cmd) {
      const metrics::LinkStatistics stats(pout_rho, pout_sige);
      out << detail::fmt6(metrics::outage_probability(stats, db_to_linear(pout_delta_db)))
          << "\n";
      return 0;
    }
    if (*rate_cmd) {
      const metrics::RateAdaptParams p{db_to_linear(rate_snr_db), db_to_linear(rate_delta_db),
                                       db_to_linear(rate_gap_db)};
      out << detail::fmt6(metrics::rate(rate_gamma, p)) << "\n";
      return 0;
    }
    if (*ase_cmd) {
      const metrics::LinkStatistics stats(ase_rho, ase_sige);
      const metrics::RateAdaptParams p{db_to_linear(ase_snr_db), db_to_linear(ase_delta_db),
                                       db_to_linear(ase_gap_db)};
      out << detail::fmt6(metrics::average_effective_rate(p, stats, ase_tol)) << "\n";
      return 0;
    }
    if (*tput_cmd) {
      const auto parsed = scenario::detail::parse_scheme_label(tput_scheme);
      schemes::LinkBudget budget;
      budget.snr_ul = db_to_linear(tp_snr_ul);
      budget.snr_dl = db_to_linear(tp_snr_dl);
      budget.inr = db_to_linear(tp_inr);
      budget.kappa = parsed.kappa_override.value_or(tp_kappa);
      budget.t_min_s = ms_to_s(tp_tmin);
      budget.t_pr_s = ms_to_s(tp_tpr);
      budget.c_e = tp_ce;
      channel::FadingParams fading{ghz_to_hz(tp_carrier), tp_speed, 0.0};
      const std::map<std::string, double> default_delta{
          {"PCSI", 0.0}, {"PROBE", 5.6}, {"FDCSI", 3.0}, {"FDDATA", 5.6}};
      const double delta_db =
          tp_delta_db.value_or(default_delta.at(schemes::to_string(parsed.tag)));
      const auto report =
          schemes::scheme_throughput(parsed.tag, budget, fading, delta_db, tp_gap_db);
      out << "scheme=" << parsed.label
          << " throughput_mnats_per_s=" << detail::fmt6(report.throughput_mnats_per_s)
          << " pout=" << detail::fmt6(report.pout) << "\n";
      if (report.components) {
        out << "  uplink_mnats=" << detail::fmt6(report.components->uplink_mnats)
            << " downlink_mnats=" << detail::fmt6(report.components->downlink_mnats)
            << " uplink_pout=" << detail::fmt6(report.components->uplink_pout)
            << " downlink_pout=" << detail::fmt6(report.components->downlink_pout) << "\n";
      }
      return 0;
    }
    if (*sweep_cmd) {
      std::ifstream in(sweep_config);
      nlohmann::json j;
      in >> j;
      auto cfg = j.get<scenario::ScenarioConfig>();
      detail::apply_mc_flags(cfg, sweep_mc);
      const auto result = scenario::run_sweep(
          cfg, sweep_parallel ? scenario::ExecMode::parallel : scenario::ExecMode::sequential);
      detail::emit_sweep(result, cfg, sweep_format, sweep_y, sweep_out, out);
      return 0;
    }
    if (*fig_cmd) {
      auto cfg = scenario::figure_preset(fig_id);
      detail::apply_mc_flags(cfg, fig_mc);
      const auto result = scenario::run_sweep(
          cfg, fig_parallel ? scenario::ExecMode::parallel : scenario::ExecMode::sequential);
      detail::emit_sweep(result, cfg, fig_format, fig_y, fig_out, out);
      return 0;
    }
    if (*val_cmd) {
      const auto cells = validate::agreement_grid(val_samples, val_seed);
      std::size_t passed = 0;
      for (const auto& c : cells) {
        if (c.pass()) ++passed;
        char line[256];
        std::snprintf(line, sizeof(line),
                      "rho=%.4g sige=%.5g delta=%.3g  pout %.6f vs %.6f (se %.2g) %s  ase %.6f "
                      "vs %.6f (se %.2g) %s\n",
                      c.rho_tilde, c.sigma_e_sq, c.delta, c.pout_closed, c.pout_mc, c.pout_se,
                      c.pout_ok ? "ok" : "FAIL", c.ase_quad, c.ase_mc, c.ase_se,
                      c.ase_ok ? "ok" : "FAIL");
        out << line;
      }
      const double fraction = static_cast<double>(passed) / static_cast<double>(cells.size());
      out << "passed " << passed << "/" << cells.size() << " cells\n";
      return fraction >= 0.99 ? 0 : 1;
    }
    if (*pilot_cmd) {
      channel::PilotSimConfig cfg;
      cfg.n_bs = ps_snr_db.size();
      cfg.pilot_len = ps_len;
      for (double s : ps_snr_db) cfg.snr_dl_per_bs.push_back(db_to_linear(s));
      cfg.si.inr = db_to_linear(ps_inr_db);
      cfg.si.mu = ps_mu;
      Rng rng(ps_seed);
      const double empirical = channel::simulate_pilot_sinr(cfg, ps_target, ps_blocks, rng);
      const double analytic = cfg.snr_dl_per_bs[ps_target] / (1.0 + cfg.si.inr);
      out << "empirical_sinr=" << detail::fmt6(empirical)
          << " analytic_sinr=" << detail::fmt6(analytic) << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace csit::cli
