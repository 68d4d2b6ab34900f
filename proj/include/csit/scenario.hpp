#pragma once

#include <algorithm>
#include <cstdio>
#include <future>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "csit/channel.hpp"
#include "csit/montecarlo.hpp"
#include "csit/rng.hpp"
#include "csit/schemes.hpp"
#include "csit/units.hpp"

namespace csit::scenario {

// Sweep axes. rho_tilde drives the analytic outage-only mode (curves of the
// closed form against the raw correlation, one per backoff/variance pair);
// the other two sweep full scheme throughputs.
enum class Axis { inr_db, speed_kmh, rho_tilde };

inline std::string to_string(Axis axis) {
  switch (axis) {
    case Axis::inr_db: return "inr_db";
    case Axis::speed_kmh: return "speed_kmh";
    case Axis::rho_tilde: return "rho_tilde";
  }
  throw std::logic_error("to_string: bad Axis");
}

inline Axis axis_from_string(const std::string& s) {
  if (s == "inr_db") return Axis::inr_db;
  if (s == "speed_kmh") return Axis::speed_kmh;
  if (s == "rho_tilde") return Axis::rho_tilde;
  throw std::invalid_argument("unknown sweep axis: " + s);
}

// One curve of the outage-only mode.
struct PoutCurve {
  double delta_db = 3.0;
  double sigma_e_sq = 0.0;
};

// Scenario description with boundary units: powers in dB, times in ms,
// speed in km/h, carrier in GHz. Conversion to linear/SI happens exactly
// once, on entry into the scheme and channel layers.
struct ScenarioConfig {
  double carrier_ghz = 2.0;
  double speed_kmh = 15.0;
  double snr_ul_db = 5.0;
  double snr_dl_db = 5.0;
  double inr_db = 0.0;
  double kappa = 0.1;
  double t_min_ms = 2.0;
  double t_pr_ms = 4.0;
  double c_e = 0.0544;
  double gamma_gap_db = 1.0;
  std::map<std::string, double> delta_db = {
      {"PCSI", 0.0}, {"PROBE", 5.6}, {"FDCSI", 3.0}, {"FDDATA", 5.6}};
  Axis axis = Axis::inr_db;
  std::vector<double> grid;
  // Scheme labels; FDDATA may carry a bandwidth-fraction suffix, e.g.
  // "FDDATA@1/5", overriding kappa for that curve.
  std::vector<std::string> schemes = {"PCSI", "PROBE", "FDCSI", "FDDATA"};
  std::optional<mc::McConfig> mc;
  std::vector<PoutCurve> pout_curves;  // rho_tilde axis only

  void validate() const {
    if (grid.empty()) throw std::invalid_argument("ScenarioConfig: empty sweep grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1]))
        throw std::invalid_argument("ScenarioConfig: grid must be strictly increasing");
    if (axis == Axis::rho_tilde) {
      if (pout_curves.empty())
        throw std::invalid_argument("ScenarioConfig: rho_tilde sweep needs pout_curves");
    }
    if (mc) mc->validate();
  }
};

struct SweepRow {
  std::string scheme;
  std::string axis;
  double axis_value = 0.0;
  std::optional<double> throughput_mnats;
  double pout = 0.0;
  std::optional<double> mc_throughput;
  std::optional<double> mc_throughput_se;
  std::optional<double> mc_pout;
  std::optional<double> mc_pout_se;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

enum class ExecMode { sequential, parallel };

namespace detail {

struct ParsedScheme {
  schemes::SchemeTag tag;
  std::optional<double> kappa_override;
  std::string label;
};

inline ParsedScheme parse_scheme_label(const std::string& label) {
  const auto at = label.find('@');
  const std::string head = label.substr(0, at);
  ParsedScheme parsed;
  parsed.label = label;
  if (head == "PCSI")
    parsed.tag = schemes::SchemeTag::pcsi;
  else if (head == "PROBE")
    parsed.tag = schemes::SchemeTag::probe;
  else if (head == "FDCSI")
    parsed.tag = schemes::SchemeTag::fdcsi;
  else if (head == "FDDATA")
    parsed.tag = schemes::SchemeTag::fddata;
  else
    throw std::invalid_argument("unknown scheme label: " + label);
  if (at != std::string::npos) {
    const std::string frac = label.substr(at + 1);
    const auto slash = frac.find('/');
    double value = 0.0;
    try {
      if (slash != std::string::npos) {
        value = std::stod(frac.substr(0, slash)) / std::stod(frac.substr(slash + 1));
      } else {
        value = std::stod(frac);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("bad bandwidth fraction in scheme label: " + label);
    }
    if (!(value > 0.0 && value <= 1.0))
      throw std::invalid_argument("bandwidth fraction out of (0,1] in: " + label);
    parsed.kappa_override = value;
  }
  return parsed;
}

inline std::string format_sig9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

inline std::string opt_field(const std::optional<double>& v) {
  return v ? format_sig9(*v) : std::string("NA");
}

}  // namespace detail

// Defaults shared by every shipped preset: 2 GHz carrier, 1 dB capacity gap,
// 5 dB uplink SNR at 1 MHz, 2 ms full-duplex and 4 ms probing CSI delays,
// 5.6 dB probing/fddata backoff, one tenth of the downlink megahertz for
// pilots.
inline ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  cfg.grid = {-10.0, -7.5, -5.0, -2.5, 0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};
  return cfg;
}

// Shipped presets mirroring the three study sweeps: outage vs correlation,
// throughput vs residual self-interference, throughput vs UE speed.
inline ScenarioConfig figure_preset(const std::string& id) {
  ScenarioConfig cfg = default_scenario();
  if (id == "fig2") {
    cfg.axis = Axis::rho_tilde;
    cfg.grid.clear();
    for (int i = 0; i <= 99; ++i) cfg.grid.push_back(0.01 * i);
    cfg.schemes.clear();
    // Example (backoff, estimation-variance) pairs; edit to taste.
    cfg.pout_curves = {{3.0, 0.0}, {3.0, 0.1}, {6.0, 0.0}, {6.0, 0.1}};
    return cfg;
  }
  if (id == "fig3") {
    cfg.axis = Axis::inr_db;
    cfg.speed_kmh = 15.0;
    cfg.snr_dl_db = 5.0;
    cfg.delta_db["FDCSI"] = 3.0;
    cfg.schemes = {"PCSI", "PROBE", "FDCSI", "FDDATA@1/10", "FDDATA@1/5"};
    return cfg;
  }
  if (id == "fig4") {
    cfg.axis = Axis::speed_kmh;
    cfg.grid = {5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0, 45.0, 50.0};
    cfg.snr_dl_db = 0.0;
    cfg.inr_db = -5.0;
    cfg.delta_db["FDCSI"] = 3.1;
    cfg.schemes = {"PCSI", "PROBE", "FDCSI", "FDDATA@1/10", "FDDATA@1/5"};
    return cfg;
  }
  throw std::invalid_argument("unknown figure preset: " + id);
}

namespace detail {

inline SweepRow evaluate_point(const ScenarioConfig& cfg, const ParsedScheme& scheme,
                               double axis_value, std::uint64_t seed_index) {
  SweepRow row;
  row.scheme = scheme.label;
  row.axis = to_string(cfg.axis);
  row.axis_value = axis_value;

  schemes::LinkBudget budget;
  budget.snr_ul = db_to_linear(cfg.snr_ul_db);
  budget.snr_dl = db_to_linear(cfg.snr_dl_db);
  budget.inr = db_to_linear(cfg.inr_db);
  budget.kappa = scheme.kappa_override.value_or(cfg.kappa);
  budget.t_min_s = ms_to_s(cfg.t_min_ms);
  budget.t_pr_s = ms_to_s(cfg.t_pr_ms);
  budget.c_e = cfg.c_e;

  channel::FadingParams fading;
  fading.carrier_hz = ghz_to_hz(cfg.carrier_ghz);
  fading.speed_kmh = cfg.speed_kmh;

  if (cfg.axis == Axis::inr_db)
    budget.inr = db_to_linear(axis_value);
  else
    fading.speed_kmh = axis_value;

  const auto it = cfg.delta_db.find(to_string(scheme.tag));
  const double delta_db = it != cfg.delta_db.end() ? it->second : 0.0;

  const auto report =
      schemes::scheme_throughput(scheme.tag, budget, fading, delta_db, cfg.gamma_gap_db);
  row.throughput_mnats = report.throughput_mnats_per_s;
  row.pout = report.pout;

  if (cfg.mc) {
    const double fd = channel::doppler_frequency(fading.speed_kmh, fading.carrier_hz);
    const double delta = db_to_linear(delta_db);
    const double gamma_gap = db_to_linear(cfg.gamma_gap_db);
    const auto leg_stats = [&](schemes::Leg leg, double t_csi) {
      const double sinr = schemes::scheme_sinr_csi(scheme.tag, budget, leg);
      const double sig_e =
          std::isinf(sinr) ? 0.0 : channel::estimation_variance({budget.c_e, sinr});
      return metrics::LinkStatistics(channel::autocorrelation(fd, t_csi), sig_e);
    };
    const double t_ul = scheme.tag == schemes::SchemeTag::pcsi    ? 0.0
                        : scheme.tag == schemes::SchemeTag::fdcsi ? budget.t_min_s
                                                                  : budget.t_pr_s;
    const auto stats_ul = leg_stats(schemes::Leg::uplink, t_ul);
    Rng seeder = derive_stream(cfg.mc->seed, seed_index);
    mc::McConfig rate_cfg = *cfg.mc;
    rate_cfg.seed = seeder.next_u64();
    mc::McConfig pout_cfg = *cfg.mc;
    pout_cfg.seed = seeder.next_u64();
    mc::McConfig dl_cfg = *cfg.mc;
    dl_cfg.seed = seeder.next_u64();
    const metrics::RateAdaptParams params_ul{budget.snr_ul, delta, gamma_gap};
    const auto rate_est = mc::empirical_effective_rate(params_ul, stats_ul, rate_cfg);
    const auto pout_est = mc::empirical_outage(stats_ul, delta, pout_cfg);
    if (scheme.tag == schemes::SchemeTag::fddata) {
      const double snr_dl_eff = schemes::scheme_sinr_csi(scheme.tag, budget, schemes::Leg::downlink);
      const auto stats_dl = leg_stats(schemes::Leg::downlink, budget.t_pr_s);
      const metrics::RateAdaptParams params_dl{snr_dl_eff, delta, gamma_gap};
      const auto dl_est = mc::empirical_effective_rate(params_dl, stats_dl, dl_cfg);
      row.mc_throughput = rate_est.mean + budget.kappa * dl_est.mean;
      row.mc_throughput_se = std::sqrt(rate_est.std_error * rate_est.std_error +
                                       budget.kappa * budget.kappa * dl_est.std_error *
                                           dl_est.std_error);
    } else {
      row.mc_throughput = rate_est.mean;
      row.mc_throughput_se = rate_est.std_error;
    }
    row.mc_pout = pout_est.mean;
    row.mc_pout_se = pout_est.std_error;
  }
  return row;
}

inline SweepRow evaluate_pout_point(const PoutCurve& curve, double rho_tilde) {
  SweepRow row;
  char label[64];
  std::snprintf(label, sizeof(label), "delta%.4gdB_sige%.4g", curve.delta_db, curve.sigma_e_sq);
  row.scheme = label;
  row.axis = to_string(Axis::rho_tilde);
  row.axis_value = rho_tilde;
  const metrics::LinkStatistics stats(rho_tilde, curve.sigma_e_sq);
  row.pout = metrics::outage_probability(stats, db_to_linear(curve.delta_db));
  return row;
}

}  // namespace detail

// Evaluates every (scheme, grid point) pair. Rows come out in canonical
// order (scheme label, then axis value) and every Monte Carlo stream is
// derived from (base seed, canonical row index), so sequential and parallel
// execution produce identical tables.
inline SweepResult run_sweep(const ScenarioConfig& cfg, ExecMode mode = ExecMode::sequential) {
  cfg.validate();
  SweepResult result;

  if (cfg.axis == Axis::rho_tilde) {
    std::vector<std::pair<std::string, std::size_t>> order;
    for (std::size_t i = 0; i < cfg.pout_curves.size(); ++i) {
      char label[64];
      std::snprintf(label, sizeof(label), "delta%.4gdB_sige%.4g", cfg.pout_curves[i].delta_db,
                    cfg.pout_curves[i].sigma_e_sq);
      order.emplace_back(label, i);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [label, idx] : order)
      for (double v : cfg.grid)
        result.rows.push_back(detail::evaluate_pout_point(cfg.pout_curves[idx], v));
    return result;
  }

  std::vector<detail::ParsedScheme> parsed;
  parsed.reserve(cfg.schemes.size());
  for (const auto& label : cfg.schemes) parsed.push_back(detail::parse_scheme_label(label));
  std::sort(parsed.begin(), parsed.end(),
            [](const auto& a, const auto& b) { return a.label < b.label; });

  const std::size_t n_rows = parsed.size() * cfg.grid.size();
  std::vector<SweepRow> rows(n_rows);
  const auto task = [&](std::size_t i) {
    const auto& scheme = parsed[i / cfg.grid.size()];
    const double axis_value = cfg.grid[i % cfg.grid.size()];
    return detail::evaluate_point(cfg, scheme, axis_value, static_cast<std::uint64_t>(i));
  };

  if (mode == ExecMode::parallel) {
    std::vector<std::future<SweepRow>> futures;
    futures.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i)
      futures.push_back(std::async(std::launch::async, task, i));
    for (std::size_t i = 0; i < n_rows; ++i) rows[i] = futures[i].get();
  } else {
    for (std::size_t i = 0; i < n_rows; ++i) rows[i] = task(i);
  }
  result.rows = std::move(rows);
  return result;
}

inline std::string to_csv(const SweepResult& result) {
  std::string out =
      "scheme,axis,axis_value,throughput_mnats,pout,mc_throughput,mc_throughput_se,mc_pout,"
      "mc_pout_se\n";
  for (const auto& row : result.rows) {
    out += detail::csv_field(row.scheme);
    out += ',';
    out += detail::csv_field(row.axis);
    out += ',';
    out += detail::format_sig9(row.axis_value);
    out += ',';
    out += detail::opt_field(row.throughput_mnats);
    out += ',';
    out += detail::format_sig9(row.pout);
    out += ',';
    out += detail::opt_field(row.mc_throughput);
    out += ',';
    out += detail::opt_field(row.mc_throughput_se);
    out += ',';
    out += detail::opt_field(row.mc_pout);
    out += ',';
    out += detail::opt_field(row.mc_pout_se);
    out += '\n';
  }
  return out;
}

inline void to_json(nlohmann::json& j, const ScenarioConfig& cfg) {
  j = nlohmann::json{{"carrier_ghz", cfg.carrier_ghz},
                     {"speed_kmh", cfg.speed_kmh},
                     {"snr_ul_db", cfg.snr_ul_db},
                     {"snr_dl_db", cfg.snr_dl_db},
                     {"inr_db", cfg.inr_db},
                     {"kappa", cfg.kappa},
                     {"t_min_ms", cfg.t_min_ms},
                     {"t_pr_ms", cfg.t_pr_ms},
                     {"c_e", cfg.c_e},
                     {"gamma_gap_db", cfg.gamma_gap_db},
                     {"delta_db", cfg.delta_db},
                     {"sweep", {{"axis", to_string(cfg.axis)}, {"values", cfg.grid}}},
                     {"schemes", cfg.schemes}};
  if (cfg.mc) {
    j["mc"] = {{"samples", cfg.mc->samples}, {"seed", cfg.mc->seed}, {"batches", cfg.mc->batches}};
  }
  if (!cfg.pout_curves.empty()) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : cfg.pout_curves)
      curves.push_back({{"delta_db", c.delta_db}, {"sigma_e_sq", c.sigma_e_sq}});
    j["pout_curves"] = curves;
  }
}

inline void from_json(const nlohmann::json& j, ScenarioConfig& cfg) {
  cfg = ScenarioConfig{};
  cfg.grid.clear();
  cfg.carrier_ghz = j.value("carrier_ghz", cfg.carrier_ghz);
  cfg.speed_kmh = j.value("speed_kmh", cfg.speed_kmh);
  cfg.snr_ul_db = j.value("snr_ul_db", cfg.snr_ul_db);
  cfg.snr_dl_db = j.value("snr_dl_db", cfg.snr_dl_db);
  cfg.inr_db = j.value("inr_db", cfg.inr_db);
  cfg.kappa = j.value("kappa", cfg.kappa);
  cfg.t_min_ms = j.value("t_min_ms", cfg.t_min_ms);
  cfg.t_pr_ms = j.value("t_pr_ms", cfg.t_pr_ms);
  cfg.c_e = j.value("c_e", cfg.c_e);
  cfg.gamma_gap_db = j.value("gamma_gap_db", cfg.gamma_gap_db);
  if (j.contains("delta_db"))
    for (const auto& [key, value] : j.at("delta_db").items())
      cfg.delta_db[key] = value.get<double>();
  const auto& sweep = j.at("sweep");
  cfg.axis = axis_from_string(sweep.at("axis").get<std::string>());
  cfg.grid = sweep.at("values").get<std::vector<double>>();
  if (j.contains("schemes")) cfg.schemes = j.at("schemes").get<std::vector<std::string>>();
  if (j.contains("mc")) {
    mc::McConfig m;
    m.samples = j.at("mc").value("samples", m.samples);
    m.seed = j.at("mc").value("seed", m.seed);
    m.batches = j.at("mc").value("batches", m.batches);
    cfg.mc = m;
  }
  if (j.contains("pout_curves")) {
    cfg.pout_curves.clear();
    for (const auto& c : j.at("pout_curves"))
      cfg.pout_curves.push_back({c.at("delta_db").get<double>(), c.at("sigma_e_sq").get<double>()});
  }
}

}  // namespace csit::scenario
