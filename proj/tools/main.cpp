#include <cmath>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "config.hpp"
#include "csv.hpp"
#include "entbuffer/analytics.hpp"
#include "entbuffer/errors.hpp"
#include "entbuffer/regimes.hpp"
#include "entbuffer/simulator.hpp"
#include "entbuffer/verify.hpp"

namespace {

using namespace entbuffer;
using namespace entbuffer::cli;

double require_q(const FileConfig& cfg) {
  if (!cfg.q) throw domain_error("config is missing required field \"system.q\"");
  return *cfg.q;
}

double require_p(const FileConfig& cfg) {
  if (!cfg.p) throw domain_error("config is missing required field \"system.p\"");
  return *cfg.p;
}

int cmd_analyze(const std::string& config_path, const std::string& out_path) {
  const FileConfig cfg = load_config(config_path);
  const SystemParams params(cfg.lambda, cfg.mu, cfg.gamma, require_q(cfg), require_p(cfg));
  const LinearJump jump = cfg.protocol.resolve_linear();
  const MetricsResult metrics = avg_fidelity_linear(params, jump, cfg.protocol.f_new);
  const NoiseThreshold threshold = noise_threshold(jump, params.p, params.mu, cfg.protocol.f_new);
  const SteadyState ss = steady_state(params);

  OutputTarget target(out_path);
  std::ostream& os = target.stream();
  os << "availability " << fmt9(metrics.availability) << "\n";
  os << "avg_fidelity " << fmt9(metrics.avg_fidelity) << "\n";
  os << "noise_threshold ";
  switch (threshold.kind) {
    case ThresholdKind::finite: os << fmt9(threshold.value); break;
    case ThresholdKind::always_beneficial: os << "always_beneficial"; break;
    case ThresholdKind::degenerate: os << "degenerate"; break;
  }
  os << "\n";
  os << "pi_empty " << fmt9(ss.pi_empty) << "\n";
  for (int i = 0; i <= 5; ++i) {
    os << "pi_" << i << " " << fmt9(ss.pi(i)) << "\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& param, double from, double to,
              int steps, const std::string& out_path) {
  const FileConfig cfg = load_config(config_path);
  if (param != "q" && param != "p" && param != "gamma" && param != "mu" && param != "lambda") {
    throw domain_error("--param must be one of q, p, gamma, mu, lambda");
  }
  if (steps < 1) throw domain_error("--steps must be >= 1");
  if (!(from <= to)) throw domain_error("--from must not exceed --to");
  const double q = require_q(cfg);
  const double p = require_p(cfg);
  const LinearJump jump = cfg.protocol.resolve_linear();

  OutputTarget target(out_path);
  std::ostream& os = target.stream();
  os << "param_value,availability,avg_fidelity\n";
  for (int k = 0; k < steps; ++k) {
    const double v = steps == 1 ? from : from + (to - from) * k / (steps - 1);
    double lambda = cfg.lambda, mu = cfg.mu, gamma = cfg.gamma, qq = q, pp = p;
    if (param == "lambda") lambda = v;
    else if (param == "mu") mu = v;
    else if (param == "gamma") gamma = v;
    else if (param == "q") qq = v;
    else pp = v;
    const SystemParams params(lambda, mu, gamma, qq, pp);
    const MetricsResult m = avg_fidelity_linear(params, jump, cfg.protocol.f_new);
    os << fmt9(v) << ',' << fmt9(m.availability) << ',' << fmt9(m.avg_fidelity) << "\n";
  }
  return 0;
}

int cmd_regimes(const std::string& config_path, const std::string& out_path) {
  const FileConfig cfg = load_config(config_path);
  if (!cfg.protocol.rho_new) {
    throw domain_error("regimes needs a \"protocol.rho_new\" state (the band depends on it)");
  }
  const RateParams rates(cfg.lambda, cfg.mu, cfg.gamma);
  const auto band = clifford_band(rates, *cfg.protocol.rho_new, 101);
  const double cap = universal_cap(rates, cfg.protocol.f_new);
  const OperatingPoint rep = replacement_point(rates, cfg.protocol.f_new);

  OutputTarget target(out_path);
  std::ostream& os = target.stream();
  os << "q,avail_lower_p,f_lower,avail_upper_p,f_upper\n";
  for (const auto& pt : band) {
    os << fmt9(pt.q) << ',' << fmt9(pt.avail_lower) << ',' << fmt9(pt.f_lower) << ','
       << fmt9(pt.avail_upper) << ',' << fmt9(pt.f_upper) << "\n";
  }
  os << "# universal_cap," << fmt9(cap) << "\n";
  os << "# replacement_availability," << fmt9(rep.availability) << "\n";
  os << "# replacement_fidelity," << fmt9(rep.avg_fidelity) << "\n";
  return 0;
}

struct SimulateFlags {
  std::optional<std::int64_t> samples;
  std::optional<double> t_sim;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  bool diagnostics = false;
  std::string out_path;
};

int cmd_simulate(const std::string& config_path, const SimulateFlags& flags) {
  const FileConfig cfg = load_config(config_path);
  SimConfig sc;
  sc.lambda = cfg.lambda;
  sc.mu = cfg.mu;
  sc.gamma = cfg.gamma;
  sc.q = require_q(cfg);
  sc.mode = cfg.mode;
  if (flags.mode) {
    if (*flags.mode == "constant") sc.mode = SuccessMode::constant_p;
    else if (*flags.mode == "linear") sc.mode = SuccessMode::linear_p;
    else throw domain_error("--mode must be \"constant\" or \"linear\"");
  }
  if (sc.mode == SuccessMode::constant_p) {
    sc.p = require_p(cfg);
  } else {
    sc.p = cfg.p.value_or(1.0);  // unused in linear mode
  }
  sc.jump = cfg.protocol.resolve();
  sc.f_new = cfg.protocol.f_new;
  sc.t_sim = flags.t_sim.value_or(cfg.t_sim);
  sc.n_samples = flags.samples.value_or(cfg.n_samples);
  sc.seed = flags.seed.value_or(cfg.seed);
  sc.validate();

  const Replications reps = run_all(sc);

  OutputTarget target(flags.out_path);
  std::ostream& os = target.stream();
  os << "avg_fidelity,stderr_fidelity,availability,stderr_availability,n_samples,n_nonempty\n";

  SimEstimate est{};
  bool degenerate = false;
  std::string degenerate_reason;
  try {
    est = estimate_from(sc, reps);
  } catch (const degenerate_error& e) {
    degenerate = true;
    degenerate_reason = e.what();
    std::int64_t nonempty = 0;
    for (const auto& r : reps.results) nonempty += r.occupied ? 1 : 0;
    const double n = static_cast<double>(reps.results.size());
    const double avail = static_cast<double>(nonempty) / n;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    est = {nan, nan, avail, std::sqrt(avail * (1.0 - avail) / n),
           static_cast<std::int64_t>(reps.results.size()), nonempty, reps.clamp_events};
  }
  os << fmt9(est.avg_fidelity) << ',' << fmt9(est.stderr_fidelity) << ','
     << fmt9(est.availability) << ',' << fmt9(est.stderr_availability) << ','
     << est.n_samples << ',' << est.n_nonempty << "\n";

  if (flags.diagnostics) {
    const LevelHistogram hist = level_histogram(sc, reps);
    const LifetimeStats life = lifetime_samples(sc, reps);
    os << "# clamp_events," << est.clamp_events << "\n";
    os << "# tv_distance," << fmt9(hist.tv_distance) << "\n";
    os << "# level,count,pi_model\n";
    const SystemParams params(sc.lambda, sc.mu, sc.gamma, sc.q, sc.p);
    const SteadyState ss = steady_state(params);
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
      os << i << ',' << hist.counts[i] << ',' << fmt9(ss.pi(static_cast<int>(i))) << "\n";
    }
    os << "# empty," << hist.empty_count << ',' << fmt9(ss.pi_empty) << "\n";
    os << "# lifetime_rate," << fmt9(life.beta) << "\n";
    os << "# ks_statistic," << fmt9(life.ks_statistic) << "\n";
    os << "# ks_critical_1pct,"
       << fmt9(1.63 / std::sqrt(static_cast<double>(life.samples.size()))) << "\n";

    // Horizon check: the estimate should be stationary, so doubling t_sim
    // must move the average by at most about one combined standard error.
    SimConfig doubled = sc;
    doubled.t_sim = 2.0 * sc.t_sim;
    try {
      const SimEstimate est2 = estimate(doubled);
      const double sigma = std::hypot(est.stderr_fidelity, est2.stderr_fidelity);
      os << "# doubled_horizon_avg_fidelity," << fmt9(est2.avg_fidelity) << "\n";
      os << "# doubled_horizon_delta_sigmas,"
         << fmt9(std::abs(est2.avg_fidelity - est.avg_fidelity) / sigma) << "\n";
    } catch (const degenerate_error&) {
      os << "# doubled_horizon_avg_fidelity,nan\n";
    }
  }

  if (degenerate) {
    std::cerr << "error: " << degenerate_reason << "\n";
    return 3;
  }
  return 0;
}

int cmd_verify() {
  VerifyOptions options;
  options.log = &std::cout;
  const VerifyReport report = run_verification(options);
  std::cout << (report.ok ? "all checks passed" : "verification FAILED") << " ("
            << report.checks_run << " checks)\n";
  if (!report.ok) {
    std::cerr << "verification failed: " << report.first_failure << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytics and simulation for a buffered two-memory entanglement link"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;

  CLI::App* analyze = app.add_subcommand("analyze", "Closed-form metrics for one configuration");
  analyze->add_option("config", config_path, "JSON config file")->required();
  analyze->add_option("--out", out_path, "Write the report here instead of stdout");

  std::string sweep_param;
  double sweep_from = 0.0;
  double sweep_to = 1.0;
  int sweep_steps = 101;
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep one parameter, CSV output");
  sweep->add_option("config", config_path, "JSON config file")->required();
  sweep->add_option("--param", sweep_param, "One of q, p, gamma, mu, lambda")->required();
  sweep->add_option("--from", sweep_from, "Start value")->required();
  sweep->add_option("--to", sweep_to, "End value")->required();
  sweep->add_option("--steps", sweep_steps, "Number of grid points");
  sweep->add_option("--out", out_path, "Output CSV path (default stdout)");

  CLI::App* regimes = app.add_subcommand("regimes", "Achievability band over q, CSV output");
  regimes->add_option("config", config_path, "JSON config file")->required();
  regimes->add_option("--out", out_path, "Output CSV path (default stdout)");

  SimulateFlags sim_flags;
  std::int64_t opt_samples = 0;
  double opt_t_sim = 0.0;
  std::string opt_mode;
  std::uint64_t opt_seed = 0;
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate, CSV output");
  simulate->add_option("config", config_path, "JSON config file")->required();
  CLI::Option* o_samples = simulate->add_option("--samples", opt_samples, "Replication count");
  CLI::Option* o_tsim = simulate->add_option("--t-sim", opt_t_sim, "Observation horizon");
  CLI::Option* o_mode = simulate->add_option("--mode", opt_mode, "constant or linear");
  CLI::Option* o_seed = simulate->add_option("--seed", opt_seed, "RNG seed");
  simulate->add_flag("--diagnostics", sim_flags.diagnostics,
                     "Append level histogram, lifetime fit and horizon check");
  simulate->add_option("--out", out_path, "Output CSV path (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "Run the full self-check suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(config_path, out_path);
    if (sweep->parsed()) {
      return cmd_sweep(config_path, sweep_param, sweep_from, sweep_to, sweep_steps, out_path);
    }
    if (regimes->parsed()) return cmd_regimes(config_path, out_path);
    if (simulate->parsed()) {
      if (o_samples->count() > 0) sim_flags.samples = opt_samples;
      if (o_tsim->count() > 0) sim_flags.t_sim = opt_t_sim;
      if (o_mode->count() > 0) sim_flags.mode = opt_mode;
      if (o_seed->count() > 0) sim_flags.seed = opt_seed;
      sim_flags.out_path = out_path;
      return cmd_simulate(config_path, sim_flags);
    }
    if (verify->parsed()) return cmd_verify();
  } catch (const degenerate_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
