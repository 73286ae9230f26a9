#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "entbuffer/analytics.hpp"
#include "entbuffer/protocols.hpp"

namespace entbuffer {

enum class SuccessMode {
  constant_p,  // pump succeeds with the configured p regardless of fidelity
  linear_p,    // pump succeeds with probability clamp(jump.success_prob(F), 0, 1)
};

// Simulation input. Rates are carried raw rather than through SystemParams
// so that lambda = 0 (a system that never generates, useful as a test mode)
// stays constructible; validate() enforces everything else.
struct SimConfig {
  double lambda = 1.0;
  double mu = 0.0;
  double gamma = 0.0;
  double q = 1.0;
  double p = 1.0;  // used in constant_p mode only
  RationalJump jump{1.0, 0.0, 0.0, 1.0};
  double f_new = 1.0;
  double t_sim = 50.0;
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 1;
  SuccessMode mode = SuccessMode::constant_p;
  int threads = 0;  // 0: ENTBUFFER_THREADS env var, else hardware concurrency

  static SimConfig from(const SystemParams& params, const RationalJump& jump, double f_new,
                        double t_sim, std::int64_t n_samples, std::uint64_t seed,
                        SuccessMode mode);

  void validate() const;  // throws domain_error on out-of-range fields
};

// Outcome of one replication observed at t_sim.
struct RunResult {
  bool occupied;
  double fidelity;  // 0 when empty (sentinel; a held link always has F >= 1/4)
  int level;        // pumping rounds survived; -1 when empty
  double lifetime;  // age of the current occupancy period; 0 when empty
  std::int64_t clamp_events;
};

// Simulates one replication on the stream keyed by (config.seed, index).
RunResult run_one(const SimConfig& config, std::uint64_t index);

struct Replications {
  std::vector<RunResult> results;
  std::int64_t clamp_events;  // total success probability clamps across runs
};

// Runs all replications, possibly across threads; results are stored by
// replication index so every reduction is order independent.
Replications run_all(const SimConfig& config);

struct SimEstimate {
  double avg_fidelity;
  double stderr_fidelity;
  double availability;
  double stderr_availability;
  std::int64_t n_samples;
  std::int64_t n_nonempty;
  std::int64_t clamp_events;
};

// Point estimates with standard errors. Throws degenerate_error when fewer
// than two replications end non-empty.
SimEstimate estimate(const SimConfig& config);
SimEstimate estimate_from(const SimConfig& config, const Replications& reps);

struct LevelHistogram {
  std::vector<std::int64_t> counts;  // counts[i] = replications at level i
  std::int64_t empty_count;
  double tv_distance;  // total variation against the closed-form distribution
};

// Occupancy-level histogram; requires constant_p mode (the closed-form
// distribution it is compared against assumes a constant success
// probability).
LevelHistogram level_histogram(const SimConfig& config);
LevelHistogram level_histogram(const SimConfig& config, const Replications& reps);

struct LifetimeStats {
  std::vector<double> samples;  // current-lifetime values of non-empty runs
  double beta;                  // model rate mu + lambda q (1 - p)
  double ks_statistic;          // one-sample KS distance to Exp(beta)
};

// Current-lifetime samples at t_sim; requires constant_p mode.
LifetimeStats lifetime_samples(const SimConfig& config);
LifetimeStats lifetime_samples(const SimConfig& config, const Replications& reps);

}  // namespace entbuffer
