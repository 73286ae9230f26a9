#include "entbuffer/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "entbuffer/errors.hpp"
#include "entbuffer/rng.hpp"
#include "entbuffer/states.hpp"

namespace entbuffer {

namespace {

int resolve_threads(const SimConfig& config) {
  int threads = config.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("ENTBUFFER_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1 && v <= 4096) threads = static_cast<int>(v);
    }
  }
  if (threads <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  const std::int64_t cap = std::max<std::int64_t>(1, config.n_samples);
  return static_cast<int>(std::min<std::int64_t>(threads, cap));
}

void require_constant_mode(const SimConfig& config, const char* what) {
  if (config.mode != SuccessMode::constant_p) {
    throw domain_error(std::string(what) +
                       " compares against a constant-success-probability model; run in constant "
                       "mode");
  }
}

}  // namespace

SimConfig SimConfig::from(const SystemParams& params, const RationalJump& jump, double f_new,
                          double t_sim, std::int64_t n_samples, std::uint64_t seed,
                          SuccessMode mode) {
  SimConfig c;
  c.lambda = params.lambda;
  c.mu = params.mu;
  c.gamma = params.gamma;
  c.q = params.q;
  c.p = params.p;
  c.jump = jump;
  c.f_new = f_new;
  c.t_sim = t_sim;
  c.n_samples = n_samples;
  c.seed = seed;
  c.mode = mode;
  c.validate();
  return c;
}

void SimConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw domain_error("generation rate lambda must be >= 0");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw domain_error("consumption rate mu must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw domain_error("noise rate gamma must be >= 0");
  if (!(q >= 0.0 && q <= 1.0)) throw domain_error("q must lie in [0, 1]");
  if (mode == SuccessMode::constant_p && !(p >= 0.0 && p <= 1.0)) {
    throw domain_error("p must lie in [0, 1]");
  }
  if (!(f_new >= 0.25 && f_new <= 1.0)) throw domain_error("fresh fidelity must lie in [1/4, 1]");
  if (!(t_sim > 0.0) || !std::isfinite(t_sim)) throw domain_error("t_sim must be positive");
  if (n_samples < 2) throw domain_error("need at least two replications");
}

RunResult run_one(const SimConfig& config, std::uint64_t index) {
  SplitMix64 rng(mix_stream_seed(config.seed, index));
  constexpr double inf = std::numeric_limits<double>::infinity();

  bool occupied = false;
  double f_last = 0.0;        // fidelity at the last event touching the link
  double t_last = 0.0;        // time of that event
  double period_start = 0.0;  // start of the current occupancy period
  int level = -1;
  std::int64_t clamps = 0;

  double t = 0.0;
  while (true) {
    if (!occupied) {
      if (!(config.lambda > 0.0)) break;  // never generates; stays empty
      t += rng.exponential(config.lambda);
      if (t >= config.t_sim) break;
      occupied = true;
      level = 0;
      f_last = config.f_new;
      t_last = t;
      period_start = t;
      continue;
    }
    const double dt_gen = config.lambda > 0.0 ? rng.exponential(config.lambda) : inf;
    const double dt_con = config.mu > 0.0 ? rng.exponential(config.mu) : inf;
    const double dt = std::min(dt_gen, dt_con);
    if (dt == inf) break;  // nothing can happen anymore
    t += dt;
    if (t >= config.t_sim) break;
    if (dt_con <= dt_gen) {
      occupied = false;  // consumed
      level = -1;
      continue;
    }
    // A fresh link arrived; with probability q it is used for pumping.
    if (!rng.bernoulli(config.q)) continue;  // discarded
    const double f_now = depolarize(f_last, t - t_last, config.gamma);
    double ps;
    if (config.mode == SuccessMode::constant_p) {
      ps = config.p;
    } else {
      ps = config.jump.success_prob(f_now);
      if (ps < 0.0 || ps > 1.0) {
        ++clamps;
        ps = std::clamp(ps, 0.0, 1.0);
      }
    }
    if (rng.bernoulli(ps)) {
      f_last = config.jump.value(f_now);
      t_last = t;
      ++level;
    } else {
      occupied = false;  // failed pump destroys the stored link
      level = -1;
    }
  }

  if (!occupied) return {false, 0.0, -1, 0.0, clamps};
  const double f_final = depolarize(f_last, config.t_sim - t_last, config.gamma);
  return {true, f_final, level, config.t_sim - period_start, clamps};
}

Replications run_all(const SimConfig& config) {
  config.validate();
  const std::int64_t n = config.n_samples;
  Replications out;
  out.results.resize(static_cast<std::size_t>(n));

  const int threads = resolve_threads(config);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) {
      out.results[static_cast<std::size_t>(i)] = run_one(config, static_cast<std::uint64_t>(i));
    }
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    pool.reserve(static_cast<std::size_t>(threads));
    for (int tix = 0; tix < threads; ++tix) {
      const std::int64_t lo = n * tix / threads;
      const std::int64_t hi = n * (tix + 1) / threads;
      pool.emplace_back([&, lo, hi, tix] {
        try {
          for (std::int64_t i = lo; i < hi; ++i) {
            out.results[static_cast<std::size_t>(i)] =
                run_one(config, static_cast<std::uint64_t>(i));
          }
        } catch (...) {
          errors[static_cast<std::size_t>(tix)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Sequential reduction in index order keeps totals thread-count invariant.
  out.clamp_events = 0;
  for (const auto& r : out.results) out.clamp_events += r.clamp_events;
  return out;
}

SimEstimate estimate_from(const SimConfig& /*config*/, const Replications& reps) {
  const std::int64_t n = static_cast<std::int64_t>(reps.results.size());
  std::int64_t nonempty = 0;
  double sum_f = 0.0;
  for (const auto& r : reps.results) {
    if (r.occupied) {
      ++nonempty;
      sum_f += r.fidelity;
    }
  }
  if (nonempty < 2) {
    throw degenerate_error("fewer than two replications held a link at t_sim; no fidelity "
                           "estimate");
  }
  const double avg_f = sum_f / static_cast<double>(nonempty);
  double ssq = 0.0;
  for (const auto& r : reps.results) {
    if (r.occupied) {
      const double d = r.fidelity - avg_f;
      ssq += d * d;
    }
  }
  const double nn = static_cast<double>(nonempty);
  const double avail = nn / static_cast<double>(n);
  return {avg_f,
          std::sqrt(ssq / (nn * (nn - 1.0))),
          avail,
          std::sqrt(avail * (1.0 - avail) / static_cast<double>(n)),
          n,
          nonempty,
          reps.clamp_events};
}

SimEstimate estimate(const SimConfig& config) { return estimate_from(config, run_all(config)); }

LevelHistogram level_histogram(const SimConfig& config, const Replications& reps) {
  require_constant_mode(config, "level_histogram");
  LevelHistogram out;
  out.empty_count = 0;
  for (const auto& r : reps.results) {
    if (!r.occupied) {
      ++out.empty_count;
      continue;
    }
    if (static_cast<std::size_t>(r.level) >= out.counts.size()) {
      out.counts.resize(static_cast<std::size_t>(r.level) + 1, 0);
    }
    ++out.counts[static_cast<std::size_t>(r.level)];
  }

  const SystemParams params(config.lambda, config.mu, config.gamma, config.q, config.p);
  const SteadyState ss = steady_state(params);
  const double n = static_cast<double>(reps.results.size());
  double tv = std::abs(static_cast<double>(out.empty_count) / n - ss.pi_empty);
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    tv += std::abs(static_cast<double>(out.counts[i]) / n - ss.pi(static_cast<int>(i)));
  }
  // Model mass at levels never observed.
  tv += out.counts.empty() ? ss.availability()
                           : ss.tail_mass(static_cast<int>(out.counts.size()) - 1);
  out.tv_distance = 0.5 * tv;
  return out;
}

LevelHistogram level_histogram(const SimConfig& config) {
  return level_histogram(config, run_all(config));
}

LifetimeStats lifetime_samples(const SimConfig& config, const Replications& reps) {
  require_constant_mode(config, "lifetime_samples");
  LifetimeStats out;
  out.beta = config.mu + config.lambda * config.q * (1.0 - config.p);
  if (!(out.beta > 0.0)) {
    throw degenerate_error("occupancy periods never end (mu = 0 and q (1 - p) = 0)");
  }
  for (const auto& r : reps.results) {
    if (r.occupied) out.samples.push_back(r.lifetime);
  }
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) {
    out.ks_statistic = 1.0;
    return out;
  }
  double d = 0.0;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double cdf = 1.0 - std::exp(-out.beta * sorted[i]);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  out.ks_statistic = d;
  return out;
}

LifetimeStats lifetime_samples(const SimConfig& config) {
  return lifetime_samples(config, run_all(config));
}

}  // namespace entbuffer
