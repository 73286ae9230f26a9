#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "entbuffer/analytics.hpp"
#include "entbuffer/errors.hpp"
#include "entbuffer/protocols.hpp"
#include "entbuffer/rng.hpp"
#include "entbuffer/simulator.hpp"
#include "support.hpp"

using entbuffer::avg_fidelity_linear;
using entbuffer::BellDiagonalState;
using entbuffer::degenerate_error;
using entbuffer::domain_error;
using entbuffer::LevelHistogram;
using entbuffer::LifetimeStats;
using entbuffer::LinearJump;
using entbuffer::MetricsResult;
using entbuffer::protocol_jump;
using entbuffer::ProtocolId;
using entbuffer::RationalJump;
using entbuffer::Replications;
using entbuffer::RunResult;
using entbuffer::SimConfig;
using entbuffer::SimEstimate;
using entbuffer::SplitMix64;
using entbuffer::SuccessMode;
using entbuffer::SystemParams;

namespace {

RationalJump affine_jump(double a, double b) { return RationalJump(a, b, 0.0, 1.0); }

SimConfig reference_config() {
  SimConfig c;
  c.lambda = 1.0;
  c.mu = 0.1;
  c.gamma = 0.025;
  c.q = 1.0;
  c.p = 0.75;
  c.jump = affine_jump(1.0 / 3.0, 0.6);
  c.f_new = 0.8;
  c.t_sim = 50.0;
  c.n_samples = 4000;
  c.seed = 77;
  c.mode = SuccessMode::constant_p;
  c.threads = 2;
  return c;
}

bool identical(const std::vector<RunResult>& a, const std::vector<RunResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].occupied != b[i].occupied || a[i].fidelity != b[i].fidelity ||
        a[i].level != b[i].level || a[i].lifetime != b[i].lifetime ||
        a[i].clamp_events != b[i].clamp_events) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("configuration is validated") {
  SimConfig c = reference_config();
  CHECK_NOTHROW(c.validate());
  c.lambda = -1.0;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.mu = -0.1;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.gamma = -1e-9;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.q = 1.5;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.p = -0.2;
  CHECK_THROWS_AS(c.validate(), domain_error);
  // p is only consulted in constant mode
  c.mode = SuccessMode::linear_p;
  CHECK_NOTHROW(c.validate());
  c = reference_config();
  c.f_new = 0.2;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.t_sim = 0.0;
  CHECK_THROWS_AS(c.validate(), domain_error);
  c = reference_config();
  c.n_samples = 1;
  CHECK_THROWS_AS(c.validate(), domain_error);
  // lambda = 0 is allowed: a system that never generates
  c = reference_config();
  c.lambda = 0.0;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("identical configurations reproduce bit-identical results") {
  const SimConfig c = reference_config();
  const Replications a = entbuffer::run_all(c);
  const Replications b = entbuffer::run_all(c);
  CHECK(identical(a.results, b.results));
  CHECK(a.clamp_events == b.clamp_events);
}

TEST_CASE("results do not depend on the thread count") {
  SimConfig c = reference_config();
  c.n_samples = 3001;  // odd count so partitions are uneven
  c.threads = 1;
  const Replications serial = entbuffer::run_all(c);
  c.threads = 4;
  const Replications parallel = entbuffer::run_all(c);
  CHECK(identical(serial.results, parallel.results));
  CHECK(serial.clamp_events == parallel.clamp_events);

  const SimEstimate es = entbuffer::estimate_from(c, serial);
  const SimEstimate ep = entbuffer::estimate_from(c, parallel);
  CHECK(es.avg_fidelity == ep.avg_fidelity);
  CHECK(es.availability == ep.availability);
}

TEST_CASE("thread count can come from the environment") {
  SimConfig c = reference_config();
  c.n_samples = 500;
  c.threads = 1;
  const Replications serial = entbuffer::run_all(c);
  setenv("ENTBUFFER_THREADS", "3", 1);
  c.threads = 0;
  const Replications from_env = entbuffer::run_all(c);
  unsetenv("ENTBUFFER_THREADS");
  CHECK(identical(serial.results, from_env.results));
}

TEST_CASE("a system that never generates stays empty") {
  SimConfig c = reference_config();
  c.lambda = 0.0;
  c.n_samples = 50;
  const Replications reps = entbuffer::run_all(c);
  for (const auto& r : reps.results) {
    CHECK_FALSE(r.occupied);
    CHECK(r.fidelity == 0.0);
    CHECK(r.level == -1);
  }
  CHECK_THROWS_AS(entbuffer::estimate_from(c, reps), degenerate_error);
}

TEST_CASE("per-run outcomes satisfy the structural invariants") {
  SimConfig c;
  c.lambda = 1.2;
  c.mu = 0.15;
  c.gamma = 0.05;
  c.q = 0.7;
  c.jump = protocol_jump(ProtocolId::pump_l1, BellDiagonalState(0.7, 0.12, 0.1, 0.08));
  c.f_new = 0.7;
  c.t_sim = 40.0;
  c.n_samples = 2000;
  c.seed = 99;
  c.mode = SuccessMode::linear_p;
  c.threads = 2;
  const Replications reps = entbuffer::run_all(c);
  int occupied = 0;
  for (const auto& r : reps.results) {
    if (r.occupied) {
      ++occupied;
      CHECK(r.fidelity >= 0.25 - 1e-12);
      CHECK(r.fidelity <= 1.0 + 1e-12);
      CHECK(r.level >= 0);
      CHECK(r.lifetime > 0.0);
      CHECK(r.lifetime <= c.t_sim);
    } else {
      CHECK(r.fidelity == 0.0);
      CHECK(r.level == -1);
      CHECK(r.lifetime == 0.0);
    }
  }
  CHECK(occupied > 0);
  CHECK(occupied < 2000);
  // catalogue rows keep the success probability inside [0, 1], so the clamp
  // counter must stay at zero
  CHECK(reps.clamp_events == 0);
}

TEST_CASE("estimates match the closed form across operating points") {
  SplitMix64 rng(601);
  for (int trial = 0; trial < 10; ++trial) {
    const double lambda = 0.5 + 1.5 * rng.uniform();
    const double mu = 0.05 + 0.45 * rng.uniform();
    const double gamma = 0.1 * rng.uniform();
    const double q = 0.3 + 0.7 * rng.uniform();
    const double p = 0.2 + 0.7 * rng.uniform();
    const LinearJump jump = testsupport::random_jump(rng);
    const double f_new = 0.3 + 0.65 * rng.uniform();

    const SystemParams params(lambda, mu, gamma, q, p);
    SimConfig c = SimConfig::from(params, affine_jump(jump.a, jump.b), f_new, 100.0, 10000,
                                  9000 + static_cast<std::uint64_t>(trial),
                                  SuccessMode::constant_p);
    c.threads = 4;
    const SimEstimate est = entbuffer::estimate(c);
    const MetricsResult model = avg_fidelity_linear(params, jump, f_new);
    CHECK(std::abs(est.avg_fidelity - model.avg_fidelity) < 4.0 * est.stderr_fidelity + 1e-9);
    CHECK(std::abs(est.availability - model.availability) <
          4.0 * est.stderr_availability + 1e-9);
  }
}

TEST_CASE("availability alone matches when pumping is disabled") {
  SimConfig c = reference_config();
  c.q = 0.0;
  c.n_samples = 20000;
  c.threads = 4;
  const SimEstimate est = entbuffer::estimate(c);
  const double expected = 1.0 / 1.1;
  CHECK(std::abs(est.availability - expected) < 4.0 * est.stderr_availability);
  // consumed-at-t links are fresh links aged by Exp(mu): mean from the model
  const MetricsResult model =
      avg_fidelity_linear(SystemParams(1.0, 0.1, 0.025, 0.0, 0.75), LinearJump(1.0 / 3.0, 0.6),
                          0.8);
  CHECK(std::abs(est.avg_fidelity - model.avg_fidelity) < 4.0 * est.stderr_fidelity);
}

TEST_CASE("level histogram approaches the geometric law") {
  SimConfig c = reference_config();
  c.n_samples = 20000;
  c.threads = 4;
  const LevelHistogram h = entbuffer::level_histogram(c);
  std::int64_t total = h.empty_count;
  for (const auto n : h.counts) total += n;
  CHECK(total == c.n_samples);
  CHECK(h.tv_distance < 0.02);
}

TEST_CASE("occupancy ages follow the memoryless law") {
  SimConfig c = reference_config();
  c.n_samples = 20000;
  c.threads = 4;
  const LifetimeStats stats = entbuffer::lifetime_samples(c);
  CHECK(stats.beta == doctest::Approx(0.35).epsilon(1e-12));
  REQUIRE(stats.samples.size() > 1000);
  const double critical =
      1.63 / std::sqrt(static_cast<double>(stats.samples.size()));
  CHECK(stats.ks_statistic < critical);

  // rate bookkeeping in the two degenerate directions
  SimConfig never_pump = reference_config();
  never_pump.q = 0.0;
  never_pump.n_samples = 100;
  CHECK(entbuffer::lifetime_samples(never_pump).beta == doctest::Approx(0.1).epsilon(1e-12));
  SimConfig always_fail = reference_config();
  always_fail.p = 0.0;
  always_fail.n_samples = 100;
  CHECK(entbuffer::lifetime_samples(always_fail).beta ==
        doctest::Approx(1.1).epsilon(1e-12));
}

TEST_CASE("diagnostics require the constant-probability mode") {
  SimConfig c = reference_config();
  c.mode = SuccessMode::linear_p;
  c.jump = protocol_jump(ProtocolId::pump_l2, BellDiagonalState(0.8, 0.1, 0.06, 0.04));
  c.n_samples = 10;
  const Replications reps = entbuffer::run_all(c);
  CHECK_THROWS_AS(entbuffer::level_histogram(c, reps), domain_error);
  CHECK_THROWS_AS(entbuffer::lifetime_samples(c, reps), domain_error);
}

TEST_CASE("estimate arithmetic on a hand-built sample") {
  Replications reps;
  reps.clamp_events = 0;
  reps.results = {
      {true, 0.5, 0, 1.0, 0}, {false, 0.0, -1, 0.0, 0}, {true, 0.7, 1, 2.0, 0},
      {false, 0.0, -1, 0.0, 0}, {true, 0.9, 2, 3.0, 0},
  };
  SimConfig c = reference_config();
  c.n_samples = 5;
  const SimEstimate est = entbuffer::estimate_from(c, reps);
  CHECK(est.n_samples == 5);
  CHECK(est.n_nonempty == 3);
  CHECK(est.avg_fidelity == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(est.stderr_fidelity == doctest::Approx(std::sqrt(0.08 / 6.0)).epsilon(1e-12));
  CHECK(est.availability == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(est.stderr_availability == doctest::Approx(std::sqrt(0.6 * 0.4 / 5.0)).epsilon(1e-12));

  // fewer than two held links -> no fidelity estimate
  reps.results = {{true, 0.5, 0, 1.0, 0}, {false, 0.0, -1, 0.0, 0}};
  CHECK_THROWS_AS(entbuffer::estimate_from(c, reps), degenerate_error);
}

}  // TEST_SUITE
