#pragma once

#include <span>

#include "entbuffer/protocols.hpp"

namespace entbuffer {

// Rates and probabilities of the buffered link system. lambda: generation
// rate of fresh links (must be positive here; the simulator separately
// accepts a never-generating system for testing). mu: consumption rate.
// gamma: depolarizing noise rate. q: probability a fresh link is used for
// pumping rather than discarded. p: constant pumping success probability.
struct SystemParams {
  double lambda;
  double mu;
  double gamma;
  double q;
  double p;

  SystemParams(double lambda, double mu, double gamma, double q, double p);
};

// Fraction of time the buffer holds a link in steady state.
double availability(const SystemParams& params);

// Steady-state occupancy distribution: pi(i) is the probability of holding a
// link that has survived i pumping rounds; geometric with the stated ratio.
struct SteadyState {
  double pi_empty;
  double ratio;  // pi(i+1) / pi(i)

  double availability() const { return 1.0 - pi_empty; }
  double pi(int i) const;
  // Smallest N with sum_{i>N} pi(i) <= tol * availability; throws
  // degenerate_error when the distribution degenerates (ratio >= 1, which
  // needs mu = 0 and q = p = 1).
  int truncation_index(double tol) const;
  // sum_{i>n} pi(i).
  double tail_mass(int n) const;
};
SteadyState steady_state(const SystemParams& params);

// Fidelity of a link after surviving i pumping rounds with waiting times
// times[0..i] (time before the first attempt, between attempts, and after
// the last one), evaluated by direct alternation of decay and jump.
double fidelity_after_levels(std::span<const double> times, const LinearJump& jump, double f_new,
                             double gamma);

// Same quantity through the explicit per-round coefficient expansion; agrees
// with the recursion to 1e-12 and exists as an independent cross-check.
double fidelity_after_levels_closed(std::span<const double> times, const LinearJump& jump,
                                    double f_new, double gamma);

// Expected fidelity of a link at consumption given it survived exactly i
// pumping rounds, with exponential waiting times of rate mu + lambda q.
// Independent of p. Throws degenerate_error when mu + lambda q = 0.
double c_i_linear(int i, const SystemParams& params, const LinearJump& jump, double f_new);

enum class MetricsMethod { closed_form, series };

struct MetricsResult {
  double availability;
  double avg_fidelity;  // expected fidelity at consumption, in [1/4, 1]
  MetricsMethod method;
  double truncation_error;  // bound on the series tail; 0 for closed form
};

// Closed form for the steady-state average consumed fidelity under an affine
// jump with constant success probability.
MetricsResult avg_fidelity_linear(const SystemParams& params, const LinearJump& jump,
                                  double f_new);

// Same average assembled as sum_i c_i pi(i) / availability, truncated so the
// tail bound is below tol. Exists as an independent check of the closed
// form. Also accepts a RationalJump with c = 0.
MetricsResult avg_fidelity_series(const SystemParams& params, const LinearJump& jump, double f_new,
                                  double tol);
MetricsResult avg_fidelity_series(const SystemParams& params, const RationalJump& jump,
                                  double f_new, double tol);

// Partial derivatives of the closed-form average fidelity.
double dF_dq(const SystemParams& params, const LinearJump& jump, double f_new);
double dF_dp(const SystemParams& params, const LinearJump& jump, double f_new);

// Noise-rate threshold above which pumping beats never pumping. Below it
// (when one exists) raising q lowers the average consumed fidelity.
enum class ThresholdKind {
  finite,             // pumping helps iff gamma > value
  always_beneficial,  // pumping helps at every gamma
  degenerate,         // comparison is q-independent (derivative identically 0)
};
struct NoiseThreshold {
  ThresholdKind kind;
  double value;  // meaningful only when kind == finite
};
NoiseThreshold noise_threshold(const LinearJump& jump, double p, double mu, double f_new);

}  // namespace entbuffer
