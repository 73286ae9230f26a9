#pragma once

#include <vector>

#include "entbuffer/analytics.hpp"
#include "entbuffer/states.hpp"

namespace entbuffer {

// Environment rates without the policy knobs q and p.
struct RateParams {
  double lambda;
  double mu;
  double gamma;

  RateParams(double lambda, double mu, double gamma);
};

// One point of the achievable (availability, fidelity) band at a given q.
// Each bound is evaluated with its own success probability (p_l for the
// lower curve, p_u for the upper), so each carries its own availability.
struct RegimePoint {
  double q;
  double avail_lower;
  double f_lower;
  double avail_upper;
  double f_upper;
};

// Achievability band of every bilocal Clifford pumping policy for the given
// fresh state, swept over a uniform q grid (default 101 points on [0, 1]).
// At q = 0 both curves collapse to the never-pumping operating point.
std::vector<RegimePoint> clifford_band(const RateParams& rates, const BellDiagonalState& rho_new,
                                       int n_q = 101);

// Ceiling on the average consumed fidelity of any policy: every consumed
// link is at best a perfect link that decayed for an Exp(lambda + mu)
// waiting time.
double universal_cap(const RateParams& rates, double f_new);

struct OperatingPoint {
  double availability;
  double avg_fidelity;
};

// Operating point of the replace-on-arrival policy (q = 1 with every pump
// replaced by a swap to the fresh link).
OperatingPoint replacement_point(const RateParams& rates, double f_new);

}  // namespace entbuffer
