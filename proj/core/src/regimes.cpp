#include "entbuffer/regimes.hpp"

#include <cmath>

#include "entbuffer/errors.hpp"
#include "entbuffer/protocols.hpp"

namespace entbuffer {

RateParams::RateParams(double lambda_, double mu_, double gamma_)
    : lambda(lambda_), mu(mu_), gamma(gamma_) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw domain_error("generation rate lambda must be positive");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw domain_error("consumption rate mu must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw domain_error("noise rate gamma must be >= 0");
}

std::vector<RegimePoint> clifford_band(const RateParams& rates, const BellDiagonalState& rho_new,
                                       int n_q) {
  if (n_q < 2) throw domain_error("q grid needs at least two points");
  const CliffordBounds cb = clifford_bounds(rho_new);
  const LinearJump lower(cb.a_l, cb.b_l);
  const LinearJump upper(cb.a_u, cb.b_u);
  const double f_new = rho_new.f;

  std::vector<RegimePoint> out;
  out.reserve(static_cast<std::size_t>(n_q));
  for (int k = 0; k < n_q; ++k) {
    const double q = static_cast<double>(k) / static_cast<double>(n_q - 1);
    const SystemParams low(rates.lambda, rates.mu, rates.gamma, q, cb.p_l);
    const SystemParams high(rates.lambda, rates.mu, rates.gamma, q, cb.p_u);
    const MetricsResult ml = avg_fidelity_linear(low, lower, f_new);
    const MetricsResult mh = avg_fidelity_linear(high, upper, f_new);
    out.push_back({q, ml.availability, ml.avg_fidelity, mh.availability, mh.avg_fidelity});
  }
  return out;
}

double universal_cap(const RateParams& rates, double f_new) {
  if (!(f_new >= 0.25 && f_new <= 1.0)) throw domain_error("fresh fidelity must lie in [1/4, 1]");
  return (rates.gamma / 4.0 + rates.lambda + f_new * rates.mu) /
         (rates.gamma + rates.mu + rates.lambda);
}

OperatingPoint replacement_point(const RateParams& rates, double f_new) {
  if (!(f_new >= 0.25 && f_new <= 1.0)) throw domain_error("fresh fidelity must lie in [1/4, 1]");
  const double total = rates.lambda + rates.mu;
  return {rates.lambda / total,
          0.25 + (f_new - 0.25) * total / (rates.gamma + total)};
}

}  // namespace entbuffer
