#include "entbuffer/analytics.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "entbuffer/errors.hpp"
#include "entbuffer/states.hpp"

namespace entbuffer {

namespace {

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

void check_fresh_fidelity(double f_new) {
  if (!(f_new >= 0.25 && f_new <= 1.0)) {
    throw domain_error("fresh fidelity must lie in [1/4, 1], got " + std::to_string(f_new));
  }
}

// Sum_{k=0}^{n-1} x^k with the x -> 1 limit handled.
double geometric_partial(double x, int n) {
  if (std::abs(1.0 - x) < 1e-12) return static_cast<double>(n);
  return (1.0 - std::pow(x, n)) / (1.0 - x);
}

}  // namespace

SystemParams::SystemParams(double lambda_, double mu_, double gamma_, double q_, double p_)
    : lambda(lambda_), mu(mu_), gamma(gamma_), q(q_), p(p_) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw domain_error("generation rate lambda must be positive");
  }
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw domain_error("consumption rate mu must be >= 0");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw domain_error("noise rate gamma must be >= 0");
  check_probability(q, "q");
  check_probability(p, "p");
}

double availability(const SystemParams& params) {
  const double loss = params.mu + params.lambda * params.q * (1.0 - params.p);
  return params.lambda / (params.lambda + loss);
}

double SteadyState::pi(int i) const {
  if (i < 0) throw domain_error("level index must be >= 0");
  return availability() * (1.0 - ratio) * std::pow(ratio, i);
}

int SteadyState::truncation_index(double tol) const {
  if (!(tol > 0.0 && tol < 1.0)) throw domain_error("tolerance must lie in (0, 1)");
  if (ratio <= 0.0) return 0;
  if (ratio >= 1.0 - 1e-15) {
    throw degenerate_error(
        "level distribution degenerates (mu = 0 with q = p = 1 pumps forever)");
  }
  // tail_mass(N) = availability * ratio^(N+1), so the condition is
  // ratio^(N+1) <= tol.
  const double n = std::ceil(std::log(tol) / std::log(ratio) - 1.0);
  if (n > 1e8) throw degenerate_error("level distribution ratio too close to 1 to truncate");
  return n < 0.0 ? 0 : static_cast<int>(n);
}

double SteadyState::tail_mass(int n) const {
  if (n < 0) throw domain_error("level index must be >= 0");
  return availability() * std::pow(ratio, n + 1);
}

SteadyState steady_state(const SystemParams& params) {
  const double denom = params.mu + params.lambda * params.q;
  const double ratio = denom > 0.0 ? params.lambda * params.q * params.p / denom : 0.0;
  return {1.0 - availability(params), ratio};
}

double fidelity_after_levels(std::span<const double> times, const LinearJump& jump, double f_new,
                             double gamma) {
  if (times.empty()) throw domain_error("need at least one waiting time");
  check_fresh_fidelity(f_new);
  for (double t : times) {
    if (!(t >= 0.0)) throw domain_error("waiting times must be >= 0");
  }
  double f = f_new;
  for (std::size_t j = 0; j < times.size(); ++j) {
    f = depolarize(f, times[j], gamma);
    if (j + 1 < times.size()) f = jump.value(f);
  }
  return f;
}

double fidelity_after_levels_closed(std::span<const double> times, const LinearJump& jump,
                                    double f_new, double gamma) {
  if (times.empty()) throw domain_error("need at least one waiting time");
  check_fresh_fidelity(f_new);
  const int i = static_cast<int>(times.size()) - 1;
  // suffix[j] = t_j + ... + t_i
  std::vector<double> suffix(times.size());
  double acc = 0.0;
  for (int j = i; j >= 0; --j) {
    if (!(times[static_cast<std::size_t>(j)] >= 0.0)) {
      throw domain_error("waiting times must be >= 0");
    }
    acc += times[static_cast<std::size_t>(j)];
    suffix[static_cast<std::size_t>(j)] = acc;
  }
  const double k = jump.a / 4.0 + jump.b - 0.25;
  double f = 0.25 + std::pow(jump.a, i) * (f_new - 0.25) * std::exp(-gamma * suffix[0]);
  for (int j = 1; j <= i; ++j) {
    f += std::pow(jump.a, i - j) * k * std::exp(-gamma * suffix[static_cast<std::size_t>(j)]);
  }
  return f;
}

double c_i_linear(int i, const SystemParams& params, const LinearJump& jump, double f_new) {
  if (i < 0) throw domain_error("level index must be >= 0");
  check_fresh_fidelity(f_new);
  const double alpha = params.mu + params.lambda * params.q;
  if (!(alpha > 0.0)) {
    throw degenerate_error("links are never removed (mu + lambda q = 0); no level distribution");
  }
  const double g = alpha / (alpha + params.gamma);
  const double k = jump.a / 4.0 + jump.b - 0.25;
  return 0.25 + (f_new - 0.25) * std::pow(jump.a, i) * std::pow(g, i + 1) +
         k * g * geometric_partial(jump.a * g, i);
}

MetricsResult avg_fidelity_linear(const SystemParams& params, const LinearJump& jump,
                                  double f_new) {
  check_fresh_fidelity(f_new);
  const double lqp = params.lambda * params.q * params.p;
  const double denom = params.gamma + params.mu + params.lambda * params.q - lqp * jump.a;
  const double num = params.gamma / 4.0 + jump.b * lqp +
                     f_new * (params.mu + params.lambda * params.q - lqp);
  return {availability(params), num / denom, MetricsMethod::closed_form, 0.0};
}

MetricsResult avg_fidelity_series(const SystemParams& params, const LinearJump& jump, double f_new,
                                  double tol) {
  check_fresh_fidelity(f_new);
  const SteadyState ss = steady_state(params);
  if (ss.ratio >= 1.0 - 1e-15) {
    throw degenerate_error(
        "level distribution degenerates (mu = 0 with q = p = 1 pumps forever)");
  }
  const int n = ss.truncation_index(tol);
  const double alpha = params.mu + params.lambda * params.q;
  if (!(alpha > 0.0)) {
    throw degenerate_error("links are never removed (mu + lambda q = 0); no level distribution");
  }
  const double g = alpha / (alpha + params.gamma);
  const double k = jump.a / 4.0 + jump.b - 0.25;
  const double ag = jump.a * g;
  const bool ag_unit = std::abs(1.0 - ag) < 1e-12;

  double sum = 0.0;
  double weight = 1.0 - ss.ratio;        // (1 - r) r^i
  double decay = g;                      // a^i g^(i+1)
  double geo = 0.0;                      // sum_{j<i} (a g)^j
  double ag_pow = 1.0;                   // (a g)^i
  for (int i = 0; i <= n; ++i) {
    const double ci = 0.25 + (f_new - 0.25) * decay + k * g * (ag_unit ? i : geo);
    sum += weight * ci;
    weight *= ss.ratio;
    decay *= ag;
    geo += ag_pow;
    ag_pow *= ag;
  }
  const double tail = std::pow(ss.ratio, n + 1);  // conditional mass above n; |c_i| <= 1
  return {1.0 - ss.pi_empty, sum, MetricsMethod::series, tail};
}

MetricsResult avg_fidelity_series(const SystemParams& params, const RationalJump& jump,
                                  double f_new, double tol) {
  return avg_fidelity_series(params, jump.to_linear(), f_new, tol);
}

double dF_dq(const SystemParams& params, const LinearJump& jump, double f_new) {
  check_fresh_fidelity(f_new);
  const double denom = params.gamma + params.mu +
                       params.lambda * params.q * (1.0 - jump.a * params.p);
  const double y = 4.0 * f_new * (1.0 - params.p) + (4.0 * jump.b + jump.a) * params.p - 1.0;
  const double z = jump.b - f_new * (1.0 - jump.a);
  return params.lambda * (params.gamma * y + 4.0 * params.mu * params.p * z) /
         (4.0 * denom * denom);
}

double dF_dp(const SystemParams& params, const LinearJump& jump, double f_new) {
  check_fresh_fidelity(f_new);
  const double denom = params.gamma + params.mu +
                       params.lambda * params.q * (1.0 - jump.a * params.p);
  const double lq = params.lambda * params.q;
  const double num = 4.0 * (jump.b - f_new) * (params.gamma + params.mu + lq) +
                     jump.a * (params.gamma + 4.0 * f_new * (params.mu + lq));
  return lq * num / (4.0 * denom * denom);
}

NoiseThreshold noise_threshold(const LinearJump& jump, double p, double mu, double f_new) {
  check_probability(p, "p");
  if (!(mu >= 0.0)) throw domain_error("consumption rate mu must be >= 0");
  check_fresh_fidelity(f_new);
  const double y = 4.0 * f_new * (1.0 - p) + (4.0 * jump.b + jump.a) * p - 1.0;
  const double loss = f_new * (1.0 - jump.a) - jump.b;  // fidelity lost per successful pump
  if (std::abs(y) < 1e-14) return {ThresholdKind::degenerate, 0.0};
  if (loss <= 0.0) return {ThresholdKind::always_beneficial, 0.0};
  return {ThresholdKind::finite, 4.0 * mu * p * loss / y};
}

}  // namespace entbuffer
