#include "entbuffer/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "entbuffer/analytics.hpp"
#include "entbuffer/errors.hpp"
#include "entbuffer/protocols.hpp"
#include "entbuffer/regimes.hpp"
#include "entbuffer/rng.hpp"
#include "entbuffer/simulator.hpp"
#include "entbuffer/states.hpp"

namespace entbuffer {

namespace {

BellDiagonalState random_entangled_state(SplitMix64& rng) {
  const double f = 0.505 + 0.49 * rng.uniform();
  double w1 = -std::log1p(-rng.uniform());
  double w2 = -std::log1p(-rng.uniform());
  double w3 = -std::log1p(-rng.uniform());
  const double rest = 1.0 - f;
  const double total = w1 + w2 + w3;
  return BellDiagonalState(f, rest * w1 / total, rest * w2 / total, rest * w3 / total);
}

class Runner {
 public:
  explicit Runner(std::ostream* log) : log_(log) {}

  template <typename Fn>
  void check(const char* name, Fn&& fn) {
    ++checks_;
    std::string detail;
    bool ok = false;
    try {
      detail = fn();
      ok = detail.empty();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    if (log_) {
      *log_ << (ok ? "ok   " : "FAIL ") << name;
      if (!ok) *log_ << ": " << detail;
      *log_ << '\n';
    }
    if (!ok && first_failure_.empty()) first_failure_ = name;
  }

  VerifyReport report() const { return {first_failure_.empty(), first_failure_, checks_}; }

 private:
  std::ostream* log_;
  std::string first_failure_;
  int checks_ = 0;
};

std::string check_catalogue_vs_oracle(bool permute_input) {
  SplitMix64 rng(0x5eedbeefULL);
  for (int trial = 0; trial < 4; ++trial) {
    const BellDiagonalState rho = random_entangled_state(rng);
    const BellDiagonalState fed =
        permute_input ? BellDiagonalState(rho.f, rho.l3, rho.l1, rho.l2) : rho;

    const BilocalFit dejmps =
        apply_bilocal_clifford(CliffordCircuit2Pair::dejmps(), WernerState(0.75), fed);
    const RationalJump expect_pump = protocol_jump(ProtocolId::pump_l2, rho);
    const BilocalFit empty =
        apply_bilocal_clifford(CliffordCircuit2Pair{}, WernerState(0.75), fed);
    const RationalJump expect_filter = protocol_jump(ProtocolId::filter_l3, rho);

    for (int k = 0; k <= 20; ++k) {
      const double f = 0.25 + 0.75 * k / 20.0;
      if (std::abs(dejmps.jump.value(f) - expect_pump.value(f)) > 1e-10 ||
          std::abs(dejmps.jump.success_prob(f) - expect_pump.success_prob(f)) > 1e-10) {
        std::ostringstream os;
        os << "pumping circuit deviates from its catalogue row at F = " << f;
        return os.str();
      }
      if (std::abs(empty.jump.value(f) - expect_filter.value(f)) > 1e-10 ||
          std::abs(empty.jump.success_prob(f) - expect_filter.success_prob(f)) > 1e-10) {
        std::ostringstream os;
        os << "identity circuit deviates from its catalogue row at F = " << f;
        return os.str();
      }
    }
  }
  return {};
}

std::string check_catalogue_forms_agree() {
  // The catalogue rows are also published with numerator and denominator
  // scaled by -3; both renderings must evaluate identically.
  SplitMix64 rng(0xfeedULL);
  for (int trial = 0; trial < 50; ++trial) {
    const BellDiagonalState rho = random_entangled_state(rng);
    const std::array<double, 3> l = {rho.l1, rho.l2, rho.l3};
    for (int i = 0; i < 3; ++i) {
      const RationalJump row =
          protocol_jump(static_cast<ProtocolId>(i + 1), rho);
      const double la = l[static_cast<std::size_t>(i)];
      const double lb = l[static_cast<std::size_t>((i + 1) % 3)];
      const double lc = l[static_cast<std::size_t>((i + 2) % 3)];
      for (int k = 0; k < 5; ++k) {
        const double f = 0.25 + 0.75 * rng.uniform();
        const double alt_num = (4.0 * la + 3.0 * lb + 3.0 * lc - 3.0) * f - la;
        const double alt_den = (4.0 * lb + 4.0 * lc - 2.0) * f - lb - lc - 1.0;
        const double alt_p = (2.0 / 3.0) * (1.0 - 2.0 * lb - 2.0 * lc) * f +
                             (1.0 + lb + lc) / 3.0;
        if (std::abs(alt_num / alt_den - row.value(f)) > 1e-12 ||
            std::abs(alt_p - row.success_prob(f)) > 1e-12) {
          return "the two printed renderings of a catalogue row disagree";
        }
      }
    }
  }
  return {};
}

std::string check_sandwich(double nudge) {
  SplitMix64 rng(0xabcdULL);
  for (int trial = 0; trial < 200; ++trial) {
    const BellDiagonalState rho = random_entangled_state(rng);
    const CliffordBounds cb = clifford_bounds(rho);
    const double fs = f_star(rho);
    const double a_l = cb.a_l + nudge;
    for (int i = 1; i <= 3; ++i) {
      const RationalJump row = protocol_jump(static_cast<ProtocolId>(i), rho);
      for (int k = 0; k < 50; ++k) {
        const double fl = 0.25 + (fs - 0.25) * k / 49.0;
        if (row.value(fl) - (a_l * fl + cb.b_l) < -1e-10) {
          return "lower envelope exceeds a catalogue jump";
        }
        if ((cb.a_u * fl + cb.b_u) - row.value(fl) < -1e-10) {
          return "catalogue jump exceeds the upper envelope";
        }
        if (row.success_prob(fl) < cb.p_l - 1e-10 || row.success_prob(fl) > cb.p_u + 1e-10) {
          return "success probability leaves its bounds";
        }
        const double fu = 0.25 + 0.75 * k / 49.0;
        if ((cb.a_u * fu + cb.b_u) - row.value(fu) < -1e-10) {
          return "catalogue jump exceeds the upper envelope on [1/4, 1]";
        }
      }
    }
  }
  return {};
}

std::string check_fixed_points() {
  SplitMix64 rng(0x77aaULL);
  for (int trial = 0; trial < 100; ++trial) {
    const BellDiagonalState rho = random_entangled_state(rng);
    const double fs = f_star(rho);
    const std::array<double, 3> l = {rho.l1, rho.l2, rho.l3};
    const int arg_min = static_cast<int>(std::min_element(l.begin(), l.end()) - l.begin());
    const RationalJump row = protocol_jump(static_cast<ProtocolId>(arg_min + 1), rho);
    if (std::abs(row.value(fs) - fs) > 1e-12) return "fixed point residual too large";

    const double fi = f_intersection(rho);
    const double common = std::sqrt(rho.f / 2.0);
    for (int i = 1; i <= 3; ++i) {
      const RationalJump r = protocol_jump(static_cast<ProtocolId>(i), rho);
      if (std::abs(r.value(fi) - common) > 1e-12) return "intersection residual too large";
    }
  }
  return {};
}

std::string check_series_vs_closed_form() {
  SplitMix64 rng(0x1122ULL);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemParams params(0.2 + 2.8 * rng.uniform(), 0.01 + 0.99 * rng.uniform(),
                              0.5 * rng.uniform(), rng.uniform(), rng.uniform());
    const double a = 0.95 * rng.uniform();
    const double lo = (1.0 - a) / 4.0;
    const double b = lo + (1.0 - a - lo) * rng.uniform();
    const LinearJump jump(a, b);
    const double f_new = 0.25 + 0.75 * rng.uniform();
    const MetricsResult closed = avg_fidelity_linear(params, jump, f_new);
    const MetricsResult series = avg_fidelity_series(params, jump, f_new, 1e-12);
    if (std::abs(closed.avg_fidelity - series.avg_fidelity) > 1e-10) {
      return "series and closed form disagree";
    }
  }
  return {};
}

std::string check_recursion_vs_coefficients() {
  SplitMix64 rng(0x3344ULL);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = 0.95 * rng.uniform();
    const double lo = (1.0 - a) / 4.0;
    const LinearJump jump(a, lo + (1.0 - a - lo) * rng.uniform());
    const double f_new = 0.25 + 0.75 * rng.uniform();
    const double gamma = 0.5 * rng.uniform();
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) {
      times.push_back(-std::log1p(-rng.uniform()));
      const double rec = fidelity_after_levels(times, jump, f_new, gamma);
      const double closed = fidelity_after_levels_closed(times, jump, f_new, gamma);
      if (std::abs(rec - closed) > 1e-12) return "recursion and coefficient form disagree";
    }
  }
  return {};
}

std::string check_derivative_signs() {
  SplitMix64 rng(0x9911ULL);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = 0.2 + 2.8 * rng.uniform();
    const double mu = 0.01 + 0.99 * rng.uniform();
    const double gamma = 0.5 * rng.uniform();
    const double p = 0.05 + 0.9 * rng.uniform();
    const double a = 0.95 * rng.uniform();
    const double lo = (1.0 - a) / 4.0;
    const LinearJump jump(a, lo + (1.0 - a - lo) * rng.uniform());
    const double f_new = 0.25 + 0.75 * rng.uniform();
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const SystemParams params(lambda, mu, gamma, q, p);
      const double dq = dF_dq(params, jump, f_new);
      const double fd_q =
          (avg_fidelity_linear(SystemParams(lambda, mu, gamma, q + h, p), jump, f_new)
               .avg_fidelity -
           avg_fidelity_linear(SystemParams(lambda, mu, gamma, q - h, p), jump, f_new)
               .avg_fidelity) /
          (2.0 * h);
      if (std::abs(dq) > 1e-10 && dq * fd_q < 0.0) return "dF/dq sign disagrees";
      const double dp = dF_dp(params, jump, f_new);
      const double fd_p =
          (avg_fidelity_linear(SystemParams(lambda, mu, gamma, q, p + h), jump, f_new)
               .avg_fidelity -
           avg_fidelity_linear(SystemParams(lambda, mu, gamma, q, p - h), jump, f_new)
               .avg_fidelity) /
          (2.0 * h);
      if (std::abs(dp) > 1e-10 && dp * fd_p < 0.0) return "dF/dp sign disagrees";
    }
  }
  return {};
}

std::string check_simulation_vs_closed_form() {
  const SystemParams params(1.0, 0.1, 0.025, 0.6, 0.75);
  const LinearJump jump(1.0 / 3.0, 0.6);
  const double f_new = 0.8;
  const SimConfig config = SimConfig::from(params, RationalJump(jump.a, jump.b, 0.0, 1.0), f_new,
                                           50.0, 10000, 20260816ULL, SuccessMode::constant_p);
  const SimEstimate est = estimate(config);
  const MetricsResult model = avg_fidelity_linear(params, jump, f_new);
  if (std::abs(est.avg_fidelity - model.avg_fidelity) > 3.0 * est.stderr_fidelity) {
    return "simulated fidelity outside three standard errors of the closed form";
  }
  if (std::abs(est.availability - model.availability) > 3.0 * est.stderr_availability) {
    return "simulated availability outside three standard errors of the closed form";
  }
  return {};
}

std::string check_entanglement_criterion() {
  SplitMix64 rng(0x2468ULL);
  for (int trial = 0; trial < 200; ++trial) {
    // Arbitrary weight vectors, entangled or not.
    double w0 = -std::log1p(-rng.uniform());
    double w1 = -std::log1p(-rng.uniform());
    double w2 = -std::log1p(-rng.uniform());
    double w3 = -std::log1p(-rng.uniform());
    const double total = w0 + w1 + w2 + w3;
    const BellDiagonalState s(w0 / total, w1 / total, w2 / total, w3 / total);
    const double max_w = std::max(s.f, s.lambda_max());
    if (std::abs(max_w - 0.5) < 1e-9) continue;  // criterion boundary
    const double min_eig = min_eigenvalue(partial_transpose(to_density_matrix(s)));
    if (is_entangled(s) != (min_eig < 0.0)) {
      return "weight criterion and eigensolve disagree";
    }
  }
  return {};
}

std::string check_envelope_chord() {
  SplitMix64 rng(0x1357ULL);
  for (int trial = 0; trial < 100; ++trial) {
    const BellDiagonalState rho = random_entangled_state(rng);
    const CliffordBounds cb = clifford_bounds(rho);
    const double fs = f_star(rho);
    const double anchor = (rho.f + rho.lambda_min()) / 2.0;
    if (std::abs(cb.a_l / 4.0 + cb.b_l - anchor) > 1e-12) {
      return "lower envelope does not pass through its quarter-point anchor";
    }
    const std::array<double, 3> l = {rho.l1, rho.l2, rho.l3};
    const int arg_max = static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
    const RationalJump worst = protocol_jump(static_cast<ProtocolId>(arg_max + 1), rho);
    const double chord = (worst.value(fs) - anchor) / (fs - 0.25);
    if (std::abs(chord - cb.a_l) > 1e-10) {
      return "lower envelope slope deviates from the chord construction";
    }
  }
  return {};
}

}  // namespace

VerifyReport run_verification(const VerifyOptions& options) {
  Runner runner(options.log);
  runner.check("catalogue_vs_circuit_oracle",
               [&] { return check_catalogue_vs_oracle(options.permute_oracle_input); });
  runner.check("catalogue_forms_agree", [] { return check_catalogue_forms_agree(); });
  runner.check("envelope_sandwich", [&] { return check_sandwich(options.lower_slope_nudge); });
  runner.check("envelope_chord", [] { return check_envelope_chord(); });
  runner.check("fixed_points", [] { return check_fixed_points(); });
  runner.check("series_vs_closed_form", [] { return check_series_vs_closed_form(); });
  runner.check("recursion_vs_coefficients", [] { return check_recursion_vs_coefficients(); });
  runner.check("derivative_signs", [] { return check_derivative_signs(); });
  runner.check("entanglement_criterion", [] { return check_entanglement_criterion(); });
  runner.check("simulation_vs_closed_form", [] { return check_simulation_vs_closed_form(); });
  return runner.report();
}

}  // namespace entbuffer
