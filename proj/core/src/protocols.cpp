#include "entbuffer/protocols.hpp"

#include <cmath>
#include <string>

#include "entbuffer/errors.hpp"

namespace entbuffer {

namespace {

constexpr double kTol = 1e-12;

void require_purifiable(const BellDiagonalState& rho_new, const char* what) {
  if (!(rho_new.f > 0.5)) {
    throw degenerate_error(std::string(what) +
                           " requires a new state with fidelity above 1/2 (cannot purify)");
  }
}

}  // namespace

LinearJump::LinearJump(double a_, double b_) : a(a_), b(b_) {
  if (!(a >= -kTol && a <= 1.0 + kTol)) {
    throw domain_error("linear jump slope must lie in [0, 1], got " + std::to_string(a));
  }
  const double lo = (1.0 - a) / 4.0;
  const double hi = 1.0 - a;
  if (!(b >= lo - kTol && b <= hi + kTol)) {
    throw domain_error("linear jump intercept must lie in [(1-a)/4, 1-a], got " +
                       std::to_string(b));
  }
}

RationalJump::RationalJump(double at_, double bt_, double c_, double d_)
    : at(at_), bt(bt_), c(c_), d(d_) {
  // p(F) = cF + d is affine, J monotone on any interval where p > 0, so
  // endpoint checks on [1/4, 1] settle both range invariants.
  for (double f : {0.25, 1.0}) {
    const double p = success_prob(f);
    if (!(p > 0.0 && p <= 1.0 + kTol)) {
      throw domain_error("rational jump success probability must lie in (0, 1] on [1/4, 1]");
    }
    const double j = value(f);
    if (!(j >= -kTol && j <= 1.0 + kTol)) {
      throw domain_error("rational jump value must lie in [0, 1] on [1/4, 1]");
    }
  }
}

bool RationalJump::is_affine() const { return std::abs(c) <= 1e-9 * std::max(1.0, std::abs(d)); }

LinearJump RationalJump::to_linear() const {
  if (!is_affine()) {
    throw domain_error(
        "jump has a fidelity-dependent success probability; closed forms do not apply, use the "
        "simulator");
  }
  return LinearJump(at / d, bt / d);
}

RationalJump protocol_jump(ProtocolId id, const BellDiagonalState& rho_new) {
  require_purifiable(rho_new, "protocol_jump");
  const double fn = rho_new.f;
  const std::array<double, 3> l = {rho_new.l1, rho_new.l2, rho_new.l3};
  const int raw = static_cast<int>(id);
  if (raw >= 1 && raw <= 3) {
    // Pumping rows, written with the success probability as denominator.
    const double li = l[static_cast<std::size_t>(raw - 1)];
    return RationalJump((3.0 * fn - li) / 3.0, li / 3.0, (4.0 * fn + 4.0 * li - 2.0) / 3.0,
                        (2.0 - fn - li) / 3.0);
  }
  if (raw >= 4 && raw <= 6) {
    // Filtering rows: stored fidelity unchanged, constant success probability.
    const double p = fn + l[static_cast<std::size_t>(raw - 4)];
    return RationalJump(p, 0.0, 0.0, p);
  }
  if (raw == 7) {
    // Exchange row: the fresh link survives, acceptance depends on the stored
    // fidelity through p(F) = (2F + 1)/3.
    return RationalJump(2.0 * fn / 3.0, fn / 3.0, 2.0 / 3.0, 1.0 / 3.0);
  }
  throw domain_error("protocol id must lie in 1..7");
}

double f_star(const BellDiagonalState& rho_new) {
  require_purifiable(rho_new, "f_star");
  const double g = 2.0 * rho_new.f - 1.0;
  const double lm = rho_new.lambda_min();
  return (g + std::sqrt(g * g + 2.0 * lm * (g + 2.0 * lm))) / (2.0 * (g + 2.0 * lm));
}

double f_intersection(const BellDiagonalState& rho_new) {
  require_purifiable(rho_new, "f_intersection");
  const double fn = rho_new.f;
  return (4.0 * fn - 2.0 + 3.0 * std::sqrt(2.0 * fn)) / (2.0 * (8.0 * fn - 1.0));
}

CliffordBounds clifford_bounds(const BellDiagonalState& rho_new) {
  require_purifiable(rho_new, "clifford_bounds");
  const double fn = rho_new.f;
  const double lm = rho_new.lambda_min();
  const double lM = rho_new.lambda_max();
  const double fs = f_star(rho_new);

  // Slope of the chord from (1/4, (fn+lm)/2) to (fs, J_{lM}(fs)); the closed
  // form below expands to exactly that chord.
  const double num =
      2.0 * (4.0 * fs - 1.0) * (2.0 * fn - (fn + lm) * (fn + lM)) + 4.0 * (lM - lm) * (1.0 - fs);
  const double den = (4.0 * fs - 1.0) * ((4.0 * fn + 4.0 * lM - 2.0) * fs + 2.0 - fn - lM);
  CliffordBounds out;
  out.a_l = num / den;
  out.b_l = (fn + lm) / 2.0 - out.a_l / 4.0;
  out.a_u = 4.0 * (1.0 - fn) / 3.0;
  out.b_u = (4.0 * fn - 1.0) / 3.0;
  out.p_l = 0.5;
  out.p_u = fn + lM;
  return out;
}

}  // namespace entbuffer
