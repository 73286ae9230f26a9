#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "entbuffer/errors.hpp"
#include "entbuffer/protocols.hpp"
#include "entbuffer/rng.hpp"
#include "support.hpp"

using entbuffer::BellDiagonalState;
using entbuffer::clifford_bounds;
using entbuffer::CliffordBounds;
using entbuffer::degenerate_error;
using entbuffer::domain_error;
using entbuffer::f_intersection;
using entbuffer::f_star;
using entbuffer::LinearJump;
using entbuffer::protocol_jump;
using entbuffer::ProtocolId;
using entbuffer::RationalJump;
using entbuffer::SplitMix64;

namespace {

const ProtocolId kPumpRows[3] = {ProtocolId::pump_l1, ProtocolId::pump_l2,
                                 ProtocolId::pump_l3};

double lambda_of(const BellDiagonalState& s, int i) {
  return i == 0 ? s.l1 : (i == 1 ? s.l2 : s.l3);
}

}  // namespace

TEST_SUITE("protocols") {

TEST_CASE("linear jump constructor enforces the admissible wedge") {
  CHECK_NOTHROW(LinearJump(0.0, 0.25));
  CHECK_NOTHROW(LinearJump(0.0, 1.0));
  CHECK_NOTHROW(LinearJump(1.0, 0.0));
  CHECK_NOTHROW(LinearJump(0.5, 0.125));
  CHECK_NOTHROW(LinearJump(0.5, 0.5));
  CHECK_THROWS_AS(LinearJump(-0.01, 0.25), domain_error);
  CHECK_THROWS_AS(LinearJump(1.01, 0.0), domain_error);
  CHECK_THROWS_AS(LinearJump(0.5, 0.124), domain_error);   // below (1-a)/4
  CHECK_THROWS_AS(LinearJump(0.5, 0.501), domain_error);   // above 1-a
  CHECK_THROWS_AS(LinearJump(0.0, 0.2499), domain_error);
}

TEST_CASE("linear jump evaluates affinely and stays inside [1/4,1]") {
  SplitMix64 rng(301);
  for (int trial = 0; trial < 200; ++trial) {
    const LinearJump j = testsupport::random_jump(rng);
    for (double fv : {0.25, 0.4, 0.6, 0.8, 1.0}) {
      const double out = j.value(fv);
      CHECK(out == doctest::Approx(j.a * fv + j.b).epsilon(1e-15));
      CHECK(out >= 0.25 - 1e-12);
      CHECK(out <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("rational jump constructor validates endpoint behaviour") {
  // identity map: J = F, p = 1
  CHECK_NOTHROW(RationalJump(1.0, 0.0, 0.0, 1.0));
  // success probability must stay positive on [1/4,1]
  CHECK_THROWS_AS(RationalJump(1.0, 0.0, 4.0, -1.0), domain_error);
  // output fidelity outside [0,1] at an endpoint
  CHECK_THROWS_AS(RationalJump(2.0, 0.5, 0.0, 1.0), domain_error);
}

TEST_CASE("affine detection and conversion") {
  const RationalJump affine(0.5, 0.125, 0.0, 1.0);
  CHECK(affine.is_affine());
  const LinearJump lin = affine.to_linear();
  CHECK(lin.a == doctest::Approx(0.5));
  CHECK(lin.b == doctest::Approx(0.125));

  const RationalJump curved =
      protocol_jump(ProtocolId::pump_l1, BellDiagonalState(0.8, 0.1, 0.06, 0.04));
  CHECK_FALSE(curved.is_affine());
  CHECK_THROWS_AS(curved.to_linear(), domain_error);
}

TEST_CASE("pumping rows satisfy the endpoint anchor identities") {
  SplitMix64 rng(302);
  for (int trial = 0; trial < 200; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    for (int i = 0; i < 3; ++i) {
      const double li = lambda_of(s, i);
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      CHECK(j.value(0.25) ==
            doctest::Approx((s.f + li) / 2).epsilon(1e-12));
      CHECK(j.success_prob(0.25) == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(j.value(1.0) == doctest::Approx(s.f / (s.f + li)).epsilon(1e-12));
      CHECK(j.success_prob(1.0) == doctest::Approx(s.f + li).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant-probability rows pin frozen values") {
  const BellDiagonalState s(0.8, 0.1, 0.06, 0.04);
  // rows 4-6: J = F, p = f + lambda_{i-3}
  const ProtocolId filters[3] = {ProtocolId::filter_l1, ProtocolId::filter_l2,
                                 ProtocolId::filter_l3};
  const double lams[3] = {0.1, 0.06, 0.04};
  for (int i = 0; i < 3; ++i) {
    const RationalJump j = protocol_jump(filters[i], s);
    for (double fv : {0.3, 0.5, 0.75, 1.0}) {
      CHECK(j.value(fv) == doctest::Approx(fv).epsilon(1e-13));
      CHECK(j.success_prob(fv) ==
            doctest::Approx(s.f + lams[i]).epsilon(1e-13));
    }
  }
  // row 7 swaps the buffered pair for the fresh one: J = f regardless of F,
  // with success probability (2F + 1)/3.
  const RationalJump ex = protocol_jump(ProtocolId::exchange, s);
  CHECK(ex.value(0.6) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ex.value(0.31) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(ex.success_prob(0.6) ==
        doctest::Approx((2 * 0.6 + 1) / 3).epsilon(1e-12));
}

TEST_CASE("pumping requires an entangled new state") {
  const BellDiagonalState separable(0.5, 0.3, 0.1, 0.1);
  CHECK_THROWS_AS(protocol_jump(ProtocolId::pump_l1, separable),
                  degenerate_error);
  CHECK_THROWS_AS(f_star(separable), degenerate_error);
  CHECK_THROWS_AS(clifford_bounds(separable), degenerate_error);
}

TEST_CASE("fixed point of the dominant pumping row") {
  SplitMix64 rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    const double fs = f_star(s);
    CHECK(fs > 0.5);
    CHECK(fs <= 1.0 + 1e-12);
    // f_star is the fixed point of the row built from the smallest error
    // weight: find that row and check |J(fs) - fs| ~ 0.
    double best = 1e9;
    for (int i = 0; i < 3; ++i) {
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      best = std::min(best, std::abs(j.value(fs) - fs));
    }
    CHECK(best < 1e-12);
  }
}

TEST_CASE("fixed point frozen values") {
  const BellDiagonalState werner(0.8, 0.2 / 3, 0.2 / 3, 0.2 / 3);
  CHECK(f_star(werner) == doctest::Approx(0.870404163).epsilon(1e-8));
  // when the smallest error weight vanishes the fixed point is exactly 1
  const BellDiagonalState zero_min(0.8, 0.2, 0.0, 0.0);
  CHECK(f_star(zero_min) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("common intersection of the pumping rows") {
  SplitMix64 rng(304);
  for (int trial = 0; trial < 100; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    const double fi = f_intersection(s);
    const double common = std::sqrt(s.f / 2);
    for (int i = 0; i < 3; ++i) {
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      CHECK(std::abs(j.value(fi) - common) < 1e-12);
    }
  }
  const BellDiagonalState werner(0.8, 0.2 / 3, 0.2 / 3, 0.2 / 3);
  CHECK(f_intersection(werner) == doctest::Approx(0.462475296).epsilon(1e-8));
  CHECK(std::sqrt(werner.f / 2) ==
        doctest::Approx(0.632455532).epsilon(1e-8));
}

TEST_CASE("bound coefficients on a frozen example") {
  const BellDiagonalState s(0.8, 0.1, 0.1, 0.0);
  const CliffordBounds b = clifford_bounds(s);
  CHECK(b.a_l == doctest::Approx(0.651851852).epsilon(1e-8));
  CHECK(b.b_l == doctest::Approx(0.237037037).epsilon(1e-8));
  CHECK(b.a_u == doctest::Approx(0.266666667).epsilon(1e-8));
  CHECK(b.b_u == doctest::Approx(0.733333333).epsilon(1e-8));
  CHECK(b.p_l == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(b.p_u == doctest::Approx(0.9).epsilon(1e-13));
  // upper line is a convex combination: a_u + b_u = 1 exactly
  CHECK(b.a_u + b.b_u == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("lower bound is the chord of the tightest pumping row") {
  SplitMix64 rng(305);
  for (int trial = 0; trial < 200; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    const CliffordBounds b = clifford_bounds(s);
    const double fs = f_star(s);
    const double lm = s.lambda_min();
    // chord through (1/4, (f+lambda_min)/2) and the lowest row value at
    // f_star (the row built from the largest error weight binds there).
    double jmin = 2.0;
    for (int i = 0; i < 3; ++i) {
      jmin = std::min(jmin, protocol_jump(kPumpRows[i], s).value(fs));
    }
    const double slope = (jmin - (s.f + lm) / 2) / (fs - 0.25);
    CHECK(b.a_l == doctest::Approx(slope).epsilon(1e-9));
    // anchored at the worst-case output from a fresh pair
    CHECK((b.a_l * 0.25 + b.b_l) ==
          doctest::Approx((s.f + lm) / 2).epsilon(1e-12));
  }
}

TEST_CASE("bounds sandwich every pumping row on the operating range") {
  SplitMix64 rng(306);
  int grid_checks = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    const CliffordBounds b = clifford_bounds(s);
    const double fs = f_star(s);
    for (int i = 0; i < 3; ++i) {
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      for (int k = 0; k <= 50; ++k) {
        const double fv = 0.25 + (fs - 0.25) * k / 50.0;
        const double jv = j.value(fv);
        CHECK((b.a_l * fv + b.b_l) <= jv + 1e-10);
        CHECK(jv <= (b.a_u * fv + b.b_u) + 1e-10);
        const double pv = j.success_prob(fv);
        CHECK(b.p_l <= pv + 1e-12);
        CHECK(pv <= b.p_u + 1e-12);
        ++grid_checks;
      }
      // the upper line holds on the full domain, not just up to f_star
      for (int k = 0; k <= 50; ++k) {
        const double fv = 0.25 + 0.75 * k / 50.0;
        CHECK(j.value(fv) <= (b.a_u * fv + b.b_u) + 1e-10);
      }
    }
  }
  CHECK(grid_checks == 300 * 3 * 51);
}

TEST_CASE("row ordering above the common intersection") {
  SplitMix64 rng(307);
  for (int trial = 0; trial < 100; ++trial) {
    BellDiagonalState s = testsupport::random_entangled(rng);
    // sort the error weights so that l1 <= l2 <= l3
    double l[3] = {s.l1, s.l2, s.l3};
    std::sort(l, l + 3);
    const BellDiagonalState sorted(s.f, l[0], l[1], l[2]);
    const double fi = f_intersection(sorted);
    const RationalJump j1 = protocol_jump(ProtocolId::pump_l1, sorted);
    const RationalJump j2 = protocol_jump(ProtocolId::pump_l2, sorted);
    const RationalJump j3 = protocol_jump(ProtocolId::pump_l3, sorted);
    for (int k = 1; k <= 20; ++k) {
      const double fv = fi + (1.0 - fi) * k / 20.0;
      // above the intersection, smaller error weight pumps higher
      CHECK(j1.value(fv) >= j2.value(fv) - 1e-12);
      CHECK(j2.value(fv) >= j3.value(fv) - 1e-12);
    }
    for (int k = 0; k < 20; ++k) {
      const double fv = 0.25 + (fi - 0.25) * k / 20.0;
      CHECK(j1.value(fv) <= j2.value(fv) + 1e-12);
      CHECK(j2.value(fv) <= j3.value(fv) + 1e-12);
    }
  }
}

TEST_CASE("pumping rows are increasing and concave in the input fidelity") {
  SplitMix64 rng(308);
  for (int trial = 0; trial < 50; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    for (int i = 0; i < 3; ++i) {
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      double prev = j.value(0.25);
      double prev_slope = 1e300;
      for (int k = 1; k <= 40; ++k) {
        const double fv = 0.25 + 0.75 * k / 40.0;
        const double cur = j.value(fv);
        const double slope = cur - prev;
        CHECK(cur >= prev - 1e-12);
        CHECK(slope <= prev_slope + 1e-12);
        prev = cur;
        prev_slope = slope;
      }
    }
  }
}

TEST_CASE("success probability is affine and increasing for pumping rows") {
  SplitMix64 rng(309);
  for (int trial = 0; trial < 50; ++trial) {
    const BellDiagonalState s = testsupport::random_entangled(rng);
    for (int i = 0; i < 3; ++i) {
      const RationalJump j = protocol_jump(kPumpRows[i], s);
      const double p0 = j.success_prob(0.25);
      const double p1 = j.success_prob(0.625);
      const double p2 = j.success_prob(1.0);
      CHECK(p1 == doctest::Approx((p0 + p2) / 2).epsilon(1e-12));
      CHECK(p2 >= p0 - 1e-12);
    }
  }
}

}  // TEST_SUITE
