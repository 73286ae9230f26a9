#pragma once

#include <vector>

#include "entbuffer/states.hpp"

namespace entbuffer {

// Affine fidelity jump F -> aF + b. Physical jumps satisfy 0 <= a <= 1 and
// (1-a)/4 <= b <= 1-a (so [1/4,1] maps into [1/4,1] and the maximally mixed
// point never gains fidelity); the constructor enforces this to 1e-12.
struct LinearJump {
  double a;
  double b;

  LinearJump(double a, double b);

  double value(double f) const { return a * f + b; }
};

// Probabilistic fidelity jump: on success (probability p(F) = cF + d) the
// stored fidelity becomes J(F) = (at*F + bt) / (cF + d). The denominator is
// the success probability, so the representation is already normalized.
// A jump with c = 0 is affine with slope at/d and intercept bt/d.
struct RationalJump {
  double at;
  double bt;
  double c;
  double d;

  RationalJump(double at, double bt, double c, double d);

  double value(double f) const { return (at * f + bt) / (c * f + d); }
  double success_prob(double f) const { return c * f + d; }

  bool is_affine() const;
  // Requires is_affine(); throws domain_error otherwise with a hint that the
  // fidelity-dependent case is handled by the simulator.
  LinearJump to_linear() const;
};

// The seven distinct two-to-one bilocal Clifford protocols on a stored
// Werner state of fidelity F and a fresh Bell-diagonal state
// (F_n, l1, l2, l3). Values 1..3 pump with the jump anchored at the
// corresponding new-state weight, 4..6 keep the stored fidelity and only
// filter on the measurement outcome, 7 exchanges the roles of the two links.
enum class ProtocolId : int {
  pump_l1 = 1,
  pump_l2 = 2,
  pump_l3 = 3,
  filter_l1 = 4,
  filter_l2 = 5,
  filter_l3 = 6,
  exchange = 7,
};

// Jump function and success probability of one catalogued protocol for the
// given fresh state. Requires rho_new.f > 1/2.
RationalJump protocol_jump(ProtocolId id, const BellDiagonalState& rho_new);

// Single gate of a two-qubit Clifford circuit acting on one side's pair of
// qubits (qubit 0 is the stored link's half, qubit 1 the fresh link's half).
struct CliffordGate {
  enum class Kind { h, s, cnot };
  Kind kind;
  int q0;      // acted qubit (control for cnot)
  int q1 = -1; // cnot target, unused otherwise
};

struct CliffordCircuit2Pair {
  std::vector<CliffordGate> gates;

  // Entanglement pumping circuit of Deutsch et al.: both qubits are rotated
  // by sqrt(X) phase rotations (HSH up to a global phase that cancels in the
  // bilocal conjugation), then CNOT from the stored half onto the measured
  // half. Application order: CNOT(0,1), H(0), S(0), H(0), H(1), S(1), H(1).
  static CliffordCircuit2Pair dejmps();
};

enum class SuccessParity {
  equal,  // keep when the two measured qubits agree
};

struct BilocalFit {
  RationalJump jump;
  SuccessParity parity;
  double max_residual;  // worst held-out deviation of the fit
};

// Exact evaluation of one bilocal Clifford protocol round: builds the 16x16
// density matrix of Werner(f) tensor rho_new, conjugates by C^T on one side
// and C^dagger on the other, measures the fresh pair in the computational
// basis and keeps equal outcomes. Returns (output fidelity, success
// probability).
struct BilocalPoint {
  double fidelity;
  double success_prob;
};
BilocalPoint bilocal_point(const CliffordCircuit2Pair& circ, double f,
                           const BellDiagonalState& rho_new);

// Fits the rational jump of a circuit from exact evaluations at three anchor
// fidelities (good.f is used as one additional validation point) and checks
// the fit on five held-out fidelities to 1e-10. Throws degenerate_error if
// the success probability vanishes identically.
BilocalFit apply_bilocal_clifford(const CliffordCircuit2Pair& circ, const WernerState& good,
                                  const BellDiagonalState& rho_new);

// Largest achievable steady fidelity: fixed point of the pumping jump
// anchored at the smallest new-state weight. Requires rho_new.f > 1/2
// (throws degenerate_error otherwise: the new state cannot purify).
double f_star(const BellDiagonalState& rho_new);

// Fidelity at which the three pumping jumps coincide (common value
// sqrt(rho_new.f / 2)).
double f_intersection(const BellDiagonalState& rho_new);

// Affine envelope of all bilocal Clifford jumps: lower line valid on
// [1/4, f_star], upper line on [1/4, 1], plus constant bounds on the success
// probability over [1/4, f_star].
struct CliffordBounds {
  double a_l;
  double b_l;
  double a_u;
  double b_u;
  double p_l;
  double p_u;
};
CliffordBounds clifford_bounds(const BellDiagonalState& rho_new);

}  // namespace entbuffer
