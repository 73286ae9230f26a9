#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "entbuffer/errors.hpp"
#include "entbuffer/protocols.hpp"

namespace entbuffer {

namespace {

using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Mat16 = Eigen::Matrix<std::complex<double>, 16, 16>;

template <typename MatA, typename MatB>
auto kron(const MatA& a, const MatB& b) {
  constexpr int ra = MatA::RowsAtCompileTime, ca = MatA::ColsAtCompileTime;
  constexpr int rb = MatB::RowsAtCompileTime, cb = MatB::ColsAtCompileTime;
  Eigen::Matrix<std::complex<double>, ra * rb, ca * cb> out;
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j) out.template block<rb, cb>(i * rb, j * cb) = a(i, j) * b;
  return out;
}

Mat2 hadamard() {
  Mat2 h;
  h << 1, 1, 1, -1;
  return h / std::numbers::sqrt2;
}

Mat2 phase_s() {
  Mat2 s;
  s << 1, 0, 0, std::complex<double>(0, 1);
  return s;
}

// Two-qubit matrix of a single gate; qubit 0 is the high bit of the index.
Mat4 gate_matrix(const CliffordGate& g) {
  if (g.kind == CliffordGate::Kind::cnot) {
    if (g.q0 < 0 || g.q0 > 1 || g.q1 < 0 || g.q1 > 1 || g.q0 == g.q1) {
      throw domain_error("cnot needs distinct qubits in {0, 1}");
    }
    Mat4 u = Mat4::Zero();
    for (int b0 = 0; b0 < 2; ++b0)
      for (int b1 = 0; b1 < 2; ++b1) {
        const int in = 2 * b0 + b1;
        int o0 = b0, o1 = b1;
        if (g.q0 == 0 ? b0 : b1) (g.q1 == 0 ? o0 : o1) ^= 1;
        u(2 * o0 + o1, in) = 1.0;
      }
    return u;
  }
  if (g.q0 < 0 || g.q0 > 1) throw domain_error("single-qubit gate needs a qubit in {0, 1}");
  const Mat2 u1 = g.kind == CliffordGate::Kind::h ? hadamard() : phase_s();
  const Mat2 id = Mat2::Identity();
  return g.q0 == 0 ? Mat4(kron(u1, id)) : Mat4(kron(id, u1));
}

Mat4 assemble(const CliffordCircuit2Pair& circ) {
  Mat4 u = Mat4::Identity();
  for (const auto& g : circ.gates) u = gate_matrix(g) * u;  // application order
  if ((u * u.adjoint() - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10) {
    throw domain_error("circuit did not assemble to a unitary");
  }
  return u;
}

Mat4 to_eigen(const DensityMatrix4& rho) {
  Mat4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho(i, j);
  return out;
}

// One exact round. Qubit order of the 16-dim space is (A1, A2, B1, B2) with
// A1 the high bit; the stored link lives on (A1, B1), the fresh link on
// (A2, B2). Side A applies C^T, side B applies C^dagger, both in the
// (pair-1 qubit, pair-2 qubit) order. The fresh pair (A2, B2) is measured in
// the computational basis and equal outcomes are kept.
BilocalPoint evaluate(const Mat4& c, double f, const BellDiagonalState& rho_new) {
  const Mat4 rho_good = to_eigen(to_density_matrix(WernerState(f).bell_diagonal()));
  const Mat4 rho_fresh = to_eigen(to_density_matrix(rho_new));

  Mat16 rho;
  for (int a1 = 0; a1 < 2; ++a1)
    for (int a2 = 0; a2 < 2; ++a2)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int b2 = 0; b2 < 2; ++b2)
          for (int a1p = 0; a1p < 2; ++a1p)
            for (int a2p = 0; a2p < 2; ++a2p)
              for (int b1p = 0; b1p < 2; ++b1p)
                for (int b2p = 0; b2p < 2; ++b2p) {
                  const int row = 8 * a1 + 4 * a2 + 2 * b1 + b2;
                  const int col = 8 * a1p + 4 * a2p + 2 * b1p + b2p;
                  rho(row, col) = rho_good(2 * a1 + b1, 2 * a1p + b1p) *
                                  rho_fresh(2 * a2 + b2, 2 * a2p + b2p);
                }

  const Mat4 ca = c.transpose();
  const Mat4 cb = c.adjoint();
  const Mat16 u = kron(ca, cb);
  const Mat16 evolved = u * rho * u.adjoint();

  // Keep (A1, B1) entries with A2 = B2 = m, summed over the two branches.
  Mat4 kept = Mat4::Zero();
  for (int m = 0; m < 2; ++m)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b1 = 0; b1 < 2; ++b1)
        for (int a1p = 0; a1p < 2; ++a1p)
          for (int b1p = 0; b1p < 2; ++b1p)
            kept(2 * a1 + b1, 2 * a1p + b1p) +=
                evolved(8 * a1 + 4 * m + 2 * b1 + m, 8 * a1p + 4 * m + 2 * b1p + m);

  const double p = kept.trace().real();
  // <phi+| kept |phi+> before normalization.
  const double overlap = 0.5 * (kept(0, 0) + kept(0, 3) + kept(3, 0) + kept(3, 3)).real();
  return {p > 0.0 ? overlap / p : 0.0, p};
}

}  // namespace

CliffordCircuit2Pair CliffordCircuit2Pair::dejmps() {
  using K = CliffordGate::Kind;
  CliffordCircuit2Pair c;
  c.gates = {
      {K::cnot, 0, 1}, {K::h, 0}, {K::s, 0}, {K::h, 0}, {K::h, 1}, {K::s, 1}, {K::h, 1},
  };
  return c;
}

BilocalPoint bilocal_point(const CliffordCircuit2Pair& circ, double f,
                           const BellDiagonalState& rho_new) {
  return evaluate(assemble(circ), f, rho_new);
}

BilocalFit apply_bilocal_clifford(const CliffordCircuit2Pair& circ, const WernerState& good,
                                  const BellDiagonalState& rho_new) {
  const Mat4 c = assemble(circ);

  // Both the unnormalized numerator J(F) p(F) and p(F) are affine in F, so
  // two anchors determine each and the third anchor is a consistency check.
  const std::array<double, 3> fa = {0.25, 0.625, 1.0};
  std::array<BilocalPoint, 3> pts;
  for (std::size_t i = 0; i < 3; ++i) pts[i] = evaluate(c, fa[i], rho_new);

  if (std::max({pts[0].success_prob, pts[1].success_prob, pts[2].success_prob}) < 1e-12) {
    throw degenerate_error("circuit never succeeds on this input family");
  }

  const double cc = (pts[2].success_prob - pts[0].success_prob) / (fa[2] - fa[0]);
  const double dd = pts[0].success_prob - cc * fa[0];
  const auto num = [](const BilocalPoint& p) { return p.fidelity * p.success_prob; };
  const double at = (num(pts[2]) - num(pts[0])) / (fa[2] - fa[0]);
  const double bt = num(pts[0]) - at * fa[0];

  double residual = std::abs(pts[1].success_prob - (cc * fa[1] + dd));
  residual = std::max(residual, std::abs(num(pts[1]) - (at * fa[1] + bt)));
  const std::array<double, 6> held_out = {0.3, 0.45, 0.6, 0.75, 0.9, good.f};
  for (double f : held_out) {
    const BilocalPoint p = evaluate(c, f, rho_new);
    residual = std::max(residual, std::abs(p.success_prob - (cc * f + dd)));
    if (p.success_prob > 1e-9) {
      residual = std::max(residual, std::abs(p.fidelity - (at * f + bt) / (cc * f + dd)));
    }
  }
  if (!(residual < 1e-10)) {
    throw degenerate_error("circuit action did not fit a rational fidelity jump");
  }
  return {RationalJump(at, bt, cc, dd), SuccessParity::equal, residual};
}

}  // namespace entbuffer
