#pragma once

#include <array>
#include <complex>

namespace entbuffer {

// Weights of a two-qubit Bell-diagonal state in the fixed Bell ordering
// (phi+, psi+, psi-, phi-). f is the phi+ weight (the fidelity); l1..l3 are
// the psi+, psi-, phi- weights. Constructor enforces weights in [0,1] and
// unit sum to 1e-12; nothing is renormalized.
struct BellDiagonalState {
  double f;
  double l1;
  double l2;
  double l3;

  BellDiagonalState(double f, double l1, double l2, double l3);

  double lambda_min() const;  // min over l1..l3
  double lambda_max() const;  // max over l1..l3
};

// Werner state: isotropic Bell-diagonal state with fidelity f in [1/4, 1].
struct WernerState {
  double f;

  explicit WernerState(double f);

  BellDiagonalState bell_diagonal() const;
};

// Dense 4x4 complex matrix in the two-qubit computational basis
// |00>, |01>, |10>, |11>, row-major. Plain value type; validity checks are
// performed by the operations that require them.
struct DensityMatrix4 {
  std::array<std::complex<double>, 16> m{};

  std::complex<double>& operator()(int i, int j) { return m[static_cast<std::size_t>(4 * i + j)]; }
  const std::complex<double>& operator()(int i, int j) const {
    return m[static_cast<std::size_t>(4 * i + j)];
  }
};

// One of the four Bell vectors (index 0..3 in the ordering above) expressed
// in the computational basis. Single source of truth for the ordering.
std::array<std::complex<double>, 4> bell_vector(int k);

// Werner-twirled fidelity after free evolution for time dt under local
// depolarizing noise with rate gamma per pair: exponential decay of f - 1/4.
double depolarize(double f, double dt, double gamma);

// Bell-diagonal weight vector evolved for time dt: every weight decays
// toward 1/4 at the same exponential rate.
BellDiagonalState depolarize(const BellDiagonalState& s, double dt, double gamma);

// Computational-basis density matrix sum_k w_k |B_k><B_k|.
DensityMatrix4 to_density_matrix(const BellDiagonalState& s);

// Projection onto the Bell-diagonal subspace: keeps the four Bell-basis
// diagonal entries. Requires rho Hermitian, unit trace (1e-12) and positive
// semidefinite (eigenvalues >= -1e-10); throws domain_error otherwise.
BellDiagonalState twirl(const DensityMatrix4& rho);

// Partial transpose over the second qubit.
DensityMatrix4 partial_transpose(const DensityMatrix4& rho);

// Smallest eigenvalue of a Hermitian matrix (explicit eigensolve).
double min_eigenvalue(const DensityMatrix4& rho);

// A Bell-diagonal state is entangled iff its largest weight exceeds 1/2
// (strictly); equivalently iff its partial transpose has a negative
// eigenvalue.
bool is_entangled(const BellDiagonalState& s);

}  // namespace entbuffer
