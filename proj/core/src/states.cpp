#include "entbuffer/states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "entbuffer/errors.hpp"

namespace entbuffer {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr double kPsdTol = -1e-10;

void check_weight(double w, const char* name) {
  if (!std::isfinite(w) || w < -kWeightTol || w > 1.0 + kWeightTol) {
    throw domain_error(std::string("Bell-diagonal weight out of [0,1]: ") + name + " = " +
                       std::to_string(w));
  }
}

Eigen::Matrix4cd to_eigen(const DensityMatrix4& rho) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = rho(i, j);
  return out;
}

}  // namespace

BellDiagonalState::BellDiagonalState(double f_, double l1_, double l2_, double l3_)
    : f(f_), l1(l1_), l2(l2_), l3(l3_) {
  check_weight(f, "f");
  check_weight(l1, "l1");
  check_weight(l2, "l2");
  check_weight(l3, "l3");
  const double sum = f + l1 + l2 + l3;
  if (std::abs(sum - 1.0) > kWeightTol) {
    throw domain_error("Bell-diagonal weights must sum to 1, got " + std::to_string(sum));
  }
}

double BellDiagonalState::lambda_min() const { return std::min({l1, l2, l3}); }

double BellDiagonalState::lambda_max() const { return std::max({l1, l2, l3}); }

WernerState::WernerState(double f_) : f(f_) {
  if (!std::isfinite(f) || f < 0.25 - kWeightTol || f > 1.0 + kWeightTol) {
    throw domain_error("Werner fidelity must lie in [1/4, 1], got " + std::to_string(f));
  }
}

BellDiagonalState WernerState::bell_diagonal() const {
  const double rest = (1.0 - f) / 3.0;
  return BellDiagonalState(f, rest, rest, rest);
}

std::array<std::complex<double>, 4> bell_vector(int k) {
  const double r = 1.0 / std::numbers::sqrt2;
  switch (k) {
    case 0: return {{{r, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {r, 0.0}}};    // phi+
    case 1: return {{{0.0, 0.0}, {r, 0.0}, {r, 0.0}, {0.0, 0.0}}};    // psi+
    case 2: return {{{0.0, 0.0}, {r, 0.0}, {-r, 0.0}, {0.0, 0.0}}};   // psi-
    case 3: return {{{r, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {-r, 0.0}}};   // phi-
    default: throw domain_error("Bell vector index must be 0..3");
  }
}

double depolarize(double f, double dt, double gamma) {
  if (!std::isfinite(f) || f < 0.0 || f > 1.0) {
    throw domain_error("fidelity must lie in [0, 1]");
  }
  if (!(dt >= 0.0)) throw domain_error("depolarize requires dt >= 0");
  if (!(gamma >= 0.0)) throw domain_error("depolarize requires gamma >= 0");
  return std::exp(-gamma * dt) * (f - 0.25) + 0.25;
}

BellDiagonalState depolarize(const BellDiagonalState& s, double dt, double gamma) {
  if (!(dt >= 0.0)) throw domain_error("depolarize requires dt >= 0");
  if (!(gamma >= 0.0)) throw domain_error("depolarize requires gamma >= 0");
  const double e = std::exp(-gamma * dt);
  auto decay = [e](double w) { return e * (w - 0.25) + 0.25; };
  return BellDiagonalState(decay(s.f), decay(s.l1), decay(s.l2), decay(s.l3));
}

DensityMatrix4 to_density_matrix(const BellDiagonalState& s) {
  const std::array<double, 4> w = {s.f, s.l1, s.l2, s.l3};
  DensityMatrix4 rho;
  for (int k = 0; k < 4; ++k) {
    const auto b = bell_vector(k);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) rho(i, j) += w[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(i)] * std::conj(b[static_cast<std::size_t>(j)]);
  }
  return rho;
}

BellDiagonalState twirl(const DensityMatrix4& rho) {
  const Eigen::Matrix4cd m = to_eigen(rho);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kWeightTol) {
    throw domain_error("twirl requires a Hermitian matrix");
  }
  if (std::abs(m.trace() - std::complex<double>(1.0, 0.0)) > kWeightTol) {
    throw domain_error("twirl requires unit trace");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdTol) {
    throw domain_error("twirl requires a positive semidefinite matrix");
  }
  std::array<double, 4> w{};
  for (int k = 0; k < 4; ++k) {
    const auto b = bell_vector(k);
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = b[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(k)] = std::real(v.dot(m * v));
  }
  return BellDiagonalState(w[0], w[1], w[2], w[3]);
}

DensityMatrix4 partial_transpose(const DensityMatrix4& rho) {
  DensityMatrix4 out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp) out(2 * a + bp, 2 * ap + b) = rho(2 * a + b, 2 * ap + bp);
  return out;
}

double min_eigenvalue(const DensityMatrix4& rho) {
  const Eigen::Matrix4cd m = to_eigen(rho);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw domain_error("min_eigenvalue requires a Hermitian matrix");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_entangled(const BellDiagonalState& s) {
  return std::max(s.f, s.lambda_max()) > 0.5;
}

}  // namespace entbuffer
