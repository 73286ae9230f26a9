#pragma once

#include <cmath>

#include "entbuffer/protocols.hpp"
#include "entbuffer/rng.hpp"
#include "entbuffer/states.hpp"

namespace testsupport {

// Entangled Bell-diagonal state with fidelity in (0.5, 0.995) and the
// remaining weight split three ways at random.
inline entbuffer::BellDiagonalState random_entangled(entbuffer::SplitMix64& rng) {
  const double f = 0.505 + 0.49 * rng.uniform();
  const double w1 = -std::log1p(-rng.uniform());
  const double w2 = -std::log1p(-rng.uniform());
  const double w3 = -std::log1p(-rng.uniform());
  const double rest = 1.0 - f;
  const double total = w1 + w2 + w3;
  return {f, rest * w1 / total, rest * w2 / total, rest * w3 / total};
}

// Arbitrary Bell-diagonal weight vector (may be separable).
inline entbuffer::BellDiagonalState random_state(entbuffer::SplitMix64& rng) {
  const double w0 = -std::log1p(-rng.uniform());
  const double w1 = -std::log1p(-rng.uniform());
  const double w2 = -std::log1p(-rng.uniform());
  const double w3 = -std::log1p(-rng.uniform());
  const double total = w0 + w1 + w2 + w3;
  return {w0 / total, w1 / total, w2 / total, w3 / total};
}

// Physical affine jump drawn uniformly from the admissible wedge.
inline entbuffer::LinearJump random_jump(entbuffer::SplitMix64& rng) {
  const double a = 0.95 * rng.uniform();
  const double lo = (1.0 - a) / 4.0;
  const double b = lo + (1.0 - a - lo) * rng.uniform();
  return {a, b};
}

}  // namespace testsupport
