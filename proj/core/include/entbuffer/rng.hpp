#pragma once

#include <cmath>
#include <cstdint>

#include "entbuffer/errors.hpp"

namespace entbuffer {

// Counter-based splitmix64 stream. Chosen over the <random> engines and
// distributions because their output is implementation-defined in places;
// this generator plus the inverse-CDF mappings below is bit-identical on any
// conforming platform, which the simulator's determinism contract requires.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Inverse-CDF exponential draw; rate must be positive.
  double exponential(double rate) {
    if (!(rate > 0.0)) throw domain_error("exponential draw requires a positive rate");
    return -std::log1p(-uniform()) / rate;
  }

  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  std::uint64_t state_;
};

// Decorrelates (seed, stream index) pairs into splitmix64 starting states so
// that per-replication streams are independent of execution order.
inline std::uint64_t mix_stream_seed(std::uint64_t seed, std::uint64_t index) {
  auto finalize = [](std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return z ^ (z >> 33);
  };
  return finalize(finalize(seed ^ 0x5851f42d4c957f2dull) + index * 0x9e3779b97f4a7c15ull);
}

}  // namespace entbuffer
