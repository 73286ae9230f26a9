#pragma once

#include <stdexcept>
#include <string>

namespace entbuffer {

// Precondition violation: malformed state weights, out-of-range rates,
// unusable configuration. Maps to CLI exit code 2.
class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Well-formed input whose requested computation has no answer: non-purifiable
// new state, divergent steady state, too few non-empty samples. Maps to CLI
// exit code 3.
class degenerate_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace entbuffer
