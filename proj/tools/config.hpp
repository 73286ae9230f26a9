#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "entbuffer/protocols.hpp"
#include "entbuffer/simulator.hpp"
#include "entbuffer/states.hpp"

namespace entbuffer::cli {

// Parsed "protocol" section. Exactly one of the three shapes is accepted:
//   {"f_new": x, "jump": {"a": .., "b": ..}}      affine jump, no success model
//   {"rho_new": [f, l1, l2, l3], "id": 1..7}      catalogue protocol
//   {"rho_new": [f, l1, l2, l3], "dejmps": true}  circuit resolved by the oracle
struct ProtocolSpec {
  enum class Kind { linear, catalogue, dejmps };
  Kind kind;
  double f_new;
  std::optional<LinearJump> linear;
  std::optional<BellDiagonalState> rho_new;
  int id = 0;

  // Jump plus success model; affine specs get success probability 1.
  RationalJump resolve() const;
  // Affine form; throws domain_error for fidelity-dependent success models.
  LinearJump resolve_linear() const;
};

struct FileConfig {
  // "system" section; q and p are optional and checked per command.
  double lambda = 0.0;
  double mu = 0.0;
  double gamma = 0.0;
  std::optional<double> q;
  std::optional<double> p;

  ProtocolSpec protocol;

  // "simulation" section (optional, defaults below), overridable by flags.
  double t_sim = 50.0;
  std::int64_t n_samples = 10000;
  std::uint64_t seed = 1;
  SuccessMode mode = SuccessMode::constant_p;
};

// Loads and strictly validates a JSON config: unknown keys anywhere are
// rejected with the offending name; type mismatches and missing required
// fields name the field. Throws domain_error.
FileConfig load_config(const std::string& path);

}  // namespace entbuffer::cli
