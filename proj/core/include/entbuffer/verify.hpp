#pragma once

#include <iosfwd>
#include <string>

namespace entbuffer {

// Fault-injection knobs exist so tests can prove the suite catches real
// defects; production callers leave them at the defaults.
struct VerifyOptions {
  double lower_slope_nudge = 0.0;   // added to the lower-bound slope before the sandwich check
  bool permute_oracle_input = false;  // scrambles the Bell ordering fed to the circuit oracle
  std::ostream* log = nullptr;      // one line per check when set
};

struct VerifyReport {
  bool ok;
  std::string first_failure;  // empty when ok
  int checks_run;
};

// Cross-checks every analytic path against an independent route: circuit
// oracle vs catalogue, series vs closed form, recursion vs coefficient form,
// simulation vs closed form, envelope sandwich, fixed points, entanglement
// criterion vs eigensolve, derivative signs vs finite differences.
VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace entbuffer
