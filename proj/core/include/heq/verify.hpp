#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "heq/config.hpp"
#include "heq/rng.hpp"

namespace heq {

/// One property check. `value` is the observed worst case and `threshold` the
/// bound it is compared against; hard checks decide the exit status.
struct CheckResult {
  std::string name;
  bool hard = true;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::size_t hard_failures() const;
};

/// Geometry invariants on LogOrthant(N), N in {1, 2, 3, 10}: exp/log round
/// trip, norm consistency, law of cosines, log isometry. Values are worst
/// error / allowed error, so the threshold is 1.
std::vector<CheckResult> geometry_suite(CounterRng& rng, std::size_t samples);

/// Busemann invariants: zero-curvature pairing identity, finite-t
/// approximation bound and monotonicity, 1-Lipschitz, ray normalization.
std::vector<CheckResult> busemann_suite(CounterRng& rng, std::size_t samples);

/// Probes and resolvent/prox residuals for the configured bifunction.
std::vector<CheckResult> equilibrium_suite(const BenchConfig& cfg, CounterRng& rng, std::size_t samples);

/// Descent inequality, error bound and rate envelope on short runs of the
/// configured problem with x* = (1, ..., 1).
std::vector<CheckResult> diagnostics_suite(const BenchConfig& cfg);

VerifyReport run_verify(const BenchConfig& cfg);

/// Lines `check,<name>,<hard|soft>,<pass|fail>,<value>,<threshold>,<detail>`
/// followed by `verify,<pass|fail>,<hard failures>`.
void write_verify_report(std::ostream& os, const VerifyReport& report);

}  // namespace heq
