#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "heq/equilibrium.hpp"
#include "heq/solvers.hpp"

namespace heq {

/// Initial-point protocol: independent uniform integers in [lo, hi] per
/// coordinate, or one fixed point for every trial.
struct InitSpec {
  enum class Mode { RandomIntBox, Fixed };
  Mode mode = Mode::RandomIntBox;
  std::int64_t lo = 5;
  std::int64_t hi = 20;
  std::vector<double> point;
};

/// 3 * linspace(0.01, 0.1, 10), i.e. {0.03, 0.06, ..., 0.30}.
std::vector<double> default_lambda_grid();

/// Experiment description. Text form (all keys optional, unknown keys and
/// sections are errors, `#` starts a comment):
///
///   [problem]
///   bifunction = example51 | example52 | matrix
///   dimension  = 3
///   matrix     = a11, a12, ..., aNN        # row-major, N*N values
///
///   [solver]
///   methods     = remb, remd               # or `both`
///   variant     = characterization | paper-literal
///   lambda_grid = 0.03, 0.06               # or linspace(a, b, k) / s*linspace(a, b, k)
///   tol         = 1e-16
///   max_iter    = 1000000
///   stall_factor = 4
///
///   [init]
///   mode  = random_int_box | fixed
///   lo    = 5
///   hi    = 20
///   point = 1, 2, 3
///
///   [bench]
///   trials  = 30
///   seed    = 20250101
///   threads = 1
///
///   [verify]
///   samples = 10000
struct BenchConfig {
  BifunctionKind example = BifunctionKind::Example51;
  std::size_t dimension = 3;
  std::vector<double> matrix;

  std::vector<Method> methods{Method::Remb, Method::Remd};
  ResolventVariant variant = ResolventVariant::Characterization;
  std::vector<double> lambda_grid = default_lambda_grid();
  double tol = 1e-16;
  std::size_t max_iter = 1'000'000;
  double stall_factor = 4.0;

  InitSpec init;

  std::size_t trials = 30;
  std::uint64_t seed = 20250101;
  std::size_t threads = 1;

  std::size_t verify_samples = 10000;

  /// Throws Config on inconsistent settings.
  void validate() const;
  Manifold manifold() const;
  LogAffineBifunction make_bifunction() const;
  SolverConfig solver_config(bool record_trace) const;
};

BenchConfig parse_config(std::istream& in);
BenchConfig load_config(const std::filesystem::path& path);

}  // namespace heq
