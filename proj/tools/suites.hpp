#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hmt/manifold.hpp"

namespace hmt::cli {

/// One measured quantity compared against a bound. `upper` bounds pass when value ≤ limit,
/// lower bounds when value ≥ limit.
struct Check {
  std::string name;
  double value = 0.0;
  double limit = 0.0;
  bool upper = true;

  bool pass() const { return upper ? value <= limit : value >= limit; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool passed() const;
};

/// psi, gl, cp, tucker, tt
const std::vector<std::string>& suite_names();

/// Runs one invariant suite. `tol` replaces the bound of the oracle-equivalence checks
/// (default 1e-10). Throws std::invalid_argument for an unknown suite.
SuiteReport run_suite(std::string_view suite, std::uint64_t seed, std::optional<double> tol = std::nullopt);

/// One ledger line of an instrumented geodesic next to its published cost.
struct FlopLine {
  Index mode = 0;
  std::string step;
  Rational ledger;
  Rational model;
};

struct FlopsReport {
  ManifoldShape shape;
  std::vector<int> z;
  std::uint64_t seed = 0;
  std::vector<FlopLine> lines;
  Rational ledger_total;
  Rational formula;
  /// 100·Σ(n_i k_i + k_i²)
  Rational slack;
};

/// Runs one instrumented geodesic with a tangent small enough that each mode uses exactly
/// the requested scaling exponent (default 1 per mode).
FlopsReport run_flops(const ManifoldShape& shape, std::optional<std::vector<int>> z, std::uint64_t seed);

/// Row of the bench CSV.
struct BenchRecord {
  std::string manifold;
  Index n = 0;
  Index r = 0;
  std::vector<int> z;
  std::optional<Rational> flops_model;
  double time_median_s = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kBenchHeader = "manifold,n,r,z,flops_model,time_median_s,seed";

/// Shape used by `bench` for mode size n and rank parameter r: (n,n,n) with rank r for CP,
/// ranks (r², r, r) for Tucker and (r, r) for TT.
ManifoldShape bench_shape(ManifoldKind kind, Index n, Index r);

/// Median over `trials` timed runs (after one warm-up) of a full manifold geodesic divided by
/// the number of modes, plus one dense-oracle row per n ≤ dense_cap.
std::vector<BenchRecord> run_bench(ManifoldKind kind, Index r, const std::vector<Index>& ns, int trials,
                                   std::uint64_t seed, Index dense_cap = 400);

/// Median time of one low-rank per-mode geodesic step on an n×k block.
double median_lowrank_step_seconds(Index n, Index k, int trials, std::uint64_t seed);
/// Median time of the dense geodesic on a single n×n factor with a rank-k horizontal velocity.
double median_dense_step_seconds(Index n, Index k, int trials, std::uint64_t seed);

std::string to_json(const SuiteReport& report);
std::string to_csv(const SuiteReport& report, bool header);
std::string to_json(const FlopsReport& report);
std::string to_csv(const FlopsReport& report);
std::string to_csv_row(const BenchRecord& record);

}  // namespace hmt::cli
