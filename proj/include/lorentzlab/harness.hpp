#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lorentzlab/rearrangement.hpp"
#include "lorentzlab/report.hpp"
#include "lorentzlab/spectral.hpp"

namespace lorentzlab::harness {

// The five corpus families. Regeneration from the same spec is bit-identical:
// sample i draws from a fresh splitmix64 stream seeded with (seed XOR i).
enum class CorpusKind {
  StepFunctions,
  IntervalSets,
  GaussianMatrices,
  HermitianPairs,
  LipschitzFunctions,
};

struct CorpusSpec {
  CorpusKind kind = CorpusKind::StepFunctions;
  std::uint64_t seed = 42;
  int size = 50;
  int dim = 16;        // matrix side (matrix kinds only)
  int max_layers = 8;  // pieces per step sample
  double decades = 6.0;  // supports drawn log-uniform over [-d/2, d/2] decades
};

std::string describe(const CorpusSpec& spec);

// Layer-cake samples: 1..max_layers layers, log-uniform u over the decade
// window, log-uniform alpha over [1e-2, 1e2].
std::vector<rearrangement::DecreasingStep> gen_decreasing_steps(
    const CorpusSpec& spec);

// Signed variant for the Hilbert probes: same stream family, piece values
// carry random signs.
std::vector<rearrangement::StepFn> gen_step_functions(const CorpusSpec& spec);

// 1..4 disjoint intervals from 2m sorted log-uniform endpoints.
std::vector<rearrangement::IntervalSet> gen_interval_sets(
    const CorpusSpec& spec);

// Entries are independent standard complex Gaussians (Box-Muller, re and im
// each standard normal).
std::vector<spectral::CMatrix> gen_gaussian_matrices(const CorpusSpec& spec);

// Pairs (A, B), each (G + G*)/2 for an independent Gaussian G; both drawn
// from the one per-sample stream, A first.
std::vector<std::pair<spectral::CMatrix, spectral::CMatrix>>
gen_hermitian_pairs(const CorpusSpec& spec);

// 3..6 knots, abscissae uniform in [-3, 3] with a 0.1 minimum gap, values
// uniform in [-2, 2].
std::vector<spectral::LipschitzFn> gen_lipschitz_functions(
    const CorpusSpec& spec);

// Per-experiment evaluation grid: `count` log-uniform points in [lo, hi],
// sorted; the stream salt keeps it independent of the sample's own draws.
std::vector<double> sample_t_grid(std::uint64_t seed, std::size_t index,
                                  int count, double lo, double hi);

// ---------------------------------------------------------------------------
// Regression-frozen empirical constants
// ---------------------------------------------------------------------------

struct FrozenConstant {
  std::string probe;
  std::uint64_t seed = 0;
  std::string corpus;
  double value = 0.0;
};

struct FreezeOutcome {
  std::string probe;
  bool recorded_now = false;  // first run: entry written, nothing asserted
  bool pass = true;
  double reference = 0.0;
  double value = 0.0;
  std::string note;
};

// Ledger file maps probe name -> {seed, corpus, value}. A missing file or
// entry records the value (recorded_now). An existing entry must match the
// seed and corpus descriptor and reproduce the value within
// 1e-9 * max(1, |reference|).
FreezeOutcome check_frozen(const std::string& path, const FrozenConstant& c);

// ---------------------------------------------------------------------------
// The suite
// ---------------------------------------------------------------------------

struct SuiteConfig {
  std::uint64_t seed = 42;
  int threads = 0;   // 0 = hardware default, 1 = serial
  bool timing = true;  // false zeroes the ms fields (byte-stable output)
  std::string constants_path;  // empty: constants reported but not frozen
  int matrix_dim = 64;
  int matrix_samples = 50;
  int step_samples = 200;
  int witness_samples = 100;
  int doi_samples = 100;
};

struct SuiteResult {
  std::vector<report::ExperimentReport> reports;
  std::vector<FreezeOutcome> freezes;
  bool all_pass = true;
};

// Runs the full experiment list. Per-experiment errors become failed report
// entries; the suite always completes. Deterministic for a fixed config
// regardless of thread count.
SuiteResult run_suite(const SuiteConfig& config);

}  // namespace lorentzlab::harness
