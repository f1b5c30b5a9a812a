#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "gfflab/box.hpp"
#include "gfflab/rng.hpp"
#include "gfflab/sampler.hpp"

namespace gfflab {

/// Leading growth constant of E max, 2 sqrt(2/pi).
inline constexpr double kGrowthConstant = 2.0 * 0.79788456080286535588;  // 2 * sqrt(2/pi)

struct FieldMax {
  double value = 0.0;
  Site argmax;
};

/// Maximum over all of V_N, boundary included; ties go to the
/// lexicographically first site.
FieldMax field_max(const Field& field);

/// Monte Carlo summary of Z_n = max of the field on V_{2^n}.
struct MaxStats {
  int n = 0;
  int side = 0;
  std::size_t samples = 0;
  double mean_max = 0.0;
  double var_max = 0.0;
  double se_mean = 0.0;
  /// E|Z - Z'| from disjoint pairs (2i, 2i+1).
  double dh_gap = 0.0;
  double dh_se = 0.0;
  /// Nearest-rank quantiles of Z - mean_max at 10, 25, 50, 75, 90 %.
  std::array<double, 5> quantiles{};

  double q10() const { return quantiles[0]; }
  double q25() const { return quantiles[1]; }
  double q50() const { return quantiles[2]; }
  double q75() const { return quantiles[3]; }
  double q90() const { return quantiles[4]; }
};

inline constexpr std::array<double, 5> kQuantileLevels{0.10, 0.25, 0.50, 0.75, 0.90};

/// Nearest rank: the ceil(p * size)-th smallest value of a sorted sample.
double nearest_rank(std::span<const double> sorted, double p);

/// Statistics from the per-sample maxima in sample order.
MaxStats summarize_maxima(int n, std::span<const double> maxima);

struct McOptions {
  int workers = 1;
  SamplerKind sampler = SamplerKind::automatic;
  int dense_cutoff = 16;
};

/// Stream index for sample i at level n: seed.stream + n * 2^40 + i.
SeedSpec level_seed(SeedSpec seed, int n);

/// Per-sample maxima in sample order (independent of the worker count).
std::vector<double> sample_maxima(int n, std::size_t samples, SeedSpec seed,
                                  const McOptions& options = {});

/// Requires samples >= 100.
MaxStats mc_max_stats(int n, std::size_t samples, SeedSpec seed, const McOptions& options = {});

/// E max(Z, Z') over the disjoint pairs, computed directly and through
/// max(a, b) = (a + b + |a - b|) / 2.
struct PairedMaxCheck {
  double direct = 0.0;
  double via_identity = 0.0;
};
PairedMaxCheck paired_max_crosscheck(std::span<const double> maxima);

struct StepVerdict {
  int n = 0;
  double increment = 0.0;
  double combined_se = 0.0;
  bool monotone = false;
  /// dh_gap(n) / 2, the lower bound on the increment.
  double dh_bound = 0.0;
  double dh_combined_se = 0.0;
  bool dekking_host = false;
};

/// Sorted by n; throws PreconditionError on a missing level.
std::vector<StepVerdict> monotonicity_report(std::span<const MaxStats> stats,
                                             double se_multiplier = 2.0);

struct SubsequenceReport {
  double threshold = 0.0;
  std::vector<int> levels;
  std::size_t scanned = 0;
  double density = 0.0;
  /// Least-squares slope of mean_max against n.
  double slope = 0.0;
  /// slope / threshold: asymptotic bound on the fraction of violating levels.
  double violation_bound = 0.0;
  /// Largest observed one-step increment in the window.
  double observed_constant = 0.0;
};

/// Levels n with mean_max(n+1) <= mean_max(n) + threshold, among consecutive pairs.
SubsequenceReport subsequence_detector(std::span<const MaxStats> stats, double threshold);

struct GrowthFit {
  /// mean_max ~ c ln N - c2 ln ln N + intercept
  double c_hat = 0.0;
  double c2_hat = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
  /// Same model with c pinned at kGrowthConstant.
  double pinned_c2 = 0.0;
  double pinned_intercept = 0.0;
  std::vector<double> pinned_residuals;
  /// mean_max ~ slope ln N + intercept.
  double linear_c = 0.0;
  double linear_intercept = 0.0;
};

/// Needs at least 4 levels with n >= 2 (ln ln N finite and distinct).
GrowthFit growth_fit(std::span<const MaxStats> stats);

struct TightnessRow {
  int n = 0;
  double spread_90_10 = 0.0;
  double spread_75_25 = 0.0;
  double dh_gap = 0.0;
  double dh_se = 0.0;
  double var_over_n = 0.0;
};

struct TightnessReport {
  std::vector<TightnessRow> rows;
  /// max / min of the spreads across levels.
  double ratio_90_10 = 0.0;
  double ratio_75_25 = 0.0;
};

/// Needs at least 3 levels.
TightnessReport tightness_diagnostic(std::span<const MaxStats> stats);

}  // namespace gfflab
