#pragma once

#include <cstddef>
#include <vector>

#include "gfflab/rng.hpp"

namespace gfflab {

/// Distribution function sampled on a uniform grid; F = 0 left of the grid
/// and F = 1 right of it.
class CdfGrid {
 public:
  CdfGrid(double origin, double step, std::vector<double> values);
  /// Unit mass at `at`; the node at the jump carries 1/2 so that quadrature
  /// against a smooth kernel stays second order.
  static CdfGrid point_mass(double at, double step);

  double origin() const { return origin_; }
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return origin_ + step_ * static_cast<double>(i); }
  double back_x() const { return x(values_.size() - 1); }

  /// Linear interpolation between nodes.
  double operator()(double x) const;

  /// x0 + integral of (1 - F), trapezoid rule.
  double mean() const;
  /// Smallest x with F(x) = p, linear interpolation.
  double quantile(double p) const;
  /// E|M - M'| = 2 * integral of F (1 - F).
  double pair_gap() const;
  /// E max(M, M') by summing max over pairs of discrete cell masses.
  double pair_max_direct() const;
  /// E max(M, M') as (2 E M + E|M - M'|) / 2.
  double pair_max_via_identity() const { return mean() + 0.5 * pair_gap(); }

  /// Throws GridCoverageError unless nondecreasing in [0, 1] with the ends
  /// within 1e-9 of 0 and 1.
  void validate() const;

 private:
  double origin_;
  double step_;
  std::vector<double> values_;
};

/// Branching random walk on a b-ary tree with Gaussian increments.
/// stddev[g - 1] is the increment scale at recursion step g, i.e. on tree
/// edges g levels above the leaves; the last entry repeats.
struct BrwSpec {
  int branching = 4;
  std::vector<double> stddev{1.0};
  int depth = 0;

  double sigma(int generation) const;
  double max_sigma() const;
  void validate() const;
};

/// One step of F -> [ integral F(x - s) dPhi_sigma(s) ]^b on the lattice of F,
/// Gaussian kernel truncated at +-8 sigma. The output is extended by the
/// kernel width and trimmed where it is 0 or 1 to double precision.
CdfGrid brw_cdf_step(const CdfGrid& cdf, const BrwSpec& spec, int generation);

struct BrwGeneration {
  int generation = 0;
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
  double dh_gap = 0.0;
};

struct BrwRun {
  std::vector<CdfGrid> cdfs;
  std::vector<BrwGeneration> summary;
  /// min over steps of (E M_{g+1} - E M_g) - dh_gap(g) / 2.
  double worst_dh_slack = 0.0;
  bool dekking_host_holds(double tol) const { return worst_dh_slack >= -tol; }
};

/// step <= 0 selects 1e-3 * the largest increment scale.
BrwRun brw_run(const BrwSpec& spec, double step = 0.0);

struct BrwSimStats {
  int depth = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;
  double dh_gap = 0.0;
  double dh_se = 0.0;
};

inline constexpr double kDefaultNodeBudget = 1e11;

/// Depth-first simulation of M_depth; sample i uses stream seed.stream + i.
/// Throws BudgetError when samples * b^depth exceeds node_budget.
BrwSimStats brw_simulate(const BrwSpec& spec, std::size_t samples, SeedSpec seed, int workers = 1,
                         double node_budget = kDefaultNodeBudget);

}  // namespace gfflab
