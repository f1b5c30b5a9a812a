#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gfflab/box.hpp"
#include "gfflab/green.hpp"

namespace gfflab {

/// A_k = { m in [1, N-1] : m = (2l + 1) N / 2^k }.
struct DyadicSet {
  BoxSpec box;
  int level = 0;
  std::vector<int> members;
};

DyadicSet dyadic_set(const BoxSpec& box, int k);

/// Conditional mean E[X | values on lines x or y in A_1..A_k] and the residual.
struct Conditioned {
  Field mean;
  Field residual;
};

/// Piecewise harmonic extension over the 2^k x 2^k sub-boxes of side N/2^k.
/// k = 0 conditions on nothing (mean zero).
Conditioned condition_on_level(const Field& field, int k);

/// The 4^k sub-box pieces of a residual after level-k conditioning, each
/// translated to V_{N/2^k}. Sub-box (a, b) maps (x, y) to (x - aM, y - bM)
/// and is stored at index a * 2^k + b.
std::vector<Field> split_subboxes(const Field& residual, int k);

/// Level-1 residual cut into the four fields on V_{N/2}, order (0,0), (0,1), (1,0), (1,1).
std::array<Field, 4> residual_subfields(const Field& field);

/// levels[k-1] = E[X | A_k] - E[X | A_{k-1}] and residuals[k-1] = X - E[X | A_k].
struct Decomposition {
  BoxSpec box;
  std::vector<Field> levels;
  std::vector<Field> residuals;

  Field sum() const;
};

Decomposition decompose(const Field& field);

/// Cov(X - E[X | A_k]) over interior sites, as G - H G_LL H^T where H is the
/// harmonic-extension map from line sites. Throws SizeLimitError above max_side.
Eigen::MatrixXd exact_conditional_covariance(const BoxSpec& box, int k,
                                             int max_side = kDefaultDenseCutoff);

struct MarkovCheck {
  /// Largest deviation of a sub-box block from the sub-box Green matrix.
  double max_block_deviation = 0.0;
  /// Largest |entry| coupling two different sub-boxes or touching a line site.
  double max_off_block = 0.0;
  bool passed(double tol) const { return max_block_deviation <= tol && max_off_block <= tol; }
};

MarkovCheck markov_check(const BoxSpec& box, int k, int max_side = kDefaultDenseCutoff);

/// Matrix of the linear map interior field -> level-k increment (interior).
std::vector<Eigen::MatrixXd> level_maps(const BoxSpec& box);

/// max over j != k of |M_j G M_k^T|.
double max_cross_level_covariance(const BoxSpec& box, int max_side = kDefaultDenseCutoff);

}  // namespace gfflab
