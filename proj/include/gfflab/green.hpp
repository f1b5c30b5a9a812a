#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gfflab/box.hpp"

namespace gfflab {

/// Largest side N for which dense (N-1)^2 x (N-1)^2 matrices are built.
inline constexpr int kDefaultDenseCutoff = 64;

enum class GreenForm { dense, spectral };

/// Green's function of simple random walk killed on the boundary of V_N,
/// G = (I - P_int)^{-1}, as a symmetric operator on interior sites. Entries
/// involving a boundary site are zero.
///
/// The spectral form diagonalizes P_int with sine modes
///   psi_jk(x, y) = (2/N) sin(pi j x / N) sin(pi k y / N),  j, k in [1, N-1],
/// with kernel eigenvalues lambda_jk = (cos(pi j / N) + cos(pi k / N)) / 2.
class GreenOperator {
 public:
  static GreenOperator make_dense(BoxSpec box, Eigen::MatrixXd matrix);
  static GreenOperator make_spectral(BoxSpec box);

  const BoxSpec& box() const { return box_; }
  GreenForm form() const { return form_; }

  /// Eigenvalue of the interior walk kernel for mode (j, k).
  double kernel_eigenvalue(int j, int k) const;

  double operator()(Site a, Site b) const;
  /// G applied to a vector over interior sites.
  std::vector<double> apply(std::span<const double> interior) const;
  /// Dense matrix over interior sites; materialized from modes when spectral.
  Eigen::MatrixXd to_dense() const;
  /// Only valid for the dense form.
  const Eigen::MatrixXd& matrix() const;

 private:
  GreenOperator(BoxSpec box, GreenForm form) : box_(box), form_(form) {}
  BoxSpec box_;
  GreenForm form_;
  std::optional<Eigen::MatrixXd> dense_;
};

/// Exact (I - P_int)^{-1} via Cholesky. Throws SizeLimitError above max_side.
GreenOperator green_dense(BoxSpec box, int max_side = kDefaultDenseCutoff);
GreenOperator green_spectral(BoxSpec box);

/// Interior matrix I - P_int (walk weight 1/4 per interior neighbour).
Eigen::MatrixXd killed_walk_laplacian(BoxSpec box);

/// Field holding G(x, x) at each interior site, zero on the boundary.
Field variance_profile(const GreenOperator& g);
/// Single diagonal entry; O(N^2) in the spectral form.
double variance_at(const GreenOperator& g, Site s);

}  // namespace gfflab
