#include "gfflab/green.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dst.hpp"
#include "gfflab/errors.hpp"

namespace gfflab {

namespace {

void require_nontrivial(const BoxSpec& box) {
  if (box.side() < 2) throw PreconditionError("Green operator needs N >= 2");
}

double mode_sine(int j, int x, int side) {
  return std::sin(std::numbers::pi * j * x / side);
}

}  // namespace

GreenOperator GreenOperator::make_dense(BoxSpec box, Eigen::MatrixXd matrix) {
  const auto m = static_cast<Eigen::Index>(box.interior_count());
  if (matrix.rows() != m || matrix.cols() != m) {
    throw PreconditionError("dense Green matrix has wrong shape");
  }
  GreenOperator g(box, GreenForm::dense);
  g.dense_ = std::move(matrix);
  return g;
}

GreenOperator GreenOperator::make_spectral(BoxSpec box) {
  require_nontrivial(box);
  return GreenOperator(box, GreenForm::spectral);
}

double GreenOperator::kernel_eigenvalue(int j, int k) const {
  const double n = box_.side();
  return 0.5 * (std::cos(std::numbers::pi * j / n) + std::cos(std::numbers::pi * k / n));
}

double GreenOperator::operator()(Site a, Site b) const {
  if (!box_.is_interior(a) || !box_.is_interior(b)) return 0.0;
  if (form_ == GreenForm::dense) {
    return (*dense_)(static_cast<Eigen::Index>(box_.interior_index(a)),
                     static_cast<Eigen::Index>(box_.interior_index(b)));
  }
  const int n = box_.side();
  double sum = 0.0;
  for (int j = 1; j < n; ++j) {
    const double sx = mode_sine(j, a.x, n) * mode_sine(j, b.x, n);
    for (int k = 1; k < n; ++k) {
      sum += sx * mode_sine(k, a.y, n) * mode_sine(k, b.y, n) / (1.0 - kernel_eigenvalue(j, k));
    }
  }
  return sum * 4.0 / (static_cast<double>(n) * n);
}

std::vector<double> GreenOperator::apply(std::span<const double> interior) const {
  if (interior.size() != box_.interior_count()) {
    throw PreconditionError("vector length does not match interior site count");
  }
  if (form_ == GreenForm::dense) {
    Eigen::Map<const Eigen::VectorXd> v(interior.data(), static_cast<Eigen::Index>(interior.size()));
    Eigen::VectorXd out = (*dense_) * v;
    return {out.begin(), out.end()};
  }
  const int m = box_.interior_side();
  detail::Dst2d dst(m, m);
  auto buf = dst.data();
  std::copy(interior.begin(), interior.end(), buf.begin());
  dst.execute();
  // Forward and inverse transforms together contribute 4 N^2.
  const double scale = 1.0 / (4.0 * box_.side() * box_.side());
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      buf[static_cast<std::size_t>(j - 1) * m + (k - 1)] *= scale / (1.0 - kernel_eigenvalue(j, k));
    }
  }
  dst.execute();
  return {buf.begin(), buf.end()};
}

Eigen::MatrixXd GreenOperator::to_dense() const {
  if (form_ == GreenForm::dense) return *dense_;
  const auto m = box_.interior_count();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> unit(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    unit[c] = 1.0;
    const auto col = apply(unit);
    unit[c] = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = col[r];
    }
  }
  return out;
}

const Eigen::MatrixXd& GreenOperator::matrix() const {
  if (!dense_) throw PreconditionError("Green operator is spectral; no dense matrix held");
  return *dense_;
}

Eigen::MatrixXd killed_walk_laplacian(BoxSpec box) {
  require_nontrivial(box);
  const int n = box.side();
  const auto m = static_cast<Eigen::Index>(box.interior_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(m, m);
  constexpr int dx[4] = {1, -1, 0, 0};
  constexpr int dy[4] = {0, 0, 1, -1};
  for (int x = 1; x < n; ++x) {
    for (int y = 1; y < n; ++y) {
      const auto i = static_cast<Eigen::Index>(box.interior_index({x, y}));
      for (int d = 0; d < 4; ++d) {
        const Site nb{x + dx[d], y + dy[d]};
        if (box.is_interior(nb)) a(i, static_cast<Eigen::Index>(box.interior_index(nb))) = -0.25;
      }
    }
  }
  return a;
}

GreenOperator green_dense(BoxSpec box, int max_side) {
  require_nontrivial(box);
  if (box.side() > max_side) {
    throw SizeLimitError("dense Green matrix for N=" + std::to_string(box.side()) +
                         " exceeds the dense cap N<=" + std::to_string(max_side) +
                         "; use the spectral form");
  }
  const Eigen::MatrixXd a = killed_walk_laplacian(box);
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("I - P_int is not positive definite");
  }
  Eigen::MatrixXd g = llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
  // Symmetrize away rounding so G(x,y) == G(y,x) bitwise.
  g = 0.5 * (g + g.transpose()).eval();
  return GreenOperator::make_dense(box, std::move(g));
}

GreenOperator green_spectral(BoxSpec box) { return GreenOperator::make_spectral(box); }

double variance_at(const GreenOperator& g, Site s) { return g(s, s); }

Field variance_profile(const GreenOperator& g) {
  const BoxSpec& box = g.box();
  Field out(box);
  const int n = box.side();
  if (g.form() == GreenForm::dense) {
    const auto& mat = g.matrix();
    for (int x = 1; x < n; ++x) {
      for (int y = 1; y < n; ++y) {
        const auto i = static_cast<Eigen::Index>(box.interior_index({x, y}));
        out(x, y) = mat(i, i);
      }
    }
    return out;
  }
  // G(x,y;x,y) = (4/N^2) sum_k S_y[k] w_x[k],  w_x[k] = sum_j S_x[j] / (1 - lambda_jk),
  // with S_x[j] = sin^2(pi j x / N). O(N^3) overall.
  const int m = n - 1;
  std::vector<double> sin2(static_cast<std::size_t>(n) * n);
  for (int j = 1; j < n; ++j) {
    for (int x = 1; x < n; ++x) {
      const double s = mode_sine(j, x, n);
      sin2[static_cast<std::size_t>(x) * n + j] = s * s;
    }
  }
  std::vector<double> inv_gap(static_cast<std::size_t>(n) * n);
  for (int j = 1; j < n; ++j) {
    for (int k = 1; k < n; ++k) {
      inv_gap[static_cast<std::size_t>(j) * n + k] = 1.0 / (1.0 - g.kernel_eigenvalue(j, k));
    }
  }
  std::vector<double> w(static_cast<std::size_t>(n));
  const double scale = 4.0 / (static_cast<double>(n) * n);
  for (int x = 1; x <= m; ++x) {
    std::fill(w.begin(), w.end(), 0.0);
    for (int j = 1; j < n; ++j) {
      const double sx = sin2[static_cast<std::size_t>(x) * n + j];
      const double* row = &inv_gap[static_cast<std::size_t>(j) * n];
      for (int k = 1; k < n; ++k) w[k] += sx * row[k];
    }
    for (int y = 1; y <= m; ++y) {
      double acc = 0.0;
      const double* sy = &sin2[static_cast<std::size_t>(y) * n];
      for (int k = 1; k < n; ++k) acc += sy[k] * w[k];
      out(x, y) = scale * acc;
    }
  }
  return out;
}

}  // namespace gfflab
