#pragma once

// Test-only reference computations. Nothing here calls into the library's
// solvers, transforms or random streams.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    if (a[piv][c] == 0.0) throw std::runtime_error("singular");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

/// Interior index (x-1)(N-1) + (y-1), same layout as the library.
inline std::size_t idx(int side, int x, int y) {
  return static_cast<std::size_t>(x - 1) * static_cast<std::size_t>(side - 1) +
         static_cast<std::size_t>(y - 1);
}

/// (I - P_int)^{-1} by Gauss-Jordan on the explicit walk kernel.
inline Matrix green(int side) {
  const std::size_t m = static_cast<std::size_t>(side - 1) * static_cast<std::size_t>(side - 1);
  Matrix a(m, std::vector<double>(m, 0.0));
  for (int x = 1; x < side; ++x) {
    for (int y = 1; y < side; ++y) {
      const auto i = idx(side, x, y);
      a[i][i] = 1.0;
      const int nx[4] = {x + 1, x - 1, x, x};
      const int ny[4] = {y, y, y + 1, y - 1};
      for (int d = 0; d < 4; ++d) {
        if (nx[d] > 0 && nx[d] < side && ny[d] > 0 && ny[d] < side) a[i][idx(side, nx[d], ny[d])] -= 0.25;
      }
    }
  }
  return invert(a);
}

/// Dirichlet solve on the interior of V_N with arbitrary boundary values,
/// boundary(x, y) called for sites on the outer ring.
template <typename Boundary>
std::vector<double> dirichlet(int side, Boundary boundary) {
  const std::size_t m = static_cast<std::size_t>(side - 1) * static_cast<std::size_t>(side - 1);
  const Matrix g = green(side);
  std::vector<double> b(m, 0.0);
  for (int x = 1; x < side; ++x) {
    for (int y = 1; y < side; ++y) {
      double s = 0.0;
      if (x == 1) s += boundary(0, y);
      if (x == side - 1) s += boundary(side, y);
      if (y == 1) s += boundary(x, 0);
      if (y == side - 1) s += boundary(x, side);
      b[idx(side, x, y)] = 0.25 * s;
    }
  }
  std::vector<double> h(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) h[i] += g[i][j] * b[j];
  }
  return h;
}

/// Lower Cholesky factor.
inline Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.size();
  Matrix l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = i == j ? std::sqrt(s) : s / l[j][j];
    }
  }
  return l;
}

/// Independent GFF sampler: own Cholesky, std::mt19937 (32-bit) and Box-Muller.
class BruteForceSampler {
 public:
  BruteForceSampler(int side, unsigned seed) : side_(side), l_(cholesky(green(side))), rng_(seed) {}

  double sample_max() {
    const std::size_t m = l_.size();
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = normal();
    double best = 0.0;  // boundary sites
    for (std::size_t i = 0; i < m; ++i) {
      double v = 0.0;
      for (std::size_t k = 0; k <= i; ++k) v += l_[i][k] * z[k];
      best = std::max(best, v);
    }
    return best;
  }

 private:
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform_(rng_);
    } while (u1 <= 0.0);
    const double u2 = uniform_(rng_);
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  int side_;
  Matrix l_;
  std::mt19937 rng_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// Composite Simpson rule on [a, b] with an even number of panels.
template <typename F>
double simpson(F f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// E max of `count` iid N(0, 1) = integral of x d(Phi^count).
inline double expected_max_of_normals(int count) {
  return simpson(
      [count](double x) { return x * count * std::pow(normal_cdf(x), count - 1) * normal_pdf(x); },
      -12.0, 12.0, 24000);
}

}  // namespace oracle
