#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gfflab/box.hpp"

namespace gfflab {

/// Inclusive rectangle of sites [x0, x1] x [y0, y1].
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = -1;
  int y1 = -1;

  int width() const { return x1 - x0 + 1; }
  int height() const { return y1 - y0 + 1; }
  bool empty() const { return width() <= 0 || height() <= 0; }
  bool contains(Site s) const { return s.x >= x0 && s.x <= x1 && s.y >= y0 && s.y <= y1; }
};

struct BoundaryValue {
  Site site;
  double value = 0.0;
};

/// Values of a harmonic extension on a rectangular region (x-major).
struct RegionField {
  Rect rect;
  std::vector<double> values;

  double at(Site s) const {
    return values[static_cast<std::size_t>(s.x - rect.x0) * rect.height() + (s.y - rect.y0)];
  }
};

/// Exact solver for the discrete Dirichlet problem on a rectangle, by the
/// sine transform that diagonalizes the killed walk kernel. Reusable across
/// rectangles of one shape; not thread safe.
class RectDirichletSolver {
 public:
  RectDirichletSolver(int width, int height);
  ~RectDirichletSolver();
  RectDirichletSolver(RectDirichletSolver&&) noexcept;
  RectDirichletSolver& operator=(RectDirichletSolver&&) noexcept;

  int width() const { return width_; }
  int height() const { return height_; }

  /// Overwrites the rect interior of a full (stride = row length, x-major)
  /// site array with the harmonic extension of the values on the ring of
  /// sites adjacent to the rect. Corner sites of the ring are not read.
  void fill(std::span<double> sites, int stride, const Rect& rect);

 private:
  struct Impl;
  int width_;
  int height_;
  std::unique_ptr<Impl> impl_;
};

/// Sites adjacent to the rect but outside it (no corners), in a fixed order.
std::vector<Site> region_boundary(const Rect& rect);

/// Validates that `region` is exactly a full rectangle of interior sites.
Rect region_rect(const BoxSpec& box, std::span<const Site> region);

/// Discrete harmonic extension into `region` of `data` given on its ring.
/// Throws RegionShapeError for non-rectangular regions and BoundaryDataError
/// when a ring site is missing or given twice, or data lies off the ring.
RegionField harmonic_extension(const BoxSpec& box, std::span<const Site> region,
                               std::span<const BoundaryValue> data);
RegionField harmonic_extension(const BoxSpec& box, const Rect& rect,
                               std::span<const BoundaryValue> data);

/// Largest |h(x) - mean of the four neighbours| over the rect, reading
/// neighbours from the full site array.
double mean_value_residual(std::span<const double> sites, int stride, const Rect& rect);

}  // namespace gfflab
