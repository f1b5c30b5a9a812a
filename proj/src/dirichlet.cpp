#include "gfflab/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "dst.hpp"
#include "gfflab/errors.hpp"

namespace gfflab {

struct RectDirichletSolver::Impl {
  Impl(int w, int h) : dst(w, h), inv_eigen(static_cast<std::size_t>(w) * h) {
    // (I - P) on a w x h rectangle has eigenvalues 1 - (cos(pi j/(w+1)) + cos(pi k/(h+1)))/2;
    // the round trip through the transform contributes 4 (w+1)(h+1).
    const double scale = 1.0 / (4.0 * (w + 1) * (h + 1));
    for (int j = 1; j <= w; ++j) {
      for (int k = 1; k <= h; ++k) {
        const double mu = 1.0 - 0.5 * (std::cos(std::numbers::pi * j / (w + 1)) +
                                       std::cos(std::numbers::pi * k / (h + 1)));
        inv_eigen[static_cast<std::size_t>(j - 1) * h + (k - 1)] = scale / mu;
      }
    }
  }
  detail::Dst2d dst;
  std::vector<double> inv_eigen;
};

RectDirichletSolver::RectDirichletSolver(int width, int height)
    : width_(width), height_(height) {
  if (width < 1 || height < 1) throw PreconditionError("Dirichlet solver needs a nonempty rect");
  impl_ = std::make_unique<Impl>(width, height);
}

RectDirichletSolver::~RectDirichletSolver() = default;
RectDirichletSolver::RectDirichletSolver(RectDirichletSolver&&) noexcept = default;
RectDirichletSolver& RectDirichletSolver::operator=(RectDirichletSolver&&) noexcept = default;

void RectDirichletSolver::fill(std::span<double> sites, int stride, const Rect& rect) {
  if (rect.width() != width_ || rect.height() != height_) {
    throw PreconditionError("rect shape does not match solver");
  }
  const auto at = [&](int x, int y) -> double& {
    return sites[static_cast<std::size_t>(x) * stride + y];
  };
  auto buf = impl_->dst.data();
  // Right-hand side of (I - P) h = b: a quarter of the ring values next to each site.
  for (int x = rect.x0; x <= rect.x1; ++x) {
    for (int y = rect.y0; y <= rect.y1; ++y) {
      double b = 0.0;
      if (x == rect.x0) b += at(x - 1, y);
      if (x == rect.x1) b += at(x + 1, y);
      if (y == rect.y0) b += at(x, y - 1);
      if (y == rect.y1) b += at(x, y + 1);
      buf[static_cast<std::size_t>(x - rect.x0) * height_ + (y - rect.y0)] = 0.25 * b;
    }
  }
  impl_->dst.execute();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= impl_->inv_eigen[i];
  impl_->dst.execute();
  for (int x = rect.x0; x <= rect.x1; ++x) {
    for (int y = rect.y0; y <= rect.y1; ++y) {
      at(x, y) = buf[static_cast<std::size_t>(x - rect.x0) * height_ + (y - rect.y0)];
    }
  }
}

std::vector<Site> region_boundary(const Rect& rect) {
  std::vector<Site> out;
  for (int y = rect.y0; y <= rect.y1; ++y) out.push_back({rect.x0 - 1, y});
  for (int y = rect.y0; y <= rect.y1; ++y) out.push_back({rect.x1 + 1, y});
  for (int x = rect.x0; x <= rect.x1; ++x) out.push_back({x, rect.y0 - 1});
  for (int x = rect.x0; x <= rect.x1; ++x) out.push_back({x, rect.y1 + 1});
  return out;
}

Rect region_rect(const BoxSpec& box, std::span<const Site> region) {
  if (region.empty()) throw RegionShapeError("region is empty");
  Rect r{region[0].x, region[0].y, region[0].x, region[0].y};
  for (const Site& s : region) {
    if (!box.is_interior(s)) {
      throw RegionShapeError("region site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                             ") is not an interior site");
    }
    r.x0 = std::min(r.x0, s.x);
    r.x1 = std::max(r.x1, s.x);
    r.y0 = std::min(r.y0, s.y);
    r.y1 = std::max(r.y1, s.y);
  }
  std::vector<Site> sorted(region.begin(), region.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() != region.size() ||
      sorted.size() != static_cast<std::size_t>(r.width()) * r.height()) {
    throw RegionShapeError("region is not a full rectangle of distinct sites");
  }
  return r;
}

RegionField harmonic_extension(const BoxSpec& box, const Rect& rect,
                               std::span<const BoundaryValue> data) {
  if (rect.empty() || !box.is_interior({rect.x0, rect.y0}) || !box.is_interior({rect.x1, rect.y1})) {
    throw RegionShapeError("region must be a nonempty rectangle of interior sites");
  }
  std::map<Site, double> given;
  for (const auto& bv : data) {
    if (!given.emplace(bv.site, bv.value).second) {
      throw BoundaryDataError("boundary site (" + std::to_string(bv.site.x) + "," +
                              std::to_string(bv.site.y) + ") given twice");
    }
  }
  const auto ring = region_boundary(rect);
  const int stride = box.side() + 1;
  std::vector<double> sites(box.site_count(), 0.0);
  for (const Site& s : ring) {
    auto it = given.find(s);
    if (it == given.end()) {
      throw BoundaryDataError("missing boundary value at (" + std::to_string(s.x) + "," +
                              std::to_string(s.y) + ")");
    }
    sites[box.site_index(s)] = it->second;
    given.erase(it);
  }
  if (!given.empty()) {
    const Site s = given.begin()->first;
    throw BoundaryDataError("site (" + std::to_string(s.x) + "," + std::to_string(s.y) +
                            ") is not on the region boundary");
  }
  RectDirichletSolver solver(rect.width(), rect.height());
  solver.fill(sites, stride, rect);
  RegionField out{rect, {}};
  out.values.reserve(static_cast<std::size_t>(rect.width()) * rect.height());
  for (int x = rect.x0; x <= rect.x1; ++x) {
    for (int y = rect.y0; y <= rect.y1; ++y) out.values.push_back(sites[box.site_index({x, y})]);
  }
  return out;
}

RegionField harmonic_extension(const BoxSpec& box, std::span<const Site> region,
                               std::span<const BoundaryValue> data) {
  return harmonic_extension(box, region_rect(box, region), data);
}

double mean_value_residual(std::span<const double> sites, int stride, const Rect& rect) {
  const auto at = [&](int x, int y) { return sites[static_cast<std::size_t>(x) * stride + y]; };
  double worst = 0.0;
  for (int x = rect.x0; x <= rect.x1; ++x) {
    for (int y = rect.y0; y <= rect.y1; ++y) {
      const double avg = 0.25 * (at(x - 1, y) + at(x + 1, y) + at(x, y - 1) + at(x, y + 1));
      worst = std::max(worst, std::abs(at(x, y) - avg));
    }
  }
  return worst;
}

}  // namespace gfflab
