#include "gfflab/box.hpp"

#include <string>

#include "gfflab/errors.hpp"

namespace gfflab {

BoxSpec BoxSpec::from_level(int level) {
  if (level < 0 || level > 24) {
    throw PreconditionError("box level must lie in [0, 24], got " + std::to_string(level));
  }
  return BoxSpec(level, 1 << level);
}

BoxSpec BoxSpec::from_side(int side) {
  if (side < 1 || (side & (side - 1)) != 0) {
    throw PreconditionError("box side must be a power of two, got " + std::to_string(side));
  }
  int level = 0;
  while ((1 << level) < side) ++level;
  return BoxSpec(level, side);
}

Field::Field(BoxSpec box) : box_(box), values_(box.site_count(), 0.0) {}

Field::Field(BoxSpec box, std::vector<double> values) : box_(box), values_(std::move(values)) {
  if (values_.size() != box_.site_count()) {
    throw PreconditionError("field value array does not cover (N+1)^2 sites");
  }
}

std::vector<double> Field::interior() const {
  std::vector<double> out;
  out.reserve(box_.interior_count());
  const int n = box_.side();
  for (int x = 1; x < n; ++x) {
    for (int y = 1; y < n; ++y) out.push_back((*this)(x, y));
  }
  return out;
}

void Field::set_interior(std::span<const double> interior) {
  if (interior.size() != box_.interior_count()) {
    throw PreconditionError("interior vector has wrong length");
  }
  const int n = box_.side();
  std::size_t i = 0;
  for (int x = 1; x < n; ++x) {
    for (int y = 1; y < n; ++y) (*this)(x, y) = interior[i++];
  }
}

Field Field::from_interior(BoxSpec box, std::span<const double> interior) {
  Field f(box);
  f.set_interior(interior);
  return f;
}

}  // namespace gfflab
