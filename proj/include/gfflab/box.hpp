#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gfflab {

/// Lattice site (x, y) of V_N = {0..N}^2.
struct Site {
  int x = 0;
  int y = 0;

  friend bool operator==(const Site&, const Site&) = default;
  friend auto operator<=>(const Site&, const Site&) = default;
};

/// Dyadic box V_N with N = 2^level.
///
/// Sites are stored x-major: index(x, y) = x * (N + 1) + y, which is also the
/// lexicographic order on (x, y). Interior sites (1..N-1)^2 get their own
/// dense index (x - 1) * (N - 1) + (y - 1) used by all matrices.
class BoxSpec {
 public:
  static BoxSpec from_level(int level);
  /// Throws PreconditionError unless side is a power of two.
  static BoxSpec from_side(int side);

  int level() const { return level_; }
  int side() const { return side_; }
  int interior_side() const { return side_ - 1; }
  std::size_t site_count() const {
    return static_cast<std::size_t>(side_ + 1) * static_cast<std::size_t>(side_ + 1);
  }
  std::size_t interior_count() const {
    return static_cast<std::size_t>(side_ - 1) * static_cast<std::size_t>(side_ - 1);
  }

  bool contains(Site s) const { return s.x >= 0 && s.y >= 0 && s.x <= side_ && s.y <= side_; }
  bool is_boundary(Site s) const {
    return s.x == 0 || s.y == 0 || s.x == side_ || s.y == side_;
  }
  bool is_interior(Site s) const { return contains(s) && !is_boundary(s); }

  std::size_t site_index(Site s) const {
    return static_cast<std::size_t>(s.x) * static_cast<std::size_t>(side_ + 1) +
           static_cast<std::size_t>(s.y);
  }
  std::size_t interior_index(Site s) const {
    return static_cast<std::size_t>(s.x - 1) * static_cast<std::size_t>(side_ - 1) +
           static_cast<std::size_t>(s.y - 1);
  }
  Site interior_site(std::size_t index) const {
    const auto m = static_cast<std::size_t>(side_ - 1);
    return {static_cast<int>(index / m) + 1, static_cast<int>(index % m) + 1};
  }

  friend bool operator==(const BoxSpec&, const BoxSpec&) = default;

 private:
  BoxSpec(int level, int side) : level_(level), side_(side) {}
  int level_;
  int side_;
};

/// One realization (or any site function) on V_N; boundary values are zero
/// for every field produced by the samplers.
class Field {
 public:
  explicit Field(BoxSpec box);
  Field(BoxSpec box, std::vector<double> values);

  const BoxSpec& box() const { return box_; }

  double operator()(int x, int y) const { return values_[box_.site_index({x, y})]; }
  double& operator()(int x, int y) { return values_[box_.site_index({x, y})]; }
  double operator[](Site s) const { return values_[box_.site_index(s)]; }
  double& operator[](Site s) { return values_[box_.site_index(s)]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  /// Interior values in interior-index order.
  std::vector<double> interior() const;
  void set_interior(std::span<const double> interior);

  static Field from_interior(BoxSpec box, std::span<const double> interior);

 private:
  BoxSpec box_;
  std::vector<double> values_;
};

}  // namespace gfflab
