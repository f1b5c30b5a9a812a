#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <boost/random/normal_distribution.hpp>

namespace gfflab {

/// (master seed, stream index) pair. Identical pairs reproduce identical
/// draws; distinct stream indices give independent streams.
struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  SeedSpec with_stream(std::uint64_t s) const { return {master, s}; }
  SeedSpec offset(std::uint64_t by) const { return {master, stream + by}; }
};

/// Standard normal draws for one stream. The engine is a 64-bit Mersenne
/// twister keyed by a seed sequence over both halves of (master, stream);
/// normals come from the Boost ziggurat, whose output is fixed by the
/// engine and does not depend on the standard library build.
class NormalStream {
 public:
  explicit NormalStream(SeedSpec seed);

  double next() { return normal_(engine_); }
  void fill(std::span<double> out) {
    for (double& v : out) v = normal_(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace gfflab
