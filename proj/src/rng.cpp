#include "gfflab/rng.hpp"

namespace gfflab {

namespace {
std::mt19937_64 make_engine(SeedSpec seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed.master),
                    static_cast<std::uint32_t>(seed.master >> 32),
                    static_cast<std::uint32_t>(seed.stream),
                    static_cast<std::uint32_t>(seed.stream >> 32)};
  return std::mt19937_64(seq);
}
}  // namespace

NormalStream::NormalStream(SeedSpec seed) : engine_(make_engine(seed)) {}

}  // namespace gfflab
