#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gfflab/dirichlet.hpp"
#include "gfflab/errors.hpp"
#include "oracles.hpp"

using namespace gfflab;

namespace {

std::vector<Site> rect_sites(const Rect& r) {
  std::vector<Site> out;
  for (int x = r.x0; x <= r.x1; ++x) {
    for (int y = r.y0; y <= r.y1; ++y) out.push_back({x, y});
  }
  return out;
}

template <typename F>
std::vector<BoundaryValue> ring_data(const Rect& r, F f) {
  std::vector<BoundaryValue> out;
  for (const Site& s : region_boundary(r)) out.push_back({s, f(s.x, s.y)});
  return out;
}

const Rect kWhole4{1, 1, 3, 3};

}  // namespace

TEST_CASE("constant boundary data extends to a constant") {
  const BoxSpec box = BoxSpec::from_side(16);
  const Rect r{2, 3, 11, 9};
  const auto h = harmonic_extension(box, r, ring_data(r, [](int, int) { return -2.75; }));
  for (double v : h.values) CHECK(std::abs(v + 2.75) <= 1e-12);
}

TEST_CASE("coordinate function is reproduced") {
  const BoxSpec box = BoxSpec::from_side(32);
  const Rect r{1, 1, 31, 31};
  const auto h = harmonic_extension(box, r, ring_data(r, [](int x, int) { return double(x); }));
  for (const Site& s : rect_sites(r)) CHECK(std::abs(h.at(s) - s.x) <= 1e-10);
}

TEST_CASE("hitting probabilities of one boundary site on V_4") {
  const BoxSpec box = BoxSpec::from_side(4);
  const auto indicator = [](int x, int y) { return x == 2 && y == 0 ? 1.0 : 0.0; };
  const auto sites = rect_sites(kWhole4);
  const auto h = harmonic_extension(box, sites, ring_data(kWhole4, indicator));
  const auto ref = oracle::dirichlet(4, indicator);
  for (const Site& s : sites) {
    CAPTURE(s.x);
    CAPTURE(s.y);
    CHECK(std::abs(h.at(s) - ref[oracle::idx(4, s.x, s.y)]) <= 1e-12);
  }
  // The reflection x -> 4 - x fixes the data.
  CHECK(std::abs(h.at({1, 1}) - h.at({3, 1})) <= 1e-14);
}

TEST_CASE("extension matches the direct solve and the mean-value property") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const int side = 16;
  const BoxSpec box = BoxSpec::from_side(side);
  const Rect whole{1, 1, side - 1, side - 1};
  std::vector<double> ring_values(box.site_count(), 0.0);
  for (const Site& s : region_boundary(whole)) ring_values[box.site_index(s)] = normal(rng);
  const auto lookup = [&](int x, int y) { return ring_values[box.site_index({x, y})]; };
  const auto h = harmonic_extension(box, whole, ring_data(whole, lookup));
  const auto ref = oracle::dirichlet(side, lookup);
  std::vector<double> full = ring_values;
  for (const Site& s : rect_sites(whole)) {
    CHECK(std::abs(h.at(s) - ref[oracle::idx(side, s.x, s.y)]) <= 1e-10);
    full[box.site_index(s)] = h.at(s);
  }
  CHECK(mean_value_residual(full, side + 1, whole) <= 1e-10);
}

TEST_CASE("mean-value residual on random sub-rectangles") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const int side = 64;
  const BoxSpec box = BoxSpec::from_side(side);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> pick(1, side - 1);
    int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng);
    const Rect r{std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d)};
    std::vector<double> full(box.site_count(), 0.0);
    auto data = ring_data(r, [&](int, int) { return normal(rng); });
    for (const auto& bv : data) full[box.site_index(bv.site)] = bv.value;
    const auto h = harmonic_extension(box, r, data);
    for (const Site& s : rect_sites(r)) full[box.site_index(s)] = h.at(s);
    CHECK(mean_value_residual(full, side + 1, r) <= 1e-10);
  }
}

TEST_CASE("extension is linear in the boundary data") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  const BoxSpec box = BoxSpec::from_side(32);
  const Rect r{4, 2, 27, 30};
  for (int trial = 0; trial < 10; ++trial) {
    const double alpha = normal(rng), beta = normal(rng);
    auto f = ring_data(r, [&](int, int) { return normal(rng); });
    auto g = ring_data(r, [&](int, int) { return normal(rng); });
    std::vector<BoundaryValue> combo = f;
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i].value = alpha * f[i].value + beta * g[i].value;
    const auto hf = harmonic_extension(box, r, f);
    const auto hg = harmonic_extension(box, r, g);
    const auto hc = harmonic_extension(box, r, combo);
    for (std::size_t i = 0; i < hc.values.size(); ++i) {
      CHECK(std::abs(hc.values[i] - (alpha * hf.values[i] + beta * hg.values[i])) <= 1e-10);
    }
  }
}

TEST_CASE("boundary data errors") {
  const BoxSpec box = BoxSpec::from_side(4);
  auto data = ring_data(kWhole4, [](int, int) { return 1.0; });
  auto missing = data;
  missing.pop_back();
  CHECK_THROWS_AS(harmonic_extension(box, kWhole4, missing), BoundaryDataError);
  auto twice = data;
  twice.push_back(data.front());
  CHECK_THROWS_AS(harmonic_extension(box, kWhole4, twice), BoundaryDataError);
  auto stray = data;
  stray.push_back({{2, 2}, 0.0});
  CHECK_THROWS_AS(harmonic_extension(box, kWhole4, stray), BoundaryDataError);
}

TEST_CASE("region shape errors") {
  const BoxSpec box = BoxSpec::from_side(8);
  const std::vector<Site> l_shape{{1, 1}, {1, 2}, {2, 1}};
  CHECK_THROWS_AS(harmonic_extension(box, l_shape, {}), RegionShapeError);
  const std::vector<Site> on_boundary{{0, 1}};
  CHECK_THROWS_AS(harmonic_extension(box, on_boundary, {}), RegionShapeError);
  CHECK_THROWS_AS(harmonic_extension(box, std::vector<Site>{}, {}), RegionShapeError);
  const std::vector<Site> duplicated{{1, 1}, {1, 1}};
  CHECK_THROWS_AS(harmonic_extension(box, duplicated, {}), RegionShapeError);
}
