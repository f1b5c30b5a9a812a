#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gfflab/brw.hpp"
#include "gfflab/errors.hpp"
#include "oracles.hpp"

using namespace gfflab;

namespace {

// Phi(x) = 2^(-1/4) solved by bisection.
double depth_one_median() {
  double lo = 0.0;
  double hi = 3.0;
  const double target = std::pow(2.0, -0.25);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (oracle::normal_cdf(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("point mass and basic grid functionals") {
  const CdfGrid p = CdfGrid::point_mass(0.0, 0.01);
  CHECK(p.mean() == doctest::Approx(0.0).epsilon(1e-12));
  // The half-weight node leaves an O(step) trapezoid artifact.
  CHECK(p.pair_gap() <= p.step());
  CHECK_NOTHROW(p.validate());

  const CdfGrid ramp(0.0, 0.5, {0.0, 0.5, 1.0});
  CHECK(ramp(0.25) == doctest::Approx(0.25));
  CHECK(ramp(-1.0) == 0.0);
  CHECK(ramp(2.0) == 1.0);
  CHECK(ramp.quantile(0.5) == doctest::Approx(0.5));
  CHECK(ramp.mean() == doctest::Approx(0.5));

  CHECK_THROWS_AS(CdfGrid(0.0, 0.1, {0.0, 0.6, 0.4, 1.0}).validate(), GridCoverageError);
  CHECK_THROWS_AS(CdfGrid(0.0, 0.1, {0.0, 0.5, 0.9}).validate(), GridCoverageError);
  CHECK_THROWS_AS(CdfGrid(0.0, 0.1, {0.1, 0.5, 1.0}).validate(), GridCoverageError);
}

TEST_CASE("depth one is the maximum of four normals") {
  BrwSpec spec;
  spec.depth = 1;
  const BrwRun run = brw_run(spec);
  REQUIRE(run.cdfs.size() == 2);
  const CdfGrid& f = run.cdfs[1];
  const double expected = oracle::expected_max_of_normals(4);
  CHECK(expected == doctest::Approx(1.0294).epsilon(1e-4));
  CHECK(std::abs(f.mean() - expected) <= 1e-3);
  CHECK(std::abs(run.summary[1].mean - expected) <= 1e-3);
  CHECK(std::abs(run.summary[1].median - depth_one_median()) <= 1e-3);
  CHECK(depth_one_median() == doctest::Approx(0.9982).epsilon(1e-4));

  for (double x : {-1.0, 0.0, 0.7, 1.5, 2.5}) {
    CHECK(std::abs(f(x) - std::pow(oracle::normal_cdf(x), 4)) <= 1e-6);
  }
  // dh_gap is 2 * integral of F (1 - F) with F = Phi^4.
  const double gap = 2.0 * oracle::simpson(
                               [](double x) {
                                 const double v = std::pow(oracle::normal_cdf(x), 4);
                                 return v * (1.0 - v);
                               },
                               -10.0, 10.0, 20000);
  CHECK(std::abs(run.summary[1].dh_gap - gap) <= 1e-5);
}

TEST_CASE("single child is a plain convolution") {
  BrwSpec spec;
  spec.branching = 1;
  spec.stddev = {0.8};
  CdfGrid f = CdfGrid::point_mass(0.0, 1e-3);
  for (int g = 1; g <= 3; ++g) f = brw_cdf_step(f, spec, g);
  CHECK(std::abs(f.mean()) <= 1e-6);
  // Var = integral of 2x (1 - F(x) + F(-x)) over x > 0.
  const double var = oracle::simpson(
      [&f](double x) { return 2.0 * x * (1.0 - f(x) + f(-x)); }, 0.0, 12.0, 12000);
  CHECK(std::abs(var - 3 * 0.64) <= 1e-5);
}

TEST_CASE("depth zero is degenerate") {
  BrwSpec spec;
  spec.depth = 0;
  const BrwRun run = brw_run(spec);
  REQUIRE(run.summary.size() == 1);
  CHECK(run.summary[0].mean == 0.0);
  CHECK(run.summary[0].dh_gap == 0.0);
  CHECK(run.summary[0].q90 == 0.0);
}

TEST_CASE("recursion invariants through depth 20") {
  BrwSpec spec;
  spec.depth = 20;
  const BrwRun run = brw_run(spec);
  REQUIRE(run.cdfs.size() == 21);
  for (const CdfGrid& f : run.cdfs) {
    CHECK_NOTHROW(f.validate());
    CHECK(std::abs(f.pair_max_direct() - f.pair_max_via_identity()) <= 1e-6);
  }
  CHECK(run.dekking_host_holds(1e-6));
  for (std::size_t g = 1; g < run.summary.size(); ++g) {
    const auto& a = run.summary[g - 1];
    const auto& b = run.summary[g];
    CHECK(b.mean - a.mean >= 0.5 * a.dh_gap - 1e-6);
    CHECK(b.q10 <= b.median);
    CHECK(b.median <= b.q90);
  }

  // Halving the step moves the means by at most 1e-5.
  const BrwRun fine = brw_run(spec, 0.5e-3);
  for (std::size_t g = 0; g < run.summary.size(); ++g) {
    CAPTURE(g);
    CHECK(std::abs(fine.summary[g].mean - run.summary[g].mean) <= 1e-5);
  }
}

TEST_CASE("time-dependent increments") {
  BrwSpec spec;
  spec.stddev = {0.5, 2.0};
  CHECK(spec.sigma(1) == 0.5);
  CHECK(spec.sigma(2) == 2.0);
  CHECK(spec.sigma(7) == 2.0);
  spec.depth = 1;
  CHECK(std::abs(brw_run(spec).summary[1].mean - 0.5 * oracle::expected_max_of_normals(4)) <= 1e-3);

  spec.depth = 3;
  const BrwRun run = brw_run(spec);
  const BrwSimStats sim = brw_simulate(spec, 20000, {31, 0});
  CHECK(std::abs(sim.mean - run.summary[3].mean) <= 3 * sim.se_mean + 1e-3);
}

TEST_CASE("simulation against the recursion") {
  BrwSpec spec;
  spec.depth = 1;
  const BrwSimStats one = brw_simulate(spec, 100000, {5, 0});
  CHECK(std::abs(one.mean - 1.0294) <= 3 * one.se_mean);
  CHECK(std::abs(one.dh_gap - brw_run(spec).summary[1].dh_gap) <= 3 * one.dh_se + 1e-3);

  spec.depth = 6;
  const BrwRun run = brw_run(spec);
  const BrwSimStats six = brw_simulate(spec, 10000, {6, 0}, 2);
  CHECK(std::abs(six.mean - run.summary[6].mean) <= 3 * six.se_mean + 1e-3);
  CHECK(std::abs(six.dh_gap - run.summary[6].dh_gap) <= 3 * six.dh_se + 1e-3);
}

TEST_CASE("simulation details") {
  BrwSpec spec;
  spec.depth = 4;
  spec.stddev = {0.0};
  const BrwSimStats zero = brw_simulate(spec, 200, {1, 0});
  CHECK(zero.mean == 0.0);
  CHECK(zero.variance == 0.0);

  spec.stddev = {1.0};
  const auto a = brw_simulate(spec, 500, {2, 0}, 1);
  const auto b = brw_simulate(spec, 500, {2, 0}, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.dh_gap == b.dh_gap);

  spec.depth = 20;
  CHECK_THROWS_AS(brw_simulate(spec, 1000, {1, 0}), BudgetError);
  spec.depth = 3;
  CHECK_THROWS_AS(brw_simulate(spec, 10, {1, 0}, 1, 100.0), BudgetError);

  spec.branching = 0;
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
  spec.branching = 4;
  spec.stddev = {-1.0};
  CHECK_THROWS_AS(spec.validate(), PreconditionError);
}
