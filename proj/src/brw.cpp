#include "gfflab/brw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gfflab/errors.hpp"
#include "gfflab/parallel.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

namespace {

constexpr double kKernelWidth = 8.0;      // in units of sigma
constexpr double kLeftTrim = 1e-18;
constexpr double kCoverageTol = 1e-9;

}  // namespace

CdfGrid::CdfGrid(double origin, double step, std::vector<double> values)
    : origin_(origin), step_(step), values_(std::move(values)) {
  if (!(step_ > 0.0)) throw PreconditionError("grid step must be positive");
  if (values_.size() < 2) throw PreconditionError("grid needs at least two nodes");
}

CdfGrid CdfGrid::point_mass(double at, double step) {
  return CdfGrid(at - step, step, {0.0, 0.5, 1.0});
}

double CdfGrid::operator()(double x) const {
  const double t = (x - origin_) / step_;
  if (t <= 0.0) return t < 0.0 ? 0.0 : values_.front();
  const auto last = static_cast<double>(values_.size() - 1);
  if (t >= last) return t > last ? 1.0 : values_.back();
  const auto i = static_cast<std::size_t>(t);
  const double frac = t - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double CdfGrid::mean() const {
  CompensatedSum tail;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    tail += 1.0 - 0.5 * (values_[i] + values_[i + 1]);
  }
  return origin_ + step_ * tail.value();
}

double CdfGrid::quantile(double p) const {
  if (p <= values_.front()) return origin_;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] >= p) {
      const double lo = values_[i - 1];
      const double hi = values_[i];
      const double frac = hi > lo ? (p - lo) / (hi - lo) : 1.0;
      return x(i - 1) + frac * step_;
    }
  }
  return back_x();
}

double CdfGrid::pair_gap() const {
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    const double a = values_[i] * (1.0 - values_[i]);
    const double b = values_[i + 1] * (1.0 - values_[i + 1]);
    s += 0.5 * (a + b);
  }
  return 2.0 * step_ * s.value();
}

double CdfGrid::pair_max_direct() const {
  // Masses: F_0 at x_0, F_i - F_{i-1} at the cell midpoints, 1 - F_last at x_last.
  // Sum over ordered pairs of max(c_i, c_j) p_i p_j = sum_i c_i p_i (2 C_{i-1} + p_i).
  CompensatedSum s;
  double below = 0.0;
  const auto add_mass = [&](double c, double p) {
    s += c * p * (2.0 * below + p);
    below += p;
  };
  add_mass(origin_, values_.front());
  for (std::size_t i = 1; i < values_.size(); ++i) {
    add_mass(origin_ + step_ * (static_cast<double>(i) - 0.5), values_[i] - values_[i - 1]);
  }
  add_mass(back_x(), 1.0 - values_.back());
  return s.value();
}

void CdfGrid::validate() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) throw GridCoverageError("CDF value outside [0, 1]");
    if (i > 0 && v < values_[i - 1]) throw GridCoverageError("CDF not monotone");
  }
  if (values_.front() > kCoverageTol || values_.back() < 1.0 - kCoverageTol) {
    throw GridCoverageError("grid does not bracket the support");
  }
}

double BrwSpec::sigma(int generation) const {
  const auto g = static_cast<std::size_t>(std::max(generation, 1));
  return g <= stddev.size() ? stddev[g - 1] : stddev.back();
}

double BrwSpec::max_sigma() const { return *std::max_element(stddev.begin(), stddev.end()); }

void BrwSpec::validate() const {
  if (branching < 1) throw PreconditionError("branching factor must be at least 1");
  if (stddev.empty()) throw PreconditionError("increment scale list is empty");
  for (double s : stddev) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw PreconditionError("increment scale must be >= 0");
  }
  if (depth < 0) throw PreconditionError("depth must be nonnegative");
}

CdfGrid brw_cdf_step(const CdfGrid& cdf, const BrwSpec& spec, int generation) {
  spec.validate();
  const double sigma = spec.sigma(generation);
  const double h = cdf.step();
  const auto& in = cdf.values();
  const std::size_t size = in.size();

  std::vector<double> weights{1.0};
  if (sigma > 0.0) {
    const auto half = static_cast<std::size_t>(std::ceil(kKernelWidth * sigma / h));
    weights.assign(2 * half + 1, 0.0);
    CompensatedSum total;
    for (std::size_t t = 0; t < weights.size(); ++t) {
      const double s = (static_cast<double>(t) - static_cast<double>(half)) * h / sigma;
      weights[t] = std::exp(-0.5 * s * s);
      total += weights[t];
    }
    const double norm = total.value();
    for (double& w : weights) w /= norm;
  }
  const std::size_t half = weights.size() / 2;
  const std::size_t wide = size + 2 * half;

  // Weight mass with kernel offset > t, for the part of the kernel that reads F = 0.
  std::vector<double> suffix(weights.size() + 1, 0.0);
  {
    CompensatedSum run;
    for (std::size_t t = weights.size(); t-- > 0;) {
      run += weights[t];
      suffix[t] = run.value();
    }
  }

  // out[i] at x = origin - half*h + i*h reads in[i - t] for kernel offset t.
  // Where the smoothed value is above 1/2 it is formed as 1 - sum w (1 - F):
  // the right tail 1 - F is multiplied by b every step, so a rounding deficit
  // in the kernel mass must not leak into the saturated region.
  std::vector<double> out(wide);
  for (std::size_t i = 0; i < wide; ++i) {
    const std::size_t t_lo = i >= size ? i - size + 1 : 0;
    const std::size_t t_hi = std::min(i, weights.size() - 1);
    const double from_right = t_lo > 0 ? 1.0 - suffix[t_lo] : 0.0;
    const double from_left = suffix[t_hi + 1];
    double direct = 0.0;
    double complement = 0.0;
    for (std::size_t t = t_lo; t <= t_hi; ++t) {
      direct += weights[t] * in[i - t];
      complement += weights[t] * (1.0 - in[i - t]);
    }
    direct += from_right;
    complement += from_left;
    const double smoothed = direct < 0.5 ? direct : 1.0 - complement;
    double g = std::pow(std::clamp(smoothed, 0.0, 1.0), spec.branching);
    if (i > 0) g = std::max(g, out[i - 1]);
    out[i] = g;
  }

  std::size_t first = 0;
  while (first + 1 < wide && out[first + 1] <= kLeftTrim) ++first;
  std::size_t last = wide - 1;
  while (last > first + 1 && out[last - 1] >= 1.0) --last;
  std::vector<double> trimmed(out.begin() + static_cast<std::ptrdiff_t>(first),
                              out.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  CdfGrid result(cdf.origin() - static_cast<double>(half) * h + static_cast<double>(first) * h, h,
                 std::move(trimmed));
  result.validate();
  return result;
}

BrwRun brw_run(const BrwSpec& spec, double step) {
  spec.validate();
  if (step <= 0.0) {
    const double s = spec.max_sigma();
    step = 1e-3 * (s > 0.0 ? s : 1.0);
  }
  BrwRun run;
  run.cdfs.push_back(CdfGrid::point_mass(0.0, step));
  run.summary.push_back({0, 0.0, 0.0, 0.0, 0.0, 0.0});
  run.worst_dh_slack = std::numeric_limits<double>::infinity();
  for (int g = 1; g <= spec.depth; ++g) {
    run.cdfs.push_back(brw_cdf_step(run.cdfs.back(), spec, g));
    const CdfGrid& f = run.cdfs.back();
    const BrwGeneration row{g, f.mean(), f.quantile(0.5), f.quantile(0.1), f.quantile(0.9),
                            f.pair_gap()};
    const BrwGeneration& prev = run.summary.back();
    run.worst_dh_slack = std::min(run.worst_dh_slack, row.mean - prev.mean - 0.5 * prev.dh_gap);
    run.summary.push_back(row);
  }
  if (spec.depth == 0) run.worst_dh_slack = 0.0;
  return run;
}

namespace {

double subtree_max(const BrwSpec& spec, int height, NormalStream& rng) {
  const double sigma = spec.sigma(height);
  double best = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < spec.branching; ++c) {
    const double step = sigma > 0.0 ? sigma * rng.next() : 0.0;
    const double below = height > 1 ? subtree_max(spec, height - 1, rng) : 0.0;
    best = std::max(best, step + below);
  }
  return best;
}

}  // namespace

BrwSimStats brw_simulate(const BrwSpec& spec, std::size_t samples, SeedSpec seed, int workers,
                         double node_budget) {
  spec.validate();
  if (samples < 2) throw PreconditionError("simulation needs at least two samples");
  const double nodes = static_cast<double>(samples) * std::pow(spec.branching, spec.depth);
  if (nodes > node_budget) {
    throw BudgetError("simulation would visit " + std::to_string(nodes) +
                      " leaves, above the budget " + std::to_string(node_budget));
  }
  std::vector<double> maxima(samples, 0.0);
  parallel_chunks(samples, workers, [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      if (spec.depth == 0) continue;
      NormalStream rng(seed.offset(i));
      maxima[i] = subtree_max(spec, spec.depth, rng);
    }
  });
  BrwSimStats out;
  out.depth = spec.depth;
  out.samples = samples;
  const MeanVar mv = mean_var(maxima);
  out.mean = mv.mean;
  out.variance = mv.variance;
  out.se_mean = mv.standard_error();
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < samples; i += 2) gaps.push_back(std::abs(maxima[i] - maxima[i + 1]));
  const MeanVar gv = mean_var(gaps);
  out.dh_gap = gv.mean;
  out.dh_se = gv.standard_error();
  return out;
}

}  // namespace gfflab
