#include "gfflab/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "gfflab/errors.hpp"
#include "gfflab/stats.hpp"

namespace gfflab {

namespace {

std::vector<MaxStats> sorted_by_level(std::span<const MaxStats> stats) {
  std::vector<MaxStats> out(stats.begin(), stats.end());
  std::sort(out.begin(), out.end(), [](const MaxStats& a, const MaxStats& b) { return a.n < b.n; });
  return out;
}

}  // namespace

FieldMax field_max(const Field& field) {
  const int n = field.box().side();
  FieldMax best{field(0, 0), {0, 0}};
  for (int x = 0; x <= n; ++x) {
    for (int y = 0; y <= n; ++y) {
      if (field(x, y) > best.value) best = {field(x, y), {x, y}};
    }
  }
  return best;
}

double nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw PreconditionError("quantile of an empty sample");
  const auto size = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * size));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

MaxStats summarize_maxima(int n, std::span<const double> maxima) {
  if (maxima.size() < 2) throw PreconditionError("need at least two maxima");
  MaxStats s;
  s.n = n;
  s.side = 1 << n;
  s.samples = maxima.size();
  const MeanVar mv = mean_var(maxima);
  s.mean_max = mv.mean;
  s.var_max = mv.variance;
  s.se_mean = std::sqrt(s.var_max / static_cast<double>(s.samples));

  std::vector<double> gaps;
  gaps.reserve(maxima.size() / 2);
  for (std::size_t i = 0; i + 1 < maxima.size(); i += 2) gaps.push_back(std::abs(maxima[i] - maxima[i + 1]));
  const MeanVar gv = mean_var(gaps);
  s.dh_gap = gv.mean;
  s.dh_se = gv.standard_error();

  std::vector<double> centered(maxima.begin(), maxima.end());
  for (double& v : centered) v -= s.mean_max;
  std::sort(centered.begin(), centered.end());
  for (std::size_t q = 0; q < kQuantileLevels.size(); ++q) {
    s.quantiles[q] = nearest_rank(centered, kQuantileLevels[q]);
  }
  return s;
}

SeedSpec level_seed(SeedSpec seed, int n) {
  return seed.offset(static_cast<std::uint64_t>(n) << 40);
}

std::vector<double> sample_maxima(int n, std::size_t samples, SeedSpec seed,
                                  const McOptions& options) {
  const BoxSpec box = BoxSpec::from_level(n);
  std::vector<double> maxima(samples, 0.0);
  BatchOptions batch{options.workers, options.sampler, options.dense_cutoff};
  batch_visit(box, samples, level_seed(seed, n), batch,
              [&](std::size_t i, const Field& f) { maxima[i] = field_max(f).value; });
  return maxima;
}

MaxStats mc_max_stats(int n, std::size_t samples, SeedSpec seed, const McOptions& options) {
  if (n < 1) throw PreconditionError("level n must be at least 1");
  if (samples < 100) throw PreconditionError("mc_max_stats needs at least 100 samples");
  const auto maxima = sample_maxima(n, samples, seed, options);
  return summarize_maxima(n, maxima);
}

PairedMaxCheck paired_max_crosscheck(std::span<const double> maxima) {
  CompensatedSum direct;
  CompensatedSum identity;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < maxima.size(); i += 2, ++pairs) {
    const double a = maxima[i];
    const double b = maxima[i + 1];
    direct += std::max(a, b);
    identity += 0.5 * (a + b + std::abs(a - b));
  }
  if (pairs == 0) throw PreconditionError("need at least one pair");
  return {direct.value() / static_cast<double>(pairs), identity.value() / static_cast<double>(pairs)};
}

std::vector<StepVerdict> monotonicity_report(std::span<const MaxStats> stats, double se_multiplier) {
  const auto sorted = sorted_by_level(stats);
  std::vector<StepVerdict> out;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const MaxStats& a = sorted[i];
    const MaxStats& b = sorted[i + 1];
    if (b.n != a.n + 1) {
      throw PreconditionError("levels " + std::to_string(a.n) + " and " + std::to_string(b.n) +
                              " are not consecutive");
    }
    StepVerdict v;
    v.n = a.n;
    v.increment = b.mean_max - a.mean_max;
    v.combined_se = std::hypot(a.se_mean, b.se_mean);
    v.monotone = v.increment >= -se_multiplier * v.combined_se;
    v.dh_bound = 0.5 * a.dh_gap;
    v.dh_combined_se = std::sqrt(a.se_mean * a.se_mean + b.se_mean * b.se_mean +
                                 0.25 * a.dh_se * a.dh_se);
    v.dekking_host = v.increment >= v.dh_bound - se_multiplier * v.dh_combined_se;
    out.push_back(v);
  }
  return out;
}

SubsequenceReport subsequence_detector(std::span<const MaxStats> stats, double threshold) {
  if (!(threshold > 0.0)) throw PreconditionError("threshold K must be positive");
  const auto sorted = sorted_by_level(stats);
  SubsequenceReport r;
  r.threshold = threshold;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i + 1].n != sorted[i].n + 1) continue;
    ++r.scanned;
    const double inc = sorted[i + 1].mean_max - sorted[i].mean_max;
    r.observed_constant = r.scanned == 1 ? inc : std::max(r.observed_constant, inc);
    if (sorted[i + 1].mean_max <= sorted[i].mean_max + threshold) r.levels.push_back(sorted[i].n);
  }
  r.density = r.scanned > 0 ? static_cast<double>(r.levels.size()) / static_cast<double>(r.scanned) : 0.0;
  if (sorted.size() >= 2) {
    const auto m = static_cast<Eigen::Index>(sorted.size());
    Eigen::MatrixXd a(m, 2);
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, 0) = sorted[static_cast<std::size_t>(i)].n;
      a(i, 1) = 1.0;
      y(i) = sorted[static_cast<std::size_t>(i)].mean_max;
    }
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);
    r.slope = coef(0);
  }
  r.violation_bound = r.slope / threshold;
  return r;
}

GrowthFit growth_fit(std::span<const MaxStats> stats) {
  const auto sorted = sorted_by_level(stats);
  if (sorted.size() < 4) throw PreconditionError("growth fit needs at least 4 levels");
  const auto m = static_cast<Eigen::Index>(sorted.size());
  Eigen::MatrixXd full(m, 3);
  Eigen::MatrixXd pinned(m, 2);
  Eigen::MatrixXd linear(m, 2);
  Eigen::VectorXd y(m);
  Eigen::VectorXd y_pinned(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const MaxStats& s = sorted[static_cast<std::size_t>(i)];
    if (s.n < 2) throw PreconditionError("growth fit needs levels n >= 2");
    const double ln_n = std::log(static_cast<double>(s.side));
    const double lnln_n = std::log(ln_n);
    full.row(i) << ln_n, -lnln_n, 1.0;
    pinned.row(i) << -lnln_n, 1.0;
    linear.row(i) << ln_n, 1.0;
    y(i) = s.mean_max;
    y_pinned(i) = s.mean_max - kGrowthConstant * ln_n;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
  if (qr.rank() < 3) throw PreconditionError("degenerate design matrix in growth fit");
  const Eigen::VectorXd coef = qr.solve(y);
  const Eigen::VectorXd pc = pinned.colPivHouseholderQr().solve(y_pinned);
  const Eigen::VectorXd lc = linear.colPivHouseholderQr().solve(y);

  GrowthFit fit;
  fit.c_hat = coef(0);
  fit.c2_hat = coef(1);
  fit.intercept = coef(2);
  fit.pinned_c2 = pc(0);
  fit.pinned_intercept = pc(1);
  fit.linear_c = lc(0);
  fit.linear_intercept = lc(1);
  const Eigen::VectorXd res = y - full * coef;
  const Eigen::VectorXd pres = y_pinned - pinned * pc;
  fit.residuals.assign(res.begin(), res.end());
  fit.pinned_residuals.assign(pres.begin(), pres.end());
  return fit;
}

TightnessReport tightness_diagnostic(std::span<const MaxStats> stats) {
  if (stats.size() < 3) throw PreconditionError("tightness diagnostic needs at least 3 levels");
  const auto sorted = sorted_by_level(stats);
  TightnessReport r;
  double lo90 = 0, hi90 = 0, lo75 = 0, hi75 = 0;
  for (const MaxStats& s : sorted) {
    TightnessRow row{s.n, s.q90() - s.q10(), s.q75() - s.q25(), s.dh_gap, s.dh_se,
                     s.var_max / s.n};
    if (r.rows.empty()) {
      lo90 = hi90 = row.spread_90_10;
      lo75 = hi75 = row.spread_75_25;
    } else {
      lo90 = std::min(lo90, row.spread_90_10);
      hi90 = std::max(hi90, row.spread_90_10);
      lo75 = std::min(lo75, row.spread_75_25);
      hi75 = std::max(hi75, row.spread_75_25);
    }
    r.rows.push_back(row);
  }
  r.ratio_90_10 = lo90 > 0 ? hi90 / lo90 : 0.0;
  r.ratio_75_25 = lo75 > 0 ? hi75 / lo75 : 0.0;
  return r;
}

}  // namespace gfflab
