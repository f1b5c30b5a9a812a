#include "gfflab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gfflab/errors.hpp"

namespace gfflab {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

std::string render_extremes_report(std::span<const MaxStats> input, const ReportTolerances& tol) {
  std::vector<MaxStats> stats(input.begin(), input.end());
  std::sort(stats.begin(), stats.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  std::ostringstream out;

  out << "== levels\n";
  out << "   n       N  samples    mean_max   se_mean     var_max    dh_gap     dh_se\n";
  for (const auto& s : stats) {
    out << fmt("%4d %7d %8zu %11.5f %9.5f %11.5f %9.5f %9.5f\n", s.n, s.side, s.samples, s.mean_max,
               s.se_mean, s.var_max, s.dh_gap, s.dh_se);
  }

  for (const auto& s : stats) {
    if (s.n != 1) continue;
    const double ez = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    const double gap = 1.0 / std::sqrt(std::numbers::pi);
    out << "== closed form n=1\n";
    out << fmt("EZ_1    %.5f vs 1/sqrt(2 pi) = %.5f  |dev|/se = %.2f  %s\n", s.mean_max, ez,
               std::abs(s.mean_max - ez) / s.se_mean,
               verdict(std::abs(s.mean_max - ez) <= tol.point_se * s.se_mean));
    out << fmt("dh_gap  %.5f vs 1/sqrt(pi)   = %.5f  |dev|/se = %.2f  %s\n", s.dh_gap, gap,
               std::abs(s.dh_gap - gap) / s.dh_se,
               verdict(std::abs(s.dh_gap - gap) <= tol.point_se * s.dh_se));
    out << fmt("IQR     %.5f (rectified normal: 0.67449)\n", s.q75() - s.q25());
  }

  out << "== monotonicity and Dekking-Host bound (slack " << tol.inequality_se << " SE)\n";
  try {
    const auto steps = monotonicity_report(stats, tol.inequality_se);
    out << "   n   increment  comb_se  monotone  dh_gap/2  dekking_host\n";
    for (const auto& v : steps) {
      out << fmt("%4d %11.5f %8.5f  %s      %8.5f  %s\n", v.n, v.increment, v.combined_se,
                 verdict(v.monotone), v.dh_bound, verdict(v.dekking_host));
    }
  } catch (const PreconditionError& e) {
    out << "skipped: " << e.what() << '\n';
  }

  out << "== tightness\n";
  try {
    const auto t = tightness_diagnostic(stats);
    out << "   n  q90-q10  q75-q25   dh_gap   var/n\n";
    for (const auto& r : t.rows) {
      out << fmt("%4d %8.5f %8.5f %8.5f %7.4f\n", r.n, r.spread_90_10, r.spread_75_25, r.dh_gap,
                 r.var_over_n);
    }
    out << fmt("spread ratio max/min: q90-q10 %.4f, q75-q25 %.4f\n", t.ratio_90_10, t.ratio_75_25);
  } catch (const PreconditionError& e) {
    out << "skipped: " << e.what() << '\n';
  }

  out << "== subsequence detector (K = " << tol.detector_threshold << ")\n";
  try {
    const auto d = subsequence_detector(stats, tol.detector_threshold);
    out << "levels:";
    for (int n : d.levels) out << ' ' << n;
    out << fmt("\ndensity %zu/%zu = %.3f, slope %.5f, bound slope/K %.4f, observed C %.5f\n",
               d.levels.size(), d.scanned, d.density, d.slope, d.violation_bound,
               d.observed_constant);
  } catch (const PreconditionError& e) {
    out << "skipped: " << e.what() << '\n';
  }

  out << "== growth fit\n";
  std::vector<MaxStats> fit_levels;
  std::copy_if(stats.begin(), stats.end(), std::back_inserter(fit_levels),
               [](const auto& s) { return s.n >= 2; });
  try {
    const auto f = growth_fit(fit_levels);
    out << fmt("three-term: c %.5f, c2 %.5f, intercept %.5f\n", f.c_hat, f.c2_hat, f.intercept);
    out << fmt("c pinned at %.5f: c2 %.5f, intercept %.5f\n", kGrowthConstant, f.pinned_c2,
               f.pinned_intercept);
    out << fmt("slope on ln N: %.5f\n", f.linear_c);
  } catch (const PreconditionError& e) {
    out << "skipped: " << e.what() << '\n';
  }
  std::vector<MaxStats> large;
  std::copy_if(stats.begin(), stats.end(), std::back_inserter(large),
               [](const auto& s) { return s.n >= 6; });
  if (large.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : large) {
      const double x = std::log(static_cast<double>(s.side));
      sx += x;
      sy += s.mean_max;
      sxx += x * x;
      sxy += x * s.mean_max;
    }
    const double m = static_cast<double>(large.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out << fmt("slope on ln N over N >= 64: %.5f (target %.5f)\n", slope, kGrowthConstant);
  }
  return out.str();
}

std::string render_brw_report(const std::vector<BrwGeneration>& rows) {
  std::ostringstream out;
  out << "== branching random walk\n";
  out << " gen       mean     median      q10      q90   dh_gap  q90-q10\n";
  for (const auto& r : rows) {
    out << fmt("%4d %10.5f %10.5f %8.4f %8.4f %8.5f %8.5f\n", r.generation, r.mean, r.median,
               r.q10, r.q90, r.dh_gap, r.q90 - r.q10);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double slack = rows[i + 1].mean - rows[i].mean - 0.5 * rows[i].dh_gap;
    worst = i == 0 ? slack : std::min(worst, slack);
  }
  if (rows.size() >= 2) {
    out << fmt("Dekking-Host slack min over steps: %.3e  %s\n", worst, verdict(worst >= -1e-6));
  }
  return out.str();
}

}  // namespace gfflab
