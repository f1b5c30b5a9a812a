#include "gfflab/hierarchy.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "gfflab/dirichlet.hpp"
#include "gfflab/errors.hpp"

namespace gfflab {

namespace {

void require_level(const BoxSpec& box, int k, int lowest) {
  if (k < lowest || k > box.level()) {
    throw PreconditionError("level k=" + std::to_string(k) + " outside [" + std::to_string(lowest) +
                            ", " + std::to_string(box.level()) + "]");
  }
}

bool on_lines(const BoxSpec& box, Site s, int k) {
  const int m = box.side() >> k;
  return s.x % m == 0 || s.y % m == 0;
}

Field subtract(const Field& a, const Field& b) {
  Field out(a.box());
  auto o = out.values();
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = av[i] - bv[i];
  return out;
}

}  // namespace

DyadicSet dyadic_set(const BoxSpec& box, int k) {
  require_level(box, k, 1);
  DyadicSet out{box, k, {}};
  const int step = box.side() >> k;
  for (int m = step; m <= box.side(); m += 2 * step) out.members.push_back(m);
  return out;
}

Conditioned condition_on_level(const Field& field, int k) {
  const BoxSpec& box = field.box();
  require_level(box, k, 0);
  Field mean = field;
  const int n = box.side();
  const int m = n >> k;
  if (k == 0) {
    std::fill(mean.values().begin(), mean.values().end(), 0.0);
  } else if (m >= 2) {
    // Every sub-box ring lies on conditioning lines or the outer boundary, so
    // filling interiors in place never reads a value written by another box.
    RectDirichletSolver solver(m - 1, m - 1);
    const int boxes = 1 << k;
    for (int a = 0; a < boxes; ++a) {
      for (int b = 0; b < boxes; ++b) {
        const Rect r{a * m + 1, b * m + 1, a * m + m - 1, b * m + m - 1};
        solver.fill(mean.values(), n + 1, r);
      }
    }
  }
  Field residual = subtract(field, mean);
  return {std::move(mean), std::move(residual)};
}

std::vector<Field> split_subboxes(const Field& residual, int k) {
  const BoxSpec& box = residual.box();
  require_level(box, k, 0);
  const int m = box.side() >> k;
  const BoxSpec sub = BoxSpec::from_side(m);
  const int boxes = 1 << k;
  std::vector<Field> out;
  out.reserve(static_cast<std::size_t>(boxes) * boxes);
  for (int a = 0; a < boxes; ++a) {
    for (int b = 0; b < boxes; ++b) {
      Field f(sub);
      for (int x = 1; x < m; ++x) {
        for (int y = 1; y < m; ++y) f(x, y) = residual(a * m + x, b * m + y);
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::array<Field, 4> residual_subfields(const Field& field) {
  require_level(field.box(), 1, 1);
  auto parts = split_subboxes(condition_on_level(field, 1).residual, 1);
  return {std::move(parts[0]), std::move(parts[1]), std::move(parts[2]), std::move(parts[3])};
}

Field Decomposition::sum() const {
  Field out(box);
  auto o = out.values();
  for (const Field& level : levels) {
    auto v = level.values();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] += v[i];
  }
  return out;
}

Decomposition decompose(const Field& field) {
  const BoxSpec& box = field.box();
  require_level(box, 1, 1);
  Decomposition out{box, {}, {}};
  Field previous(box);
  for (int k = 1; k <= box.level(); ++k) {
    Conditioned c = condition_on_level(field, k);
    out.levels.push_back(subtract(c.mean, previous));
    out.residuals.push_back(std::move(c.residual));
    previous = std::move(c.mean);
  }
  return out;
}

Eigen::MatrixXd exact_conditional_covariance(const BoxSpec& box, int k, int max_side) {
  require_level(box, k, 1);
  const GreenOperator g = green_dense(box, max_side);
  const Eigen::MatrixXd& gm = g.matrix();
  const auto count = box.interior_count();
  std::vector<std::size_t> lines;
  for (std::size_t i = 0; i < count; ++i) {
    if (on_lines(box, box.interior_site(i), k)) lines.push_back(i);
  }
  const auto rows = static_cast<Eigen::Index>(count);
  const auto cols = static_cast<Eigen::Index>(lines.size());
  Eigen::MatrixXd h(rows, cols);
  Field unit(box);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const Site s = box.interior_site(lines[static_cast<std::size_t>(c)]);
    unit[s] = 1.0;
    const std::vector<double> ext = condition_on_level(unit, k).mean.interior();
    unit[s] = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) h(r, c) = ext[static_cast<std::size_t>(r)];
  }
  Eigen::MatrixXd g_lines(cols, cols);
  for (Eigen::Index i = 0; i < cols; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      g_lines(i, j) = gm(static_cast<Eigen::Index>(lines[static_cast<std::size_t>(i)]),
                         static_cast<Eigen::Index>(lines[static_cast<std::size_t>(j)]));
    }
  }
  return gm - h * g_lines * h.transpose();
}

MarkovCheck markov_check(const BoxSpec& box, int k, int max_side) {
  const Eigen::MatrixXd cov = exact_conditional_covariance(box, k, max_side);
  const int m = box.side() >> k;
  std::optional<GreenOperator> sub;
  if (m >= 2) sub.emplace(green_dense(BoxSpec::from_side(m), max_side));
  MarkovCheck out;
  const auto count = box.interior_count();
  for (std::size_t i = 0; i < count; ++i) {
    const Site a = box.interior_site(i);
    for (std::size_t j = 0; j < count; ++j) {
      const Site b = box.interior_site(j);
      const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      const bool same_box = !on_lines(box, a, k) && !on_lines(box, b, k) &&
                            a.x / m == b.x / m && a.y / m == b.y / m;
      if (same_box) {
        const Site la{a.x % m, a.y % m};
        const Site lb{b.x % m, b.y % m};
        out.max_block_deviation = std::max(out.max_block_deviation, std::abs(v - (*sub)(la, lb)));
      } else {
        out.max_off_block = std::max(out.max_off_block, std::abs(v));
      }
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> level_maps(const BoxSpec& box) {
  require_level(box, 1, 1);
  const auto count = static_cast<Eigen::Index>(box.interior_count());
  std::vector<Eigen::MatrixXd> maps(static_cast<std::size_t>(box.level()),
                                    Eigen::MatrixXd(count, count));
  Field unit(box);
  for (Eigen::Index c = 0; c < count; ++c) {
    const Site s = box.interior_site(static_cast<std::size_t>(c));
    unit[s] = 1.0;
    const Decomposition d = decompose(unit);
    unit[s] = 0.0;
    for (std::size_t lvl = 0; lvl < maps.size(); ++lvl) {
      const std::vector<double> col = d.levels[lvl].interior();
      for (Eigen::Index r = 0; r < count; ++r) maps[lvl](r, c) = col[static_cast<std::size_t>(r)];
    }
  }
  return maps;
}

double max_cross_level_covariance(const BoxSpec& box, int max_side) {
  const GreenOperator g = green_dense(box, max_side);
  const auto maps = level_maps(box);
  double worst = 0.0;
  for (std::size_t j = 0; j < maps.size(); ++j) {
    for (std::size_t k = j + 1; k < maps.size(); ++k) {
      const Eigen::MatrixXd cross = maps[j] * g.matrix() * maps[k].transpose();
      worst = std::max(worst, cross.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace gfflab
