#include "gfflab/cli.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "gfflab/brw.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/extremes.hpp"
#include "gfflab/green.hpp"
#include "gfflab/hierarchy.hpp"
#include "gfflab/io.hpp"
#include "gfflab/report.hpp"
#include "gfflab/sampler.hpp"

namespace gfflab {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (n_min < 1) throw PreconditionError("n_min must be >= 1");
  if (n_max < n_min) throw PreconditionError("n_max must be >= n_min");
  if (n_max > 14) throw PreconditionError("n_max above 14 is not supported");
  if (samples < 100) throw PreconditionError("samples must be >= 100");
  if (workers < 1) throw PreconditionError("workers must be >= 1");
  if (dense_cutoff < 2) throw PreconditionError("dense cutoff must be >= 2");
  if (!(inequality_se > 0) || !(point_se > 0) || !(detector_threshold > 0)) {
    throw PreconditionError("tolerances must be positive");
  }
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config " + path.string() + ": " + e.what());
  }
  ExperimentConfig c;
  try {
    c.n_min = j.value("n_min", c.n_min);
    c.n_max = j.value("n_max", c.n_max);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.dense_cutoff = j.value("dense_cutoff", c.dense_cutoff);
    c.out = j.value("out", c.out.string());
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.inequality_se = t.value("inequality_se", c.inequality_se);
      c.point_se = t.value("point_se", c.point_se);
      c.detector_threshold = t.value("detector_threshold", c.detector_threshold);
    }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config " + path.string() + ": " + e.what());
  }
  return c;
}

namespace {

/// Exclusive lock on an output directory, released on destruction.
class DirectoryLock {
 public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".gfflab.lock") {
    fs::create_directories(dir);
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw PreconditionError("output directory " + dir.string() + " is locked by another run (" +
                              path_.string() + ")");
    }
  }
  ~DirectoryLock() {
    ::close(fd_);
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  fs::path path_;
  int fd_ = -1;
};

std::ofstream open_output(const fs::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, mode | std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

struct Globals {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string out = ".";
  std::string config;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;
  CLI::Option* out_opt = nullptr;
};

int cmd_green(const Globals& g, int side, bool spectral, bool profile, int dense_cap,
              bool to_stdout, std::ostream& out) {
  const BoxSpec box = BoxSpec::from_side(side);
  const GreenOperator op = spectral ? green_spectral(box) : green_dense(box, dense_cap);
  std::ostringstream body;
  if (profile) {
    io::write_variance_csv(body, variance_profile(op));
  } else {
    io::write_green_csv(body, op);
  }
  if (to_stdout) {
    out << body.str();
    return kExitOk;
  }
  const fs::path path = fs::path(g.out) / ((profile ? std::string("variance_") : std::string("green_")) +
                                           (spectral ? "spectral" : "dense") + "_N" +
                                           std::to_string(side) + ".csv");
  open_output(path) << body.str();
  out << "wrote " << path.string() << '\n';
  return kExitOk;
}

int cmd_sample(const Globals& g, int side, std::size_t count, const std::string& sampler,
               bool dump, std::ostream& out) {
  const BoxSpec box = BoxSpec::from_side(side);
  BatchOptions opts;
  opts.workers = g.workers;
  opts.sampler = sampler == "dense"      ? SamplerKind::dense
                 : sampler == "spectral" ? SamplerKind::spectral
                                         : SamplerKind::automatic;
  const auto fields = batch_sample(box, count, SeedSpec{g.seed, 0}, opts);
  out << "index,max,argmax_x,argmax_y,center\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const FieldMax m = field_max(fields[i]);
    char line[160];
    std::snprintf(line, sizeof line, "%zu,%.12g,%d,%d,%.12g\n", i, m.value, m.argmax.x,
                  m.argmax.y, fields[i](side / 2, side / 2));
    out << line;
    if (dump) {
      const std::string stem = "field_N" + std::to_string(side) + "_s" + std::to_string(g.seed) +
                               "_i" + std::to_string(i);
      auto bin = open_output(fs::path(g.out) / (stem + ".bin"));
      io::write_field_binary(bin, fields[i]);
      auto csv = open_output(fs::path(g.out) / (stem + ".csv"));
      io::write_field_csv(csv, fields[i]);
    }
  }
  return kExitOk;
}

int cmd_hierarchy(const Globals& g, int side, int k, bool exact, int dense_cap, bool dump,
                  std::ostream& out) {
  const BoxSpec box = BoxSpec::from_side(side);
  if (k < 1 || k > box.level()) {
    throw PreconditionError("k must lie in [1, " + std::to_string(box.level()) + "]");
  }
  for (int i = 1; i <= box.level(); ++i) {
    out << "A_" << i << ":";
    for (int m : dyadic_set(box, i).members) out << ' ' << m;
    out << '\n';
  }
  if (exact) {
    const MarkovCheck mc = markov_check(box, k, dense_cap);
    const bool ok = mc.passed(1e-8);
    char line[200];
    std::snprintf(line, sizeof line,
                  "Markov check %s: max block deviation %.3e, max off-block %.3e (tol 1e-08)\n",
                  ok ? "PASS" : "FAIL", mc.max_block_deviation, mc.max_off_block);
    out << line;
    return ok ? kExitOk : kExitFailure;
  }
  const Field field = sample_spectral(box, SeedSpec{g.seed, 0});
  const Decomposition d = decompose(field);
  const Field total = d.sum();
  double err = 0.0;
  for (std::size_t i = 0; i < total.values().size(); ++i) {
    err = std::max(err, std::abs(total.values()[i] - field.values()[i]));
  }
  char line[200];
  std::snprintf(line, sizeof line, "telescoping max |sum(levels) - field| = %.3e %s\n", err,
                err <= 1e-9 ? "PASS" : "FAIL");
  out << line;
  const Conditioned c = condition_on_level(field, k);
  double on_lines = 0.0;
  const int m = side >> k;
  for (int x = 0; x <= side; ++x) {
    for (int y = 0; y <= side; ++y) {
      if (x % m == 0 || y % m == 0) on_lines = std::max(on_lines, std::abs(c.residual(x, y)));
    }
  }
  std::snprintf(line, sizeof line, "level-%d residual on conditioning lines: max |r| = %.3e\n", k,
                on_lines);
  out << line;
  if (dump) {
    auto f = open_output(fs::path(g.out) / ("levels_N" + std::to_string(side) + "_s" +
                                            std::to_string(g.seed) + ".csv"));
    io::write_levels_csv(f, d);
  }
  return err <= 1e-9 ? kExitOk : kExitFailure;
}

int cmd_extremes(const ExperimentConfig& cfg, std::ostream& out) {
  cfg.validate();
  DirectoryLock lock(cfg.out);
  const fs::path path = cfg.out / ("extremes_seed" + std::to_string(cfg.seed) + ".csv");
  std::map<int, MaxStats> existing;
  if (fs::exists(path)) {
    for (const auto& s : io::read_extremes_csv(path)) existing[s.n] = s;
  } else {
    open_output(path) << io::kExtremesSchema << '\n' << io::kExtremesHeader << '\n';
  }
  McOptions opts{cfg.workers, SamplerKind::automatic, cfg.dense_cutoff};
  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    if (auto it = existing.find(n); it != existing.end()) {
      if (it->second.samples != cfg.samples) {
        throw ResumeMismatchError("persisted level n=" + std::to_string(n) + " has " +
                                  std::to_string(it->second.samples) + " samples, config asks " +
                                  std::to_string(cfg.samples));
      }
      out << "level " << n << ": resumed from " << path.string() << '\n';
      continue;
    }
    const MaxStats s = mc_max_stats(n, cfg.samples, SeedSpec{cfg.seed, 0}, opts);
    auto f = open_output(path, std::ios::app);
    f << io::format_extremes_row(s) << '\n';
    f.flush();
    existing[n] = s;
    out << "level " << n << ": EZ = " << s.mean_max << " +- " << s.se_mean << '\n';
  }
  std::vector<MaxStats> all;
  for (const auto& [n, s] : existing) all.push_back(s);
  out << render_extremes_report(all, {cfg.inequality_se, cfg.point_se, cfg.detector_threshold});
  return kExitOk;
}

int cmd_brw(const Globals& g, int depth, int branching, const std::vector<double>& sigmas,
            double step, std::size_t simulate, bool dump_cdf, std::ostream& out) {
  BrwSpec spec{branching, sigmas.empty() ? std::vector<double>{1.0} : sigmas, depth};
  spec.validate();
  DirectoryLock lock(g.out);
  const BrwRun run = brw_run(spec, step);
  const std::string stem = "brw_b" + std::to_string(branching) + "_d" + std::to_string(depth);
  {
    auto f = open_output(fs::path(g.out) / (stem + ".csv"));
    io::write_brw_csv(f, run.summary);
  }
  if (dump_cdf) {
    auto f = open_output(fs::path(g.out) / (stem + "_cdf.csv"));
    io::write_cdf_csv(f, run.cdfs.back());
  }
  out << render_brw_report(run.summary);
  if (simulate > 0) {
    const BrwSimStats sim = brw_simulate(spec, simulate, SeedSpec{g.seed, 0}, g.workers);
    const double diff = std::abs(sim.mean - run.summary.back().mean);
    char line[200];
    std::snprintf(line, sizeof line,
                  "simulation depth %d: mean %.5f +- %.5f vs recursion %.5f  %s\n", depth,
                  sim.mean, sim.se_mean, run.summary.back().mean,
                  diff <= 3 * sim.se_mean + 1e-3 ? "PASS" : "FAIL");
    out << line;
  }
  return kExitOk;
}

int cmd_report(const fs::path& dir, const ReportTolerances& tol, std::ostream& out) {
  if (!fs::is_directory(dir)) throw MissingDataError("no such directory " + dir.string());
  std::vector<fs::path> extremes;
  std::vector<fs::path> brw;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".csv") continue;
    if (name.rfind("extremes_", 0) == 0) extremes.push_back(entry.path());
    if (name.rfind("brw_", 0) == 0 && name.find("_cdf") == std::string::npos) brw.push_back(entry.path());
  }
  if (extremes.empty() && brw.empty()) {
    throw MissingDataError("no persisted results in " + dir.string());
  }
  std::sort(extremes.begin(), extremes.end());
  std::sort(brw.begin(), brw.end());
  for (const auto& p : extremes) {
    out << "### " << p.filename().string() << '\n';
    out << render_extremes_report(io::read_extremes_csv(p), tol);
  }
  for (const auto& p : brw) {
    out << "### " << p.filename().string() << '\n';
    out << render_brw_report(io::read_brw_csv(p));
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian free field extremes laboratory", "gfflab"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  g.seed_opt = app.add_option("--seed", g.seed, "master seed");
  g.workers_opt = app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
  g.out_opt = app.add_option("--out", g.out, "output directory");
  app.add_option("--config", g.config, "JSON experiment config");

  auto* green = app.add_subcommand("green", "Green matrix or variance profile as CSV");
  int green_n = 0;
  bool green_spectral_flag = false, green_dense_flag = false, green_profile = false, green_stdout = false;
  int green_cap = kDefaultDenseCutoff;
  green->add_option("--n", green_n, "box side N (power of two)")->required();
  auto* spectral_opt = green->add_flag("--spectral", green_spectral_flag, "use the sine-mode form");
  green->add_flag("--dense", green_dense_flag, "use the dense form (default)")->excludes(spectral_opt);
  green->add_flag("--profile", green_profile, "write only the diagonal G(x,x)");
  green->add_flag("--stdout", green_stdout, "print instead of writing a file");
  green->add_option("--dense-cap", green_cap, "largest N for dense matrices");

  auto* sample = app.add_subcommand("sample", "draw fields and print their maxima");
  int sample_n = 0;
  std::size_t sample_count = 1;
  std::string sample_kind = "auto";
  bool dump_fields = false;
  sample->add_option("--n", sample_n, "box side N")->required();
  sample->add_option("--count", sample_count, "number of fields");
  sample->add_option("--sampler", sample_kind, "auto, dense or spectral")
      ->check(CLI::IsMember({"auto", "dense", "spectral"}));
  sample->add_flag("--dump-fields", dump_fields, "write raw fields (binary and CSV)");

  auto* hier = app.add_subcommand("hierarchy", "dyadic decomposition and Markov checks");
  int hier_n = 0, hier_k = 1, hier_cap = kDefaultDenseCutoff;
  bool hier_exact = false, hier_dump = false;
  hier->add_option("--n", hier_n, "box side N")->required();
  hier->add_option("--k", hier_k, "conditioning level");
  hier->add_flag("--exact", hier_exact, "deterministic conditional-covariance check");
  hier->add_flag("--dump", hier_dump, "write decomposition levels CSV");
  hier->add_option("--dense-cap", hier_cap, "largest N for dense matrices");

  auto* ext = app.add_subcommand("extremes", "Monte Carlo statistics of the maximum per level");
  int n_min = 0, n_max = 0, dense_cutoff = 0;
  std::size_t samples = 0;
  double threshold = 0, ineq_se = 0, point_se = 0;
  auto* o_nmin = ext->add_option("--n-min", n_min, "smallest level n (N = 2^n)");
  auto* o_nmax = ext->add_option("--n-max", n_max, "largest level n");
  auto* o_samples = ext->add_option("--samples", samples, "fields per level");
  auto* o_cut = ext->add_option("--dense-cutoff", dense_cutoff, "largest N sampled densely");
  auto* o_k = ext->add_option("--K", threshold, "subsequence detector threshold");
  auto* o_ise = ext->add_option("--se-inequality", ineq_se, "SE multiplier for inequalities");
  auto* o_pse = ext->add_option("--se-point", point_se, "SE multiplier for point checks");

  auto* brw = app.add_subcommand("brw", "branching random walk recursion");
  int depth = 0, branching = 4;
  std::vector<double> sigmas;
  double step = 0.0;
  std::size_t simulate = 0;
  bool dump_cdf = false;
  brw->add_option("--depth", depth, "tree depth")->required();
  brw->add_option("--branching", branching, "children per node");
  brw->add_option("--sigma", sigmas, "increment std per recursion step (last repeats)");
  brw->add_option("--step", step, "grid step (default 1e-3 sigma)");
  brw->add_option("--simulate", simulate, "also simulate this many trees");
  brw->add_flag("--dump-cdf", dump_cdf, "write the final distribution function");

  auto* rep = app.add_subcommand("report", "render tables from persisted CSVs");
  std::string report_dir;
  double rep_k = 2.0;
  rep->add_option("dir", report_dir, "results directory (defaults to --out)");
  rep->add_option("--K", rep_k, "subsequence detector threshold");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (*green) {
      return cmd_green(g, green_n, green_spectral_flag, green_profile, green_cap, green_stdout, out);
    }
    if (*sample) return cmd_sample(g, sample_n, sample_count, sample_kind, dump_fields, out);
    if (*hier) return cmd_hierarchy(g, hier_n, hier_k, hier_exact, hier_cap, hier_dump, out);
    if (*ext) {
      ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_config(g.config);
      if (g.seed_opt->count() > 0 || g.config.empty()) cfg.seed = g.seed;
      if (g.workers_opt->count() > 0 || g.config.empty()) cfg.workers = g.workers;
      if (g.out_opt->count() > 0 || g.config.empty()) cfg.out = g.out;
      if (o_nmin->count() > 0) cfg.n_min = n_min;
      if (o_nmax->count() > 0) cfg.n_max = n_max;
      if (o_samples->count() > 0) cfg.samples = samples;
      if (o_cut->count() > 0) cfg.dense_cutoff = dense_cutoff;
      if (o_k->count() > 0) cfg.detector_threshold = threshold;
      if (o_ise->count() > 0) cfg.inequality_se = ineq_se;
      if (o_pse->count() > 0) cfg.point_se = point_se;
      return cmd_extremes(cfg, out);
    }
    if (*brw) return cmd_brw(g, depth, branching, sigmas, step, simulate, dump_cdf, out);
    if (*rep) {
      return cmd_report(report_dir.empty() ? fs::path(g.out) : fs::path(report_dir),
                        {2.0, 3.0, rep_k}, out);
    }
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSizeCap;
  } catch (const MissingDataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitMissingData;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const ResumeMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadArgs;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitBadArgs;
}

}  // namespace gfflab
