#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "gfflab/cli.hpp"

using namespace gfflab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "gfflab");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gfflab_test_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool contains(const std::string& text, const std::string& what) {
  return text.find(what) != std::string::npos;
}

}  // namespace

TEST_CASE("green writes the 1x1 matrix for N = 2") {
  const fs::path dir = fresh_dir("green2");
  const auto r = run({"--out", dir.string(), "green", "--n", "2"});
  CHECK(r.code == kExitOk);
  CHECK(slurp(dir / "green_dense_N2.csv") == "x1,y1,x2,y2,g\n1,1,1,1,1\n");
}

TEST_CASE("green spectral and dense agree") {
  const fs::path dir = fresh_dir("green4");
  REQUIRE(run({"--out", dir.string(), "green", "--n", "4", "--dense"}).code == 0);
  REQUIRE(run({"--out", dir.string(), "green", "--n", "4", "--spectral"}).code == 0);
  std::ifstream a(dir / "green_dense_N4.csv");
  std::ifstream b(dir / "green_spectral_N4.csv");
  std::string la;
  std::string lb;
  std::getline(a, la);
  std::getline(b, lb);
  CHECK(la == lb);
  int rows = 0;
  while (std::getline(a, la) && std::getline(b, lb)) {
    const double ga = std::stod(la.substr(la.rfind(',') + 1));
    const double gb = std::stod(lb.substr(lb.rfind(',') + 1));
    CHECK(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
    CHECK(std::abs(ga - gb) <= 1e-8);
    ++rows;
  }
  CHECK(rows == 81);
}

TEST_CASE("green size cap and bad arguments") {
  const auto capped = run({"green", "--n", "64", "--stdout", "--dense-cap", "32"});
  CHECK(capped.code == kExitSizeCap);
  CHECK(contains(capped.err, "spectral"));
  CHECK(run({"green", "--n", "6", "--stdout"}).code == kExitBadArgs);
  CHECK(run({"green"}).code == kExitBadArgs);
  CHECK(run({"frobnicate"}).code == kExitBadArgs);
  CHECK(run({"green", "--n", "4", "--dense", "--spectral", "--stdout"}).code == kExitBadArgs);
  const auto profile = run({"green", "--n", "4", "--spectral", "--profile", "--stdout"});
  CHECK(profile.code == 0);
  CHECK(contains(profile.out, "2,2,2,2,1.5\n"));
}

TEST_CASE("hierarchy exact Markov check") {
  const auto r = run({"hierarchy", "--n", "8", "--k", "1", "--exact"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "Markov check PASS: max block deviation"));
  CHECK(contains(r.out, "A_3: 1 3 5 7"));
  const auto t = run({"--seed", "3", "hierarchy", "--n", "32", "--k", "2"});
  CHECK(t.code == kExitOk);
  CHECK(contains(t.out, "PASS"));
  CHECK(run({"hierarchy", "--n", "8", "--k", "4"}).code == kExitBadArgs);
}

TEST_CASE("sample prints maxima and dumps fields") {
  const fs::path dir = fresh_dir("sample");
  const auto r = run({"--out", dir.string(), "--seed", "4", "sample", "--n", "8", "--count", "3",
                      "--dump-fields"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "index,max,argmax_x,argmax_y,center\n"));
  CHECK(fs::file_size(dir / "field_N8_s4_i2.bin") == 4 + 81 * 8);
  CHECK(fs::exists(dir / "field_N8_s4_i0.csv"));
  const auto again = run({"--out", dir.string(), "--seed", "4", "--workers", "3", "sample", "--n", "8",
                          "--count", "3"});
  CHECK(again.out == r.out);
}

TEST_CASE("brw depth 0 and depth 2") {
  const fs::path dir = fresh_dir("brw");
  const auto zero = run({"--out", dir.string(), "brw", "--depth", "0"});
  CHECK(zero.code == kExitOk);
  CHECK(slurp(dir / "brw_b4_d0.csv") ==
        "# gfflab-brw schema=1\ngeneration,mean,median,q10,q90,dh_gap\n0,0,0,0,0,0\n");
  const auto two = run({"--out", dir.string(), "brw", "--depth", "2", "--simulate", "2000", "--dump-cdf"});
  CHECK(two.code == kExitOk);
  CHECK(contains(two.out, "Dekking-Host slack"));
  CHECK(contains(two.out, "simulation depth 2"));
  CHECK(fs::exists(dir / "brw_b4_d2_cdf.csv"));
  CHECK(run({"brw"}).code == kExitBadArgs);
  CHECK(run({"--out", dir.string(), "brw", "--depth", "2", "--branching", "0"}).code == kExitBadArgs);
}

TEST_CASE("report on missing data") {
  const fs::path dir = fresh_dir("empty");
  CHECK(run({"report", dir.string()}).code == kExitMissingData);
  CHECK(run({"report", (dir / "nowhere").string()}).code == kExitMissingData);
}

TEST_CASE("extremes is reproducible across reruns, workers and resumption") {
  const fs::path a = fresh_dir("ext_a");
  const fs::path b = fresh_dir("ext_b");
  const fs::path c = fresh_dir("ext_c");
  auto with = [](const fs::path& dir, const std::string& workers, const std::string& n_max = "5",
                 const std::string& samples = "400") {
    return run({"--out", dir.string(), "--workers", workers, "--seed", "9", "extremes", "--n-min", "1",
                "--n-max", n_max, "--samples", samples});
  };
  REQUIRE(with(a, "1").code == kExitOk);
  const std::string first = slurp(a / "extremes_seed9.csv");
  REQUIRE(with(b, "4").code == kExitOk);
  CHECK(slurp(b / "extremes_seed9.csv") == first);

  // Rerunning into a fresh directory reproduces the file byte for byte.
  fs::remove_all(a);
  REQUIRE(with(a, "2").code == kExitOk);
  CHECK(slurp(a / "extremes_seed9.csv") == first);

  // Interrupted after level 3, then resumed.
  REQUIRE(with(c, "1", "3").code == kExitOk);
  const auto resumed = with(c, "2");
  CHECK(resumed.code == kExitOk);
  CHECK(contains(resumed.out, "resumed"));
  CHECK(slurp(c / "extremes_seed9.csv") == first);
  CHECK_FALSE(fs::exists(c / ".gfflab.lock"));

  const auto mismatch = with(c, "1", "5", "500");
  CHECK(mismatch.code == kExitBadArgs);
  CHECK(contains(mismatch.err, "samples"));

  const auto report = run({"report", c.string()});
  CHECK(report.code == kExitOk);
  CHECK(contains(report.out, "== monotonicity"));
  CHECK(contains(report.out, "== growth fit"));
}

TEST_CASE("extremes honours the lock file") {
  const fs::path dir = fresh_dir("locked");
  std::ofstream(dir / ".gfflab.lock") << "";
  const auto r = run({"--out", dir.string(), "extremes", "--n-max", "2", "--samples", "100"});
  CHECK(r.code == kExitBadArgs);
  CHECK(contains(r.err, "locked"));
}

TEST_CASE("config file with overrides") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.json";
  std::ofstream(cfg) << R"({"n_min": 1, "n_max": 2, "samples": 100000, "seed": 17,
    "out": ")" << (dir / "results").string()
                     << R"(", "tolerances": {"point_se": 3.0}})";
  const auto r = run({"--config", cfg.string(), "extremes"});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "results" / "extremes_seed17.csv"));
  CHECK(contains(r.out, "== closed form n=1"));
  // Both closed-form lines pass.
  const auto pos = r.out.find("== closed form n=1");
  const std::string block = r.out.substr(pos, r.out.find("IQR", pos) - pos);
  CHECK(block.find("FAIL") == std::string::npos);
  CHECK(contains(block, "PASS"));

  // Command-line flags win over the file.
  const auto o = run({"--config", cfg.string(), "--seed", "18", "extremes", "--samples", "200"});
  CHECK(o.code == kExitOk);
  CHECK(fs::exists(dir / "results" / "extremes_seed18.csv"));

  std::ofstream(dir / "bad.json") << R"({"samples": 5})";
  CHECK(run({"--config", (dir / "bad.json").string(), "extremes"}).code == kExitBadArgs);
  std::ofstream(dir / "junk.json") << "{not json";
  CHECK(run({"--config", (dir / "junk.json").string(), "extremes"}).code == kExitBadArgs);
}
