#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "patchwork/cli.hpp"

using namespace patchwork;

namespace {

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.status = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path scratch_dir(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "patchwork-tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool has_line(const std::string& text, const std::string& line) {
  return ("\n" + text).find("\n" + line + "\n") != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("eval prints the exact value") {
  const auto r = run({"eval", "--op", "2:14:2", "--q", "2", "--args", "5,11"});
  CHECK(r.status == 0);
  CHECK(has_line(r.out, "value     15"));
  CHECK(has_line(r.out, "coeffs    1111.000000000000"));
  CHECK(has_line(r.out, "k_max     3"));
  CHECK(has_line(r.out, "H         1.000000"));

  const auto zero = run({"eval", "--op", "2:0:2", "--q", "2", "--args", "0,0"});
  CHECK(zero.status == 0);
  CHECK(has_line(zero.out, "value     0"));
  CHECK(has_line(zero.out, "k_max     none"));

  const auto mod = run({"eval", "--builtin", "modadd", "--p", "10", "--args", "5.6782,3.6754",
                        "--frac", "4"});
  CHECK(mod.status == 0);
  CHECK(has_line(mod.out, "decimal   8.2436"));
  CHECK(has_line(mod.out, "value     20609/2500"));

  const auto table = run({"eval", "--table", "0,1,1,1", "--p", "2", "--args", "5,11", "--q",
                          "3", "--frac", "0"});
  CHECK(has_line(table.out, "value     40"));

  const auto coarse = run({"eval", "--op", "2:9815:3", "--args", "4.5,2.25", "--D", "0"});
  CHECK(coarse.status == 0);
  CHECK(has_line(coarse.out, "value     4"));
}

TEST_CASE("errors name the offending flag") {
  struct Case {
    std::vector<std::string> args;
    std::string flag;
  };
  const std::vector<Case> cases = {
      {{"eval", "--op", "2:16:2", "--args", "1,1"}, "--op"},
      {{"eval", "--op", "2:14", "--args", "1,1"}, "--op"},
      {{"eval", "--args", "1,1"}, "--op"},
      {{"eval", "--op", "2:14:2", "--builtin", "modadd", "--p", "2", "--args", "1,1"}, "--op"},
      {{"eval", "--builtin", "modadd", "--args", "1,1"}, "--p"},
      {{"eval", "--builtin", "xor", "--p", "2", "--args", "1,1"}, "--builtin"},
      {{"eval", "--table", "0,1,1", "--p", "2", "--args", "1,1"}, "--table"},
      {{"eval", "--op", "2:14:2"}, "--args"},
      {{"eval", "--op", "2:14:2", "--args", "1"}, "--args"},
      {{"eval", "--op", "2:14:2", "--args", "1,-2"}, "--args"},
      {{"eval", "--op", "2:14:2", "--args", "1,1", "--q", "1"}, "--q"},
      {{"eval", "--op", "2:14:2", "--args", "1,1", "--q", "abc"}, "--q"},
      {{"eval", "--op", "2:14:2", "--args", "1,1", "--frac", "99"}, "--frac"},
      {{"eval", "--op", "3:1:50", "--args", "1,1,1"}, "--op"},
      {{"surface", "--op", "2:6:2", "--res", "1", "--out", "x.pgm"}, "--res"},
      {{"surface", "--op", "2:6:2", "--res", "4y4", "--out", "x.pgm"}, "--res"},
      {{"surface", "--op", "2:6:2", "--domain", "5,1", "--out", "x.pgm"}, "--domain"},
      {{"surface", "--op", "2:6:2", "--domain", "0,abc", "--out", "x.pgm"}, "--domain"},
      {{"surface", "--op", "2:6:2", "--u-range", "0", "--out", "x.pgm"}, "--u-range"},
      {{"surface", "--op", "2:6:2", "--format", "png", "--out", "x.pgm"}, "--format"},
      {{"surface", "--op", "2:6:2"}, "--out"},
      {{"surface", "--op", "1:1:2", "--out", "x.pgm"}, "--op"},
      {{"surface", "--op", "2:6:2", "--res", "4", "--out", "/nonexistent/dir/x.pgm"}, "--out"},
      {{"sweep", "--op", "2:6:2", "--q-list", "5..3"}, "--q-list"},
      {{"sweep", "--op", "2:6:2", "--q-list", "1,2"}, "--q-list"},
      {{"sweep", "--op", "2:6:2"}, "--q-list"},
      {{"check", "everything"}, "suite"},
      {{"check", "decomposition", "--p", "1"}, "--p"},
      {{"reproduce", "fig2"}, "figure"},
      {{"eval", "--config", "/nonexistent.cfg", "--op", "2:14:2", "--args", "1,1"}, "--config"},
  };
  for (const auto& c : cases) {
    std::string joined;
    for (const auto& a : c.args) joined += a + " ";
    CAPTURE(joined);
    const auto r = run(c.args);
    CHECK(r.status != 0);
    CHECK(r.err.find(c.flag) != std::string::npos);
  }
  CHECK(run({"eval", "--op", "2:16:2", "--args", "1,1"}).status == 2);
  CHECK(run({}).status == 2);
  CHECK(run({"eval", "--bogus"}).status == 2);
}

TEST_CASE("help exits cleanly") {
  const auto r = run({"surface", "--help"});
  CHECK(r.status == 0);
  CHECK(r.out.find("--domain") != std::string::npos);
}

TEST_CASE("surface writes a 2x2 csv") {
  const auto dir = scratch_dir("cli-surface");
  const auto path = (dir / "tiny.csv").string();
  const auto r = run({"surface", "--op", "2:14:2", "--q", "2", "--domain", "0,1.5", "--res", "2",
                      "--format", "csv", "--frac", "2", "--csv-digits", "3", "--out", path});
  CHECK(r.status == 0);
  CHECK(r.out.rfind("wrote " + path, 0) == 0);
  CHECK(slurp(path) ==
        "u,v,value\n0.000,0.000,0.000\n0.000,1.500,1.500\n1.500,0.000,1.500\n"
        "1.500,1.500,1.500\n");

  const auto raw_path = (dir / "tiny.txt").string();
  CHECK(run({"surface", "--op", "2:14:2", "--domain", "0,1.5", "--res", "2x3", "--format",
             "raw-rational", "--frac", "2", "--out", raw_path})
            .status == 0);
  CHECK(slurp(raw_path).rfind("u,v,value\n0,0,0\n0,3/4,3/4\n", 0) == 0);

  const auto rect = (dir / "rect.pgm").string();
  CHECK(run({"surface", "--op", "2:6:2", "--u-range", "0,10", "--v-range", "5,7", "--res",
             "5x3", "--out", rect})
            .status == 0);
  CHECK(slurp(rect).find("\n5 3\n65535\n") != std::string::npos);
}

TEST_CASE("config file fills flags that were not given") {
  const auto dir = scratch_dir("cli-config");
  const auto cfg = (dir / "job.cfg").string();
  std::ofstream(cfg) << "# defaults for the job\n"
                        "op = 2:14:2\n"
                        "q=3\n"
                        "args=5,11\n"
                        "frac=0\n"
                        "out=ignored-by-eval.pgm\n";
  const auto from_file = run({"--config", cfg, "eval"});
  CHECK(from_file.status == 0);
  CHECK(has_line(from_file.out, "value     40"));

  const auto flag_wins = run({"--config", cfg, "eval", "--q", "2"});
  CHECK(has_line(flag_wins.out, "value     15"));

  const auto trailing = run({"eval", "--q", "2", "--config", cfg});
  CHECK(has_line(trailing.out, "value     15"));

  std::ofstream(cfg) << "q\n";
  const auto bad = run({"--config", cfg, "eval", "--op", "2:14:2", "--args", "1,1"});
  CHECK(bad.status == 2);
  CHECK(bad.err.find("--config") != std::string::npos);

  std::ofstream(cfg) << "q=xyz\n";
  const auto bad_value = run({"--config", cfg, "eval", "--op", "2:14:2", "--args", "1,1"});
  CHECK(bad_value.status == 2);
  CHECK(bad_value.err.find("--config") != std::string::npos);
}

TEST_CASE("sweep writes one file per q") {
  const auto dir = scratch_dir("cli-sweep");
  const auto r = run({"sweep", "--op", "2:13903:3", "--q-list", "3..5", "--res", "8",
                      "--out-dir", dir.string(), "--prefix", "fig5"});
  CHECK(r.status == 0);
  for (int q = 3; q <= 5; ++q) {
    CHECK(std::filesystem::exists(dir / ("fig5_q" + std::to_string(q) + ".pgm")));
  }
  CHECK(run({"sweep", "--op", "2:13903:3", "--q-list", "3, 7", "--res", "4", "--format", "csv",
             "--out-dir", dir.string()})
            .status == 0);
  CHECK(std::filesystem::exists(dir / "sweep_q7.csv"));
}

TEST_CASE("check runs the verifier suites") {
  const auto pass = run({"check", "decomposition", "--p", "10", "--trials", "1000"});
  CHECK(pass.status == 0);
  CHECK(has_line(pass.out, "decomposition: PASS (1000/1000 trials)"));

  const auto vacuous = run({"check", "self-affinity", "--trials", "0"});
  CHECK(vacuous.status == 0);
  CHECK(vacuous.out.find("warning: no trials run; pass is vacuous") != std::string::npos);

  const auto coarse =
      run({"check", "coarse-limit", "--op", "2:13903:3", "--qmax", "301", "--trials", "5"});
  CHECK(coarse.status == 0);
  CHECK(coarse.out.find("max rel_deviation") != std::string::npos);
  CHECK(coarse.out.find("\n301 ") != std::string::npos);

  CHECK(run({"check", "mixed-radix", "--trials", "100"}).status == 0);
  CHECK(run({"check", "roundtrip", "--trials", "100", "--seed", "9"}).status == 0);
}

TEST_CASE("reproduce writes figure recipes") {
  const auto dir = scratch_dir("cli-reproduce");
  const auto r = run({"reproduce", "fig1", "--res", "8", "--out-dir", dir.string()});
  CHECK(r.status == 0);
  CHECK(r.out.find("fig1 identity f = g + h: holds") != std::string::npos);
  for (const char* name : {"fig1_f.pgm", "fig1_g.pgm", "fig1_h.pgm"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(run({"reproduce", "fig6", "--res", "8", "--out-dir", dir.string()}).status == 0);
  for (const char* name : {"fig6_D0.pgm", "fig6_D-1.pgm", "fig6_D-2.pgm"}) {
    CHECK(std::filesystem::exists(dir / name));
  }
  CHECK(slurp(dir / "fig6_D-2.pgm").find("D=-2") != std::string::npos);
  CHECK(run({"reproduce", "fig4", "--res", "6", "--out-dir", dir.string()}).status == 0);
  CHECK(std::filesystem::exists(dir / "fig4_2-13427417-5.pgm"));
}

}
