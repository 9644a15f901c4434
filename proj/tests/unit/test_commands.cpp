#include <doctest.h>

#include <rwmm/commands.hpp>
#include <rwmm/formats.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace rwmm;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    static int counter = 0;
    dir = fs::temp_directory_path() / ("rwmm_cmd_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" RWMM_CLI_PATH "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run(std::string_view name, const fs::path& config, const fs::path& out, std::vector<std::uint64_t> seeds = {}) {
  std::ostringstream log, err;
  return run_command(name, CommandOptions{config, std::move(seeds), out}, log, err);
}

const char* kDiscrete = "mode = discrete\ngrid = 4x4\nspeeds = 1;2\nhorizon = 300\nnodes = 2\n";
const char* kContinuous =
    "mode = continuous\narea = 500x500\nmin_speed = 1\nmax_speed = 10\nduration = 120\nnodes = 3\nflows = 0>1\n";

}  // namespace

TEST_CASE("simulate-discrete writes reproducible traces") {
  Scratch s;
  const auto cfg = s.write("d.cfg", kDiscrete);
  REQUIRE(run("simulate-discrete", cfg, s.dir / "a", {7}) == kExitOk);
  REQUIRE(run("simulate-discrete", cfg, s.dir / "b", {7}) == kExitOk);
  for (const char* f : {"trace_7.csv", "paths_7.csv", "histogram_7.csv"}) {
    REQUIRE(fs::exists(s.dir / "a" / f));
    CHECK(slurp(s.dir / "a" / f) == slurp(s.dir / "b" / f));
  }
  REQUIRE(run("simulate-discrete", cfg, s.dir / "c", {8}) == kExitOk);
  CHECK(slurp(s.dir / "a" / "trace_7.csv") != slurp(s.dir / "c" / "trace_8.csv"));
}

TEST_CASE("subcommands check the config mode") {
  Scratch s;
  const auto cfg = s.write("d.cfg", kDiscrete);
  CHECK(run("simulate-continuous", cfg, s.dir) == kExitConfigError);
  CHECK(run("no-such-command", cfg, s.dir) == kExitConfigError);
  CHECK(run("simulate-discrete", s.dir / "missing.cfg", s.dir) == kExitConfigError);
}

TEST_CASE("continuous simulation and export") {
  Scratch s;
  const auto cfg = s.write("c.cfg", kContinuous);
  REQUIRE(run("simulate-continuous", cfg, s.dir, {3}) == kExitOk);
  CHECK(fs::exists(s.dir / "positions_3.csv"));
  CHECK(fs::exists(s.dir / "traffic_3.csv"));
  REQUIRE(run("export", cfg, s.dir, {3}) == kExitOk);
  const std::string ns2 = slurp(s.dir / "mobility_3.ns2");
  CHECK(ns2.rfind("# rwmm-trace 1\n", 0) == 0);
  CHECK(ns2.find("\n$node_(0) set X_ ") != std::string::npos);
  CHECK(parse_ns2(ns2).initial.size() == 3);
}

TEST_CASE("verify-channel passes on a small model") {
  Scratch s;
  const auto cfg = s.write("v.cfg", "mode = verify\ngrid = 2x2\nspeeds = 1\nverify_horizon = 2\nverify_prefixes = 3\n");
  CHECK(run("verify-channel", cfg, s.dir, {1}) == kExitOk);
  CHECK(fs::exists(s.dir / "verify.csv"));
}

TEST_CASE("analyze writes reports") {
  Scratch s;
  const auto cfg = s.write("a.cfg",
                           "mode = analyze\ngrid = 2x2\nspeeds = 1\nhorizon = 5000\nobservables = cell:0,0\n"
                           "seeds = 1;2;3\ncesaro_runs = 20\ncesaro_horizon = 100\n");
  CHECK(run("analyze", cfg, s.dir) == kExitOk);
  CHECK(fs::exists(s.dir / "convergence_0_1.csv"));
  CHECK(fs::exists(s.dir / "ergodicity_0.csv"));
  CHECK(fs::exists(s.dir / "cesaro_0.csv"));
}

TEST_CASE("CLI exit codes") {
  Scratch s;
  const auto good = s.write("d.cfg", kDiscrete);
  const auto bad = s.write("bad.cfg", "mode = discrete\ngrid = 2x2\n");
  const auto big = s.write("big.cfg", "mode = discrete\ngrid = 100x100\nspeeds = 1\nhorizon = 10\n");
  const std::string out = "--out \"" + (s.dir / "o").string() + "\"";
  CHECK(cli("simulate-discrete --config \"" + good.string() + "\" --seed 1 " + out) == 0);
  CHECK(cli("simulate-discrete --config \"" + bad.string() + "\" " + out) == 2);
  CHECK(cli("simulate-discrete --config \"" + big.string() + "\" " + out) == 3);
  // 4x4 grid, two speeds: 16^2 * 2 = 512 digitizations
  CHECK(cli("simulate-discrete --config \"" + good.string() + "\" " + out, "RWMM_ENUM_CAP=511") == 3);
  CHECK(cli("simulate-discrete --config \"" + good.string() + "\" " + out, "RWMM_ENUM_CAP=512") == 0);
  CHECK(cli("simulate-discrete") == 2);
  CHECK(cli("simulate-discrete --config /nonexistent/file.cfg") == 2);
}

TEST_CASE("CLI: --seed accepts a list") {
  Scratch s;
  const auto good = s.write("d.cfg", kDiscrete);
  REQUIRE(cli("simulate-discrete --config \"" + good.string() + "\" --seed 4,5 --out \"" + s.dir.string() + "\"") == 0);
  CHECK(fs::exists(s.dir / "trace_4.csv"));
  CHECK(fs::exists(s.dir / "trace_5.csv"));
}

TEST_CASE("every output file carries a digest that validates against its config") {
  Scratch s;
  const std::vector<std::pair<std::string, std::string>> jobs{
      {"simulate-discrete", kDiscrete},
      {"simulate-continuous", std::string(kContinuous) + "grid = 5x5\n"},
      {"export", kContinuous},
      {"verify-channel", "mode = verify\ngrid = 2x1\nspeeds = 1\nverify_prefixes = 2\n"},
      {"analyze", "mode = analyze\ngrid = 2x2\nspeeds = 1\nhorizon = 500\nobservables = cell:0,0\nseeds = 1;2\n"
                  "cesaro_runs = 5\ncesaro_horizon = 50\n"},
  };
  std::size_t files = 0;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const auto cfg_path = s.write("job" + std::to_string(j) + ".cfg", jobs[j].second);
    const fs::path out = s.dir / ("out" + std::to_string(j));
    REQUIRE(run(jobs[j].first, cfg_path, out) == kExitOk);
    const RunConfig cfg = parse_config(jobs[j].second);
    for (const auto& entry : fs::directory_iterator(out)) {
      ++files;
      const auto header = read_output_header(slurp(entry.path()));
      CHECK_NOTHROW(verify_digest(header, cfg));
    }
  }
  CHECK(files >= 9);
  CHECK_THROWS_AS(read_output_header("x,y\n1,2\n"), InputError);
}
