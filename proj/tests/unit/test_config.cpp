#include <doctest.h>

#include <rwmm/config.hpp>

#include <string>

using namespace rwmm;

namespace {

std::vector<ConfigIssue> issues_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, std::string_view needle) {
  for (const auto& i : issues)
    if (i.message.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal discrete config") {
  const auto cfg = parse_config("mode = discrete\ngrid = 3x2\nspeeds = 1; 3/2\nhorizon = 500\n");
  CHECK(cfg.mode == Mode::kDiscrete);
  REQUIRE(cfg.grid);
  CHECK(cfg.grid->width == 3);
  CHECK(cfg.grid->height == 2);
  CHECK(cfg.speeds == std::vector<Rational>{Rational(1), Rational(3, 2)});
  CHECK(cfg.horizon == 500);
  CHECK(cfg.nodes == 1);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{1});
  CHECK(make_discrete_model(cfg).alphabet.size() > 0);
}

TEST_CASE("comments, blank lines and the full continuous key set") {
  const auto cfg = parse_config(R"(# scenario
mode = continuous   # trailing comment

area = 1500x300
min_speed = 1
max_speed = 20
pause_time = 0
duration = 900
dt = 0.5
nodes = 4
flows = 0>1; 2>3
range = 250
bitrate = 512
packet_size = 512
seeds = 3;4
)");
  REQUIRE(cfg.area);
  CHECK(cfg.area->width == 1500);
  CHECK(cfg.area->max_speed == 20);
  CHECK(cfg.dt == 0.5);
  CHECK(cfg.flows == std::vector<Flow>{{0, 1}, {2, 3}});
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 4});
}

TEST_CASE("zero minimum speed is rejected") {
  const auto issues = issues_of("mode = continuous\narea = 100x100\nmin_speed = 0\nmax_speed = 5\nduration = 10\n");
  REQUIRE_FALSE(issues.empty());
  CHECK(mentions(issues, "min_speed"));
  CHECK(issues.front().line == 3);
}

TEST_CASE("duplicate keys report both lines") {
  const auto issues = issues_of("mode = discrete\ngrid = 2x2\nspeeds = 1\nhorizon = 10\ngrid = 3x3\n");
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].line == 5);
  CHECK(mentions(issues, "line 2"));
  CHECK(mentions(issues, "line 5"));
}

TEST_CASE("all problems are collected") {
  const auto issues = issues_of("mode = discrete\ncolour = blue\ngrid = 0x2\nspeeds = -1\n");
  CHECK(mentions(issues, "unknown key 'colour'"));
  CHECK(mentions(issues, "missing required key 'horizon'"));
  CHECK(issues.size() >= 4);
  try {
    parse_config("mode = discrete\ncolour = blue\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("mode is required") {
  CHECK(mentions(issues_of("grid = 2x2\n"), "mode"));
  CHECK(mentions(issues_of("mode = sideways\n"), "mode"));
}

TEST_CASE("markov waypoint matrices") {
  const auto cfg = parse_config(
      "mode = discrete\ngrid = 2x1\nspeeds = 1\nhorizon = 10\nwaypoints = markov\nmarkov_matrix = 1/3;2/3 | 1/2;1/2\n");
  const auto spec = make_waypoint_process(cfg);
  CHECK(spec.transition(0, 1) == Rational(2, 3));
  CHECK(spec.initial(0) == Rational(1, 2));
  CHECK(mentions(issues_of("mode = discrete\ngrid = 2x1\nspeeds = 1\nhorizon = 10\nwaypoints = markov\n"
                           "markov_matrix = 0;1 | 1;0\n"),
                 "periodic"));
  CHECK(mentions(issues_of("mode = discrete\ngrid = 2x1\nspeeds = 1\nhorizon = 10\nwaypoints = markov\n"), "markov_matrix"));
}

TEST_CASE("observable specs") {
  CHECK(std::holds_alternative<CellIndicator>(parse_observable("cell:1,2").kind()));
  const auto cyl = parse_observable("cylinder:0,0/1,0@1");
  CHECK(std::get<CylinderIndicator>(cyl.kind()).node == 1);
  CHECK(std::get<CylinderIndicator>(cyl.kind()).symbols.size() == 2);
  CHECK(std::get<NodePairWithinRange>(parse_observable("pair:0,1,2.5").kind()).radius == 2.5);
  const auto t = parse_observable("table:0,0=2/1,1=-1/default=0.5");
  CHECK(t.upper_bound() == 2.0);
  CHECK(t.lower_bound() == -1.0);
  CHECK_THROWS_AS(parse_observable("volume:1"), ConfigError);
  CHECK_THROWS_AS(parse_observable("table:0,0=inf"), ConfigError);
  CHECK(mentions(issues_of("mode = analyze\ngrid = 2x2\nspeeds = 1\nhorizon = 10\nobservables = cell:5,5\n"), "outside"));
  CHECK(mentions(issues_of("mode = analyze\ngrid = 2x2\nspeeds = 1\nhorizon = 10\nobservables = pair:0,1,1\n"), "node"));
}

TEST_CASE("digest ignores formatting, seeds and output but not parameters") {
  const auto a = parse_config("mode = discrete\ngrid = 2x2\nspeeds = 1;2\nhorizon = 10\nseeds = 1\n");
  const auto b = parse_config("# other\nhorizon=10\nmode=discrete\n speeds = 2 ; 1\ngrid = 2x2\nseeds = 9\noutput = x\n");
  const auto c = parse_config("mode = discrete\ngrid = 2x2\nspeeds = 1;2\nhorizon = 11\n");
  CHECK(config_digest(a) == config_digest(b));
  CHECK(config_digest(a) != config_digest(c));
  CHECK(config_digest(a).size() == 16);
}

TEST_CASE("enumeration cap from the environment") {
  CHECK(kDefaultEnumerationCap == 1000000);
}
