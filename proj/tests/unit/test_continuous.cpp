#include <doctest.h>

#include <rwmm/continuous.hpp>

#include <cmath>

using namespace rwmm;

namespace {

ContinuousAreaSpec area(double w, double h, double vmin, double vmax, double pause = 0.0) {
  return ContinuousAreaSpec{w, h, vmin, vmax, pause};
}

}  // namespace

TEST_CASE("area validation") {
  CHECK_THROWS_AS(area(100, 100, 0.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(area(100, 100, 2.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(area(0, 100, 1.0, 1.0).validate(), ConfigError);
  CHECK_THROWS_AS(area(100, 100, 1.0, 1.0, -1.0).validate(), ConfigError);
  CHECK_NOTHROW(area(100, 100, 1.0, 1.0).validate());
}

TEST_CASE("fixed speed: leg durations are distance over speed") {
  const auto ct = simulate_continuous(area(500, 300, 4.0, 4.0, 2.0), 3, 1000, 1.0, 12);
  REQUIRE(ct.node_count() == 3);
  CHECK(ct.steps() == 1000);
  for (const auto& legs : ct.legs) {
    REQUIRE_FALSE(legs.empty());
    double t = 0.0;
    for (const Leg& leg : legs) {
      CHECK(leg.speed == 4.0);
      CHECK(leg.start_time == doctest::Approx(t));
      CHECK(leg.arrival_time() - leg.start_time == doctest::Approx(distance(leg.origin, leg.destination) / 4.0));
      CHECK(leg.pause == 2.0);
      t = leg.end_time();
    }
    CHECK(legs.back().end_time() >= 1000.0);
  }
}

TEST_CASE("samples stay inside the rectangle and follow the legs") {
  const auto a = area(200, 100, 1.0, 10.0);
  const auto ct = simulate_continuous(a, 4, 500, 0.5, 3);
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    CHECK(ct.samples[v].front() == ct.initial[v]);
    for (std::size_t k = 0; k < ct.samples[v].size(); ++k) {
      const Point p = ct.samples[v][k];
      CHECK(p.x >= 0.0);
      CHECK(p.x <= a.width);
      CHECK(p.y >= 0.0);
      CHECK(p.y <= a.height);
      const Point q = ct.position(v, static_cast<double>(k) * ct.dt);
      CHECK(distance(p, q) < 1e-9);
    }
  }
  const auto again = simulate_continuous(a, 4, 500, 0.5, 3);
  CHECK(again.samples == ct.samples);
}

TEST_CASE("time-averaged speed sits near the harmonic mean") {
  const double vmin = 1.0, vmax = 19.0;
  const auto ct = simulate_continuous(area(1000, 1000, vmin, vmax), 1, 1e6, 10.0, 5);
  double dist = 0.0, time = 0.0;
  std::size_t legs = 0;
  for (const Leg& leg : ct.legs[0]) {
    dist += distance(leg.origin, leg.destination);
    time += leg.travel_time();
    ++legs;
  }
  REQUIRE(legs >= 10000);
  const double time_average_speed = dist / time;
  const double log_mean = (vmax - vmin) / std::log(vmax / vmin);
  CHECK(time_average_speed < 0.5 * (vmin + vmax) - 2.0);
  CHECK(std::fabs(time_average_speed - log_mean) < 0.05 * log_mean);
}

TEST_CASE("nearest cell") {
  const auto a = area(4, 2, 1, 1);
  const GridSpec g{4, 2};
  CHECK(nearest_cell(a, g, {0.1, 0.1}) == Cell{0, 0});
  CHECK(nearest_cell(a, g, {3.9, 1.9}) == Cell{3, 1});
  CHECK(nearest_cell(a, g, {1.0, 1.0}) == Cell{0, 0});
  CHECK(nearest_cell(a, g, {4.0, 2.0}) == Cell{3, 1});
}

TEST_CASE("a static node discretizes to pause paths") {
  const auto a = area(10, 10, 1, 1);
  const auto ct = make_trace(a, {{2.5, 7.5}}, {{}}, 20, 1.0);
  const auto d = discretize_trace(ct, {10, 10}, 1.0);
  REQUIRE(d.size() == 1);
  CHECK(d[0].paths.size() == 20);
  for (const Path& p : d[0].paths) CHECK(p == Path{{{2, 7}, {2, 7}}});
  CHECK(d[0].trace.size() == 20);
}

TEST_CASE("the discretizer recovers a digitized grid path") {
  const auto a = area(6, 1, 1, 2);
  const GridSpec g{6, 1};
  const Leg leg{{0.5, 0.5}, {5.5, 0.5}, 1.0, 0.0, 2.0};
  const auto ct = make_trace(a, {{0.5, 0.5}}, {{leg}}, 10, 1.0);
  const auto d = discretize_trace(ct, g, 1.0);
  REQUIRE(d[0].paths.size() >= 3);
  CHECK(d[0].paths[0] == digitize_trip({0, 0}, {5, 0}, Rational(1)));
  CHECK(d[0].paths[1] == Path{{{5, 0}, {5, 0}}});
  CHECK(d[0].paths[2] == Path{{{5, 0}, {5, 0}}});
  CHECK(d[0].trace.size() >= 10);

  const Leg fast{{0.5, 0.5}, {4.5, 0.5}, 2.0, 0.0, 0.0};
  const auto ct2 = make_trace(a, {{0.5, 0.5}}, {{fast}}, 4, 1.0);
  CHECK(discretize_trace(ct2, g, 1.0)[0].paths[0] == digitize_trip({0, 0}, {4, 0}, Rational(2)));
}

TEST_CASE("traffic proxy on fixed geometry") {
  const auto a = area(1000, 1000, 1, 1);
  const auto ct = make_trace(a, {{100, 100}, {200, 100}, {900, 900}}, {{}, {}, {}}, 50, 1.0);
  const std::vector<Flow> flows{{0, 1}, {0, 2}};
  const auto r = traffic_proxy(ct, flows, 250, 512, 512);
  REQUIRE(r.times.size() == 51);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    CHECK(r.cumulative[1][k] == doctest::Approx(512.0 * r.times[k]));
    CHECK(r.cumulative[2][k] == 0.0);
    CHECK(r.cumulative[0][k] == 0.0);
  }
  const std::vector<Flow> bad{{0, 7}};
  CHECK_THROWS_AS(traffic_proxy(ct, bad, 250, 512, 512), InputError);
}

TEST_CASE("traffic under mobility is bursty and monotone") {
  const auto ct = simulate_continuous(area(1500, 1500, 1.0, 5.0), 2, 4000, 1.0, 21);
  const std::vector<Flow> flows{{0, 1}};
  const auto r = traffic_proxy(ct, flows, 250, 512, 512);
  const auto& c = r.cumulative[1];
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] >= c[k - 1]);
  const auto segs = classify_segments(c);
  std::size_t flat = 0, ramp = 0;
  std::size_t covered = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    CHECK(segs[i].begin == covered);
    covered = segs[i].end;
    if (i) CHECK(segs[i].kind != segs[i - 1].kind);
    (segs[i].kind == Segment::Kind::kFlat ? flat : ramp) += 1;
  }
  CHECK(covered == c.size() - 1);
  CHECK(flat >= 2);
  CHECK(ramp >= 1);
}

TEST_CASE("segment classification") {
  const std::vector<double> c{0, 0, 0, 5, 10, 10, 12};
  const auto s = classify_segments(c);
  REQUIRE(s.size() == 4);
  CHECK(s[0].kind == Segment::Kind::kFlat);
  CHECK(s[0].begin == 0);
  CHECK(s[0].end == 2);
  CHECK(s[1].kind == Segment::Kind::kRamp);
  CHECK(s[1].end == 4);
  CHECK(s[2].kind == Segment::Kind::kFlat);
  CHECK(s[3].kind == Segment::Kind::kRamp);
  CHECK(s[3].end == 6);
}
