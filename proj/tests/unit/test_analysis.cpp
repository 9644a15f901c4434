#include <doctest.h>

#include "oracles/chain_oracle.hpp"

#include <rwmm/analysis.hpp>

#include <cmath>
#include <numeric>

using namespace rwmm;

namespace {

DiscreteModel iid_model(GridSpec g, std::vector<Rational> speeds) {
  return DiscreteModel{build_alphabet(g, std::move(speeds)), WaypointProcessSpec::iid_uniform(g)};
}

JointTrace joint_of(const LocationTrace& t) {
  const std::vector<LocationTrace> v{t};
  return joint_process(v);
}

}  // namespace

TEST_CASE("observables reject unbounded definitions") {
  CHECK_THROWS_AS(Observable(UserTable{{{Cell{0, 0}, INFINITY}}, 0.0, 0}), ConfigError);
  CHECK_THROWS_AS(Observable(UserTable{{}, NAN, 0}), ConfigError);
  CHECK_THROWS_AS(Observable(CylinderIndicator{{}, 0}), ConfigError);
  CHECK_THROWS_AS(Observable(NodePairWithinRange{0, 1, -1.0}), ConfigError);
  const Observable t(UserTable{{{Cell{0, 0}, -2.0}, {Cell{1, 0}, 5.0}}, 1.0, 0});
  CHECK(t.lower_bound() == -2.0);
  CHECK(t.upper_bound() == 5.0);
}

TEST_CASE("default checkpoints") {
  const auto c = default_checkpoints(1000, 4);
  CHECK(c == std::vector<std::size_t>{250, 500, 750, 1000});
  CHECK(default_checkpoints(3, 100).back() == 3);
}

TEST_CASE("time average of a constant observable is exact") {
  const auto model = iid_model({3, 3}, {Rational(1)});
  const auto run = simulate_joint(model, 1, 1000, 1);
  const Observable f(UserTable{{}, 0.375, 0});
  const auto cp = default_checkpoints(990, 10);
  const auto r = time_average(run.joint, f, cp);
  for (double v : r.partial_averages) CHECK(v == 0.375);
  CHECK(r.cauchy_width == 0.0);
  CHECK(r.converged);
}

TEST_CASE("single-cell grid: indicator average is one") {
  const auto model = iid_model({1, 1}, {Rational(1)});
  const auto run = simulate_node(model, 200, 5);
  const Observable f(CellIndicator{{0, 0}, 0});
  const auto r = time_average(run.trace, f, default_checkpoints(100, 10));
  CHECK(r.final_value == 1.0);
}

TEST_CASE("time averages match the stationary distribution of the explicit chain") {
  const GridSpec g{2, 2};
  const auto model = iid_model(g, {Rational(1)});
  const auto oracle_pi = oracle::stationary_locations(model.alphabet, model.waypoints);
  const auto run = simulate_joint(model, 1, 200000, 17);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Observable f(CellIndicator{g.cell(i), 0});
    const auto r = time_average(run.joint, f, default_checkpoints(199000, 50));
    CHECK(std::fabs(r.final_value - oracle_pi.cell_probability[i]) < 0.01);
  }
}

TEST_CASE("time averages on a local Markov model match the explicit chain") {
  const GridSpec g{3, 2};
  const DiscreteModel model{build_alphabet(g, std::vector<Rational>{Rational(1), Rational(2)}), make_local_markov(g)};
  const auto oracle_pi = oracle::stationary_locations(model.alphabet, model.waypoints, 1e-12);
  const auto run = simulate_joint(model, 1, 200000, 23);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Observable f(CellIndicator{g.cell(i), 0});
    const auto r = time_average(run.joint, f, default_checkpoints(199000, 50));
    CHECK(std::fabs(r.final_value - oracle_pi.cell_probability[i]) < 0.01);
  }
}

TEST_CASE("time averages are linear and bounded") {
  const GridSpec g{4, 4};
  const auto model = iid_model(g, {Rational(1), Rational(2)});
  const auto run = simulate_joint(model, 1, 20000, 2);
  std::map<Cell, double> va, vb, vsum;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const Cell c = g.cell(i);
    va[c] = static_cast<double>(i % 3);
    vb[c] = 0.5 * static_cast<double>(i % 5) - 1.0;
    vsum[c] = 2.0 * va[c] + 3.0 * vb[c];
  }
  const Observable fa(UserTable{va, 0.0, 0}), fb(UserTable{vb, 0.0, 0}), fs(UserTable{vsum, 0.0, 0});
  const auto cp = default_checkpoints(19000, 20);
  const auto ra = time_average(run.joint, fa, cp);
  const auto rb = time_average(run.joint, fb, cp);
  const auto rs = time_average(run.joint, fs, cp);
  for (std::size_t k = 0; k < cp.size(); ++k) {
    CHECK(std::fabs(rs.partial_averages[k] - (2.0 * ra.partial_averages[k] + 3.0 * rb.partial_averages[k])) < 1e-12);
    CHECK(ra.partial_averages[k] >= fa.lower_bound());
    CHECK(ra.partial_averages[k] <= fa.upper_bound());
    CHECK(rb.partial_averages[k] >= fb.lower_bound());
    CHECK(rb.partial_averages[k] <= fb.upper_bound());
  }
}

TEST_CASE("time average input validation") {
  const auto model = iid_model({2, 2}, {Rational(1)});
  const auto run = simulate_joint(model, 1, 100, 1);
  const Observable f(CellIndicator{{0, 0}, 0});
  const std::vector<std::size_t> too_far{50, 200};
  CHECK_THROWS_AS(time_average(run.joint, f, too_far), InputError);
  const std::vector<std::size_t> unsorted{50, 40};
  CHECK_THROWS_AS(time_average(run.joint, f, unsorted), InputError);
  const Observable pair(NodePairWithinRange{0, 1, 1.0});
  const std::vector<std::size_t> ok{50};
  CHECK_THROWS_AS(time_average(run.joint, pair, ok), InputError);
}

TEST_CASE("cylinder and pair observables") {
  LocationTrace a, b;
  a.cells = {{0, 0}, {1, 0}, {0, 0}, {1, 0}};
  b.node_id = 1;
  b.cells = {{0, 0}, {0, 0}, {3, 0}, {3, 0}};
  const std::vector<LocationTrace> v{a, b};
  const auto j = joint_process(v);
  const Observable cyl(CylinderIndicator{{{0, 0}, {1, 0}}, 0});
  CHECK(cyl.window() == 2);
  CHECK(cyl.evaluate(j, 0) == 1.0);
  CHECK(cyl.evaluate(j, 1) == 0.0);
  const Observable pair(NodePairWithinRange{0, 1, 1.0});
  CHECK(pair.nodes_needed() == 2);
  CHECK(pair.evaluate(j, 0) == 1.0);
  CHECK(pair.evaluate(j, 1) == 1.0);
  CHECK(pair.evaluate(j, 2) == 0.0);
  const std::vector<std::size_t> cp{3};
  CHECK(time_average(j, cyl, cp).final_value == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("cesaro estimate: certain and impossible events") {
  const auto single = iid_model({1, 1}, {Rational(1)});
  const auto certain = cesaro_measure(single, {0, {{0, 0}}}, 20, 50, 1);
  CHECK(certain.value == 1.0);
  CHECK(certain.prefix_values.size() == 50);

  // A unit-speed node never jumps two cells in one step.
  const auto model = iid_model({3, 1}, {Rational(1)});
  const auto impossible = cesaro_measure(model, {0, {{0, 0}, {2, 0}}}, 50, 200, 2);
  CHECK(impossible.value == 0.0);
}

TEST_CASE("cesaro estimate agrees with the time average") {
  const GridSpec g{2, 2};
  const auto model = iid_model(g, {Rational(1)});
  const auto c = cesaro_measure(model, {0, {{0, 0}}}, 400, 500, 3);
  const auto run = simulate_joint(model, 1, 100000, 4);
  const auto t = time_average(run.joint, Observable(CellIndicator{{0, 0}, 0}), default_checkpoints(99000, 10));
  CHECK(std::fabs(c.value - t.final_value) < 0.02);
  CHECK(cesaro_measure(model, {0, {{0, 0}}}, 40, 50, 3).prefix_values ==
        cesaro_measure(model, {0, {{0, 0}}}, 40, 50, 3).prefix_values);
}

TEST_CASE("ergodicity check") {
  const auto single = iid_model({1, 1}, {Rational(1)});
  const Observable f(CellIndicator{{0, 0}, 0});
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  const auto r1 = ergodicity_check(single, f, seeds, 100);
  CHECK(r1.spread == 0.0);
  CHECK(r1.pass);

  const auto model = iid_model({2, 2}, {Rational(1)});
  const std::vector<std::uint64_t> same{5, 5};
  CHECK(ergodicity_check(model, f, same, 1000).spread == 0.0);

  std::vector<std::uint64_t> ten(10);
  std::iota(ten.begin(), ten.end(), 100);
  const auto r = ergodicity_check(model, f, ten, 100000);
  CHECK(r.values.size() == 10);
  CHECK(r.spread < 0.02);
  CHECK(r.pass);

  const std::vector<std::uint64_t> one{1};
  CHECK_THROWS_AS(ergodicity_check(model, f, one, 100), InputError);
}

TEST_CASE("location histograms") {
  const GridSpec g{2, 1};
  LocationTrace t;
  t.cells = {{0, 0}, {1, 0}, {1, 0}, {1, 0}};
  const auto h = location_histogram(g, t);
  CHECK(h.total == 4);
  CHECK(h.counts == std::vector<std::uint64_t>{1, 3});
  CHECK(h.frequency({1, 0}) == 0.75);

  const auto jh = location_histogram(g, joint_of(t));
  CHECK(jh.per_node.size() == 1);
  CHECK(jh.pooled.counts == h.counts);
}

TEST_CASE("center cells are visited more often than corners") {
  const GridSpec g{5, 5};
  const auto model = iid_model(g, {Rational(1)});
  const auto run = simulate_joint(model, 1, 200000, 8);
  const auto h = location_histogram(g, run.joint).pooled;
  const double center = h.frequency({2, 2});
  for (Cell corner : {Cell{0, 0}, Cell{4, 0}, Cell{0, 4}, Cell{4, 4}}) CHECK(center > h.frequency(corner));
}

TEST_CASE("sample spread") {
  const std::vector<double> v{1.0, 3.0, 2.0};
  const auto s = sample_spread(v);
  CHECK(s.spread == 2.0);
  CHECK(s.stddev == doctest::Approx(1.0));
}
