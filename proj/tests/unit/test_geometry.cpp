#include <doctest.h>

#include "oracles/digitizer_oracle.hpp"

#include <rwmm/geometry.hpp>

#include <algorithm>

using namespace rwmm;

namespace {
std::vector<Rational> speeds(std::initializer_list<long long> v) {
  std::vector<Rational> out;
  for (auto s : v) out.emplace_back(s);
  return out;
}
}  // namespace

TEST_CASE("pause path for identical endpoints") {
  const GridSpec g{1, 1};
  const auto fam = enumerate_paths(g, {0, 0}, {0, 0}, speeds({1}));
  REQUIRE(fam.paths.size() == 1);
  CHECK(fam.paths[0].cells == std::vector<Cell>{{0, 0}, {0, 0}});
  CHECK(fam.paths[0].length() == 1);
}

TEST_CASE("unit speed along a horizontal line") {
  const GridSpec g{4, 1};
  const auto fam = enumerate_paths(g, {0, 0}, {3, 0}, speeds({1}));
  REQUIRE(fam.paths.size() == 1);
  CHECK(fam.paths[0].cells == std::vector<Cell>{{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  CHECK(fam.paths[0].length() == 3);
}

TEST_CASE("two speeds give two distinct paths") {
  const GridSpec g{4, 1};
  const auto fam = enumerate_paths(g, {0, 0}, {3, 0}, speeds({3, 1}));
  REQUIRE(fam.paths.size() == 2);
  CHECK(fam.paths[0].length() == 3);
  CHECK(fam.paths[1].length() == 1);
  CHECK(fam.paths[1].cells == std::vector<Cell>{{0, 0}, {3, 0}});
}

TEST_CASE("speeds that digitize identically are deduplicated") {
  const GridSpec g{4, 1};
  // distance 2: speeds 2 and 3 both give the direct one-step path
  const auto fam = enumerate_paths(g, {3, 0}, {1, 0}, speeds({1, 2, 3}));
  CHECK(fam.paths.size() == 2);
}

TEST_CASE("rounding ties go to the smaller coordinate") {
  // speed 3/2 along x: the first sample sits at x = 1.5 exactly
  const auto p = digitize_trip({0, 0}, {3, 0}, Rational(3, 2));
  CHECK(p.cells == std::vector<Cell>{{0, 0}, {1, 0}, {3, 0}});
  const auto back = digitize_trip({3, 0}, {0, 0}, Rational(3, 2));
  // moving left, 3 - 1.5 = 1.5 rounds down to 1
  CHECK(back.cells == std::vector<Cell>{{3, 0}, {1, 0}, {0, 0}});
}

TEST_CASE("very large speeds clamp to a direct one-step path") {
  const auto p = digitize_trip({0, 0}, {3, 2}, Rational(1000000));
  CHECK(p.cells == std::vector<Cell>{{0, 0}, {3, 2}});
}

TEST_CASE("configuration errors") {
  const GridSpec g{2, 2};
  CHECK_THROWS_AS(enumerate_paths(g, {0, 0}, {1, 1}, {}), ConfigError);
  const std::vector<Rational> bad{Rational(0)};
  CHECK_THROWS_AS(enumerate_paths(g, {0, 0}, {1, 1}, bad), ConfigError);
  CHECK_THROWS_AS(enumerate_paths(g, {0, 0}, {2, 1}, speeds({1})), InputError);
  CHECK_THROWS_AS((GridSpec{0, 3}.validate()), ConfigError);
}

TEST_CASE("alphabet of a 1x2 grid") {
  const auto a = build_alphabet({2, 1}, speeds({1}));
  CHECK(a.size() == 4);
  CHECK(a.max_length() == 1);
  CHECK(a.family_size({0, 0}, {1, 0}) == 1);
  CHECK(a.family_size({1, 0}, {1, 0}) == 1);
}

TEST_CASE("alphabet of a single cell") {
  const auto a = build_alphabet({1, 1}, speeds({1, 2, 5}));
  CHECK(a.size() == 1);
  CHECK(a.max_length() == 1);
}

TEST_CASE("alphabet invariants on 2x2 and 3x3") {
  for (GridSpec g : {GridSpec{2, 2}, GridSpec{3, 3}}) {
    const auto a = build_alphabet(g, speeds({1, 2}));
    CHECK(a.max_length() >= 1);
    std::size_t counted = 0;
    for (std::size_t s = 0; s < g.cell_count(); ++s) {
      for (std::size_t d = 0; d < g.cell_count(); ++d) {
        const Cell src = g.cell(s), dst = g.cell(d);
        const auto fam = a.family(src, dst);
        REQUIRE_FALSE(fam.empty());
        if (src == dst) CHECK(fam.size() == 1);
        for (PathId id : fam) {
          const Path& p = a.path(id);
          CHECK(p.source() == src);
          CHECK(p.dest() == dst);
          CHECK(p.length() >= 1);
          CHECK(p.length() <= a.max_length());
          CHECK(a.find(p) == id);
          for (Cell c : p.cells) CHECK(g.contains(c));
        }
        counted += fam.size();
      }
    }
    CHECK(counted == a.size());
  }
}

TEST_CASE("alphabet is deterministic and independent of speed order") {
  const auto a = build_alphabet({3, 3}, speeds({1, 2}));
  const auto b = build_alphabet({3, 3}, speeds({2, 1, 2}));
  REQUIRE(a.size() == b.size());
  for (PathId i = 0; i < a.size(); ++i) CHECK(a.path(i) == b.path(i));
}

TEST_CASE("alphabet capacity error names the size") {
  try {
    build_alphabet({10, 10}, speeds({1, 2}), 1000);
    FAIL("expected a capacity error");
  } catch (const CapacityError& e) {
    CHECK(std::string(e.what()).find("100^2") != std::string::npos);
  }
}

TEST_CASE("digitizer matches the brute-force oracle up to 4x4") {
  const std::vector<long double> oracle_speeds{1.0L, 2.0L};
  for (int w = 1; w <= 4; ++w) {
    for (int h = 1; h <= 4; ++h) {
      const GridSpec g{w, h};
      const auto a = build_alphabet(g, speeds({1, 2}));
      for (std::size_t s = 0; s < g.cell_count(); ++s) {
        for (std::size_t d = 0; d < g.cell_count(); ++d) {
          const auto expected = oracle::family(g.cell(s), g.cell(d), oracle_speeds);
          const auto fam = a.family(g.cell(s), g.cell(d));
          REQUIRE(fam.size() == expected.size());
          for (std::size_t i = 0; i < fam.size(); ++i) CHECK(a.path(fam[i]).cells == expected[i]);
        }
      }
    }
  }
}

TEST_CASE("digitizer matches the oracle for fractional speeds") {
  const GridSpec g{6, 5};
  const std::vector<Rational> rs{Rational(1, 2), Rational(3, 2), Rational(7, 3)};
  for (std::size_t s = 0; s < g.cell_count(); ++s) {
    for (std::size_t d = 0; d < g.cell_count(); ++d) {
      for (const auto& v : rs) {
        CHECK(digitize_trip(g.cell(s), g.cell(d), v).cells ==
              oracle::digitize(g.cell(s), g.cell(d), static_cast<long double>(to_double(v))));
      }
    }
  }
}
