#pragma once

// Brute-force digitizer used only by tests. Works in long double and
// detects rounding ties explicitly instead of using exact integer algebra.

#include <rwmm/geometry.hpp>

#include <cmath>
#include <vector>

namespace rwmm::oracle {

inline long long nearest_half_down(long double v) {
  const long double fl = std::floor(v);
  const long double frac = v - fl;
  if (std::fabs(frac - 0.5L) < 1e-12L) return static_cast<long long>(fl);
  return static_cast<long long>(std::llround(v));
}

inline std::vector<Cell> digitize(Cell a, Cell b, long double speed) {
  if (a == b) return {a, a};
  const long double dx = b.x - a.x, dy = b.y - a.y;
  const long double d = std::sqrt(dx * dx + dy * dy);
  long long steps = 1;
  while (static_cast<long double>(steps) * speed < d - 1e-12L) ++steps;
  std::vector<Cell> cells{a};
  for (long long k = 1; k < steps; ++k) {
    const long double t = static_cast<long double>(k) * speed / d;
    cells.push_back(Cell{a.x + static_cast<int>(nearest_half_down(dx * t)), a.y + static_cast<int>(nearest_half_down(dy * t))});
  }
  cells.push_back(b);
  return cells;
}

inline std::vector<std::vector<Cell>> family(Cell a, Cell b, const std::vector<long double>& sorted_speeds) {
  std::vector<std::vector<Cell>> out;
  for (long double v : sorted_speeds) {
    auto p = digitize(a, b, v);
    bool dup = false;
    for (const auto& q : out) dup = dup || q == p;
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace rwmm::oracle
