#include "rwmm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwmm {

namespace {

int sign(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Sign of a - b * sqrt(n), n > 0.
int compare_with_sqrt(const BigInt& a, const BigInt& b, const BigInt& n) {
  const int sa = sign(a);
  const int sb = sign(b);
  if (sb == 0) return sa;
  if (sa == 0) return -sb;
  if (sa != sb) return sa;
  const int sq = sign(BigInt(a * a - b * b * n));
  return sa > 0 ? sq : -sq;
}

// Nearest integer to num / (den * sqrt(n)), halves rounding down.
// That is the smallest r with value <= r + 1/2.
long long round_half_down(const BigInt& num, const BigInt& den, const BigInt& n) {
  const double estimate = num.convert_to<double>() / (den.convert_to<double>() * std::sqrt(n.convert_to<double>()));
  long long r = std::llround(estimate);
  // value > r + 1/2  <=>  2*num > (2r + 1) * den * sqrt(n)
  auto above = [&](long long k) { return compare_with_sqrt(BigInt(2 * num), BigInt((2 * k + 1) * den), n) > 0; };
  while (above(r)) ++r;
  while (!above(r - 1)) --r;
  return r;
}

}  // namespace

void GridSpec::validate() const {
  if (width < 1 || height < 1) {
    throw ConfigError("grid must be at least 1x1, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

Path digitize_trip(Cell source, Cell dest, const Rational& speed) {
  if (speed <= 0) throw ConfigError("speeds must be positive, got " + to_string(speed));
  if (source == dest) return Path{{source, source}};

  const long long dx = dest.x - source.x;
  const long long dy = dest.y - source.y;
  const BigInt n = dx * dx + dy * dy;
  const BigInt p = boost::multiprecision::numerator(speed);
  const BigInt q = boost::multiprecision::denominator(speed);

  // Smallest k >= 1 with k * p / q >= sqrt(n), i.e. k^2 p^2 >= n q^2.
  const BigInt target = n * q * q;
  const BigInt p2 = p * p;
  BigInt steps = boost::multiprecision::sqrt(BigInt(target / p2));
  if (steps < 1) steps = 1;
  while (steps > 1 && BigInt((steps - 1) * (steps - 1) * p2) >= target) --steps;
  while (BigInt(steps * steps * p2) < target) ++steps;
  const auto length = steps.convert_to<std::size_t>();

  Path path;
  path.cells.reserve(length + 1);
  path.cells.push_back(source);
  for (std::size_t k = 1; k < length; ++k) {
    // offset = d * k * v / |d| = (d * k * p) / (q * sqrt(n))
    const BigInt kp = BigInt(k) * p;
    const long long ox = round_half_down(BigInt(dx) * kp, q, n);
    const long long oy = round_half_down(BigInt(dy) * kp, q, n);
    path.cells.push_back(Cell{source.x + static_cast<int>(ox), source.y + static_cast<int>(oy)});
  }
  path.cells.push_back(dest);
  return path;
}

PathFamily enumerate_paths(const GridSpec& grid, Cell source, Cell dest,
                           std::span<const Rational> speeds) {
  grid.validate();
  if (speeds.empty()) throw ConfigError("speed set must not be empty");
  if (!grid.contains(source) || !grid.contains(dest)) throw InputError("trip endpoints must lie inside the grid");

  std::vector<Rational> ordered(speeds.begin(), speeds.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  PathFamily family{source, dest, {}};
  for (const auto& v : ordered) {
    Path p = digitize_trip(source, dest, v);
    if (std::find(family.paths.begin(), family.paths.end(), p) == family.paths.end()) {
      family.paths.push_back(std::move(p));
    }
  }
  return family;
}

PathAlphabet build_alphabet(const GridSpec& grid, std::span<const Rational> speeds, std::size_t cap) {
  grid.validate();
  if (speeds.empty()) throw ConfigError("speed set must not be empty");
  const std::size_t cells = grid.cell_count();
  const long double work = static_cast<long double>(cells) * cells * speeds.size();
  if (work > static_cast<long double>(cap)) {
    throw CapacityError("path alphabet enumeration needs " + std::to_string(cells) + "^2 x " +
                        std::to_string(speeds.size()) + " digitizations, over the cap of " + std::to_string(cap));
  }

  std::vector<PathFamily> families;
  families.reserve(cells * cells);
  for (std::size_t s = 0; s < cells; ++s) {
    for (std::size_t d = 0; d < cells; ++d) {
      families.push_back(enumerate_paths(grid, grid.cell(s), grid.cell(d), speeds));
    }
  }
  std::vector<Rational> ordered(speeds.begin(), speeds.end());
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());
  return PathAlphabet(grid, std::move(ordered), std::move(families));
}

PathAlphabet::PathAlphabet(GridSpec grid, std::vector<Rational> speeds, std::vector<PathFamily> families)
    : grid_(grid), speeds_(std::move(speeds)) {
  const std::size_t cells = grid_.cell_count();
  if (families.size() != cells * cells) throw InputError("path alphabet needs one family per ordered cell pair");

  family_offset_.assign(cells * cells + 1, 0);
  for (auto& fam : families) {
    const std::size_t slot = pair_index(fam.source, fam.dest);
    if (fam.paths.empty()) throw InputError("empty path family");
    family_offset_[slot + 1] = fam.paths.size();
  }
  for (std::size_t i = 0; i < cells * cells; ++i) family_offset_[i + 1] += family_offset_[i];

  paths_.resize(family_offset_.back());
  family_ids_.resize(family_offset_.back());
  for (auto& fam : families) {
    std::size_t at = family_offset_[pair_index(fam.source, fam.dest)];
    for (auto& p : fam.paths) {
      if (p.source() != fam.source || p.dest() != fam.dest || p.length() < 1) {
        throw InputError("path does not connect its family's waypoints");
      }
      max_length_ = std::max(max_length_, p.length());
      family_ids_[at] = static_cast<PathId>(at);
      paths_[at++] = std::move(p);
    }
  }
}

std::size_t PathAlphabet::pair_index(Cell source, Cell dest) const {
  if (!grid_.contains(source) || !grid_.contains(dest)) throw InputError("cell outside the grid");
  return grid_.index(source) * grid_.cell_count() + grid_.index(dest);
}

const Path& PathAlphabet::path(PathId id) const {
  if (id >= paths_.size()) {
    throw InputError("path index " + std::to_string(id) + " outside alphabet of size " + std::to_string(paths_.size()));
  }
  return paths_[id];
}

std::span<const PathId> PathAlphabet::family(Cell source, Cell dest) const {
  const std::size_t slot = pair_index(source, dest);
  return std::span<const PathId>(family_ids_).subspan(family_offset_[slot], family_offset_[slot + 1] - family_offset_[slot]);
}

bool PathAlphabet::in_family(PathId id, Cell source, Cell dest) const {
  const std::size_t slot = pair_index(source, dest);
  return id >= family_offset_[slot] && id < family_offset_[slot + 1];
}

std::optional<PathId> PathAlphabet::find(const Path& p) const {
  if (p.cells.size() < 2 || !grid_.contains(p.source()) || !grid_.contains(p.dest())) return std::nullopt;
  for (PathId id : family(p.source(), p.dest())) {
    if (paths_[id] == p) return id;
  }
  return std::nullopt;
}

}  // namespace rwmm
