#pragma once

#include "rwmm/errors.hpp"
#include "rwmm/rational.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rwmm {

/// A cell of the discrete area. Cells double as waypoints.
struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Rectangular grid of width x height cells.
struct GridSpec {
  int width = 1;
  int height = 1;

  /// Throws ConfigError unless both sides are at least 1.
  void validate() const;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  bool contains(Cell c) const { return c.x >= 0 && c.x < width && c.y >= 0 && c.y < height; }

  /// Row-major index, y * width + x.
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.x);
  }
  Cell cell(std::size_t index) const {
    return Cell{static_cast<int>(index % static_cast<std::size_t>(width)),
                static_cast<int>(index / static_cast<std::size_t>(width))};
  }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// A digitized trip: one cell per time step, cells.front() the source
/// waypoint and cells.back() the destination. length() >= 1.
struct Path {
  std::vector<Cell> cells;

  std::size_t length() const { return cells.size() - 1; }
  Cell source() const { return cells.front(); }
  Cell dest() const { return cells.back(); }

  friend bool operator==(const Path&, const Path&) = default;
};

/// The finite set of paths between one ordered waypoint pair.
struct PathFamily {
  Cell source;
  Cell dest;
  std::vector<Path> paths;
};

using PathId = std::uint32_t;

/// Union of all path families over a grid, with stable path ids.
///
/// Ids are assigned by iterating sources in row-major order, then
/// destinations in row-major order, then family order (ascending speed).
/// Immutable after construction.
class PathAlphabet {
 public:
  PathAlphabet(GridSpec grid, std::vector<Rational> speeds, std::vector<PathFamily> families);

  const GridSpec& grid() const { return grid_; }
  const std::vector<Rational>& speeds() const { return speeds_; }

  std::size_t size() const { return paths_.size(); }
  std::span<const Path> paths() const { return paths_; }
  const Path& path(PathId id) const;

  /// Ids of P_{source,dest}.
  std::span<const PathId> family(Cell source, Cell dest) const;
  std::size_t family_size(Cell source, Cell dest) const { return family(source, dest).size(); }
  bool in_family(PathId id, Cell source, Cell dest) const;

  /// L, the longest path length.
  std::size_t max_length() const { return max_length_; }

  std::optional<PathId> find(const Path& p) const;

 private:
  std::size_t pair_index(Cell source, Cell dest) const;

  GridSpec grid_;
  std::vector<Rational> speeds_;
  std::vector<Path> paths_;
  std::vector<std::size_t> family_offset_;  // size |S|^2 + 1, into family_ids_
  std::vector<PathId> family_ids_;
  std::size_t max_length_ = 0;
};

/// Digitizes the straight trip source -> dest at one speed (cells per time
/// step). Samples at k = 1..l-1 are rounded to the nearest cell, ties going
/// to the smaller coordinate; l is the smallest k >= 1 with k * speed >= the
/// Euclidean distance, and the final cell is dest. source == dest yields the
/// pause path [source, source].
Path digitize_trip(Cell source, Cell dest, const Rational& speed);

PathFamily enumerate_paths(const GridSpec& grid, Cell source, Cell dest,
                           std::span<const Rational> speeds);

PathAlphabet build_alphabet(const GridSpec& grid, std::span<const Rational> speeds,
                            std::size_t cap = enumeration_cap());

/// Squared Euclidean distance between cell centers.
inline long long squared_distance(Cell a, Cell b) {
  const long long dx = a.x - b.x;
  const long long dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace rwmm
