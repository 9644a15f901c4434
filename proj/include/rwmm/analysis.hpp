#pragma once

#include "rwmm/location.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace rwmm {

using LocationCylinder = Cylinder<Cell>;

/// f(x) = 1 when the node sits in `cell` at time 0.
struct CellIndicator {
  Cell cell;
  std::size_t node = 0;
};

/// f(x) = 1 when the node's next symbols match `symbols`.
struct CylinderIndicator {
  std::vector<Cell> symbols;
  std::size_t node = 0;
};

/// f(x) = 1 when two nodes are within `radius` cells (Euclidean, centers).
struct NodePairWithinRange {
  std::size_t first = 0;
  std::size_t second = 1;
  double radius = 1.0;
};

/// f(x) = values[cell], default_value for unlisted cells.
struct UserTable {
  std::map<Cell, double> values;
  double default_value = 0.0;
  std::size_t node = 0;
};

/// A bounded observable on joint location sequences.
class Observable {
 public:
  using Kind = std::variant<CellIndicator, CylinderIndicator, NodePairWithinRange, UserTable>;

  /// Throws ConfigError for unbounded or malformed observables.
  explicit Observable(Kind kind);

  const Kind& kind() const { return kind_; }

  /// f evaluated on the sequence shifted by `k`.
  double evaluate(const JointTrace& trace, std::size_t k) const;

  /// Number of consecutive time steps f reads (1 except for cylinders).
  std::size_t window() const;
  std::size_t nodes_needed() const;
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

 private:
  Kind kind_;
  double lower_ = 0.0;
  double upper_ = 1.0;
};

struct ConvergenceReport {
  std::vector<std::size_t> checkpoints;
  std::vector<double> partial_averages;
  double final_value = 0.0;
  double cauchy_width = 0.0;  // max - min of the last `window` partial averages
  std::size_t window = 10;
  double tolerance = 0.0;
  bool converged = false;
};

/// `count` evenly spaced checkpoints ending at n.
std::vector<std::size_t> default_checkpoints(std::size_t n, std::size_t count = 100);

/// Partial time averages <f>_n at each checkpoint, in one pass.
///
/// The tolerance defaults to 3/sqrt(n) at the final checkpoint.
ConvergenceReport time_average(const JointTrace& trace, const Observable& f, std::span<const std::size_t> checkpoints,
                               std::optional<double> tolerance = std::nullopt, std::size_t window = 10);
ConvergenceReport time_average(const LocationTrace& trace, const Observable& f,
                               std::span<const std::size_t> checkpoints,
                               std::optional<double> tolerance = std::nullopt, std::size_t window = 10);

struct CesaroEstimate {
  double value = 0.0;
  std::vector<double> prefix_values;  // Cesaro average over k < n, n = 1..horizon
  std::vector<double> shifted_measures;  // ensemble estimate of mu(T^{-k} A)
  std::size_t runs = 0;
  std::size_t horizon = 0;
};

/// Estimates the stationary mean of a single-node location cylinder: the
/// ensemble frequency of the event at each offset k, Cesaro-averaged over
/// k < horizon. Run r uses seed derive_seed(seed, kRun, r).
CesaroEstimate cesaro_measure(const DiscreteModel& model, const LocationCylinder& event, std::size_t runs,
                              std::size_t horizon, std::uint64_t seed);

struct SpreadReport {
  std::vector<std::uint64_t> seeds;
  std::vector<double> values;  // <f>_horizon per seed
  double spread = 0.0;
  double stddev = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Runs one independent joint simulation per seed and compares <f>_horizon.
SpreadReport ergodicity_check(const DiscreteModel& model, const Observable& f, std::span<const std::uint64_t> seeds,
                              std::size_t horizon, std::size_t node_count = 1, double tolerance = 0.02);

struct Histogram {
  GridSpec grid;
  std::vector<std::uint64_t> counts;  // row-major over cells
  std::uint64_t total = 0;

  double frequency(Cell c) const;
};

struct JointHistogram {
  std::vector<Histogram> per_node;
  Histogram pooled;
};

Histogram location_histogram(const GridSpec& grid, const LocationTrace& trace);
JointHistogram location_histogram(const GridSpec& grid, const JointTrace& trace);

/// Spread and stddev of a sample.
struct SampleSpread {
  double spread = 0.0;
  double stddev = 0.0;
};
SampleSpread sample_spread(std::span<const double> values);

}  // namespace rwmm
