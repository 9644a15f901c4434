#pragma once

#include "rwmm/geometry.hpp"
#include "rwmm/processes.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rwmm {

/// Location sequence of one node, one cell per time step.
///
/// trip_boundaries holds t(0) = 0, t(1), ..., t(n) for the n complete trips
/// encoded; cells[t(k)] is the k-th waypoint for every t(k) < cells.size().
struct LocationTrace {
  std::size_t node_id = 0;
  std::vector<Cell> cells;
  std::vector<std::size_t> trip_boundaries{0};

  std::size_t size() const { return cells.size(); }
  std::size_t trips() const { return trip_boundaries.size() - 1; }

  friend bool operator==(const LocationTrace&, const LocationTrace&) = default;
};

/// X_n tuples for all nodes, stored time-major.
struct JointTrace {
  std::size_t node_count = 0;
  std::vector<Cell> cells;  // cells[t * node_count + v]
  std::vector<std::string> warnings;

  std::size_t length() const { return node_count ? cells.size() / node_count : 0; }
  Cell at(std::size_t t, std::size_t node) const { return cells[t * node_count + node]; }
};

/// f(p): the first l(p) cells; the endpoint belongs to the next trip.
std::vector<Cell> encode_path(const Path& p);

/// F(p_0, p_1, ...) = f(p_0) f(p_1) ... with t(i) recorded.
/// Throws InputError naming the first index i where p_i does not end where
/// p_{i+1} starts.
LocationTrace encode_sequence(std::span<const Path> paths, std::size_t node_id = 0);
LocationTrace encode_sequence(const PathAlphabet& alphabet, std::span<const PathId> paths, std::size_t node_id = 0);

/// gamma_p(n) = l(p_0) + ... + l(p_{n-1}).
std::size_t gamma(std::span<const Path> paths, std::size_t n);
std::size_t gamma(const PathAlphabet& alphabet, std::span<const PathId> paths, std::size_t n);

/// T_{S*}^n: drops the first t(n) cells so the result starts at waypoint w_n.
LocationTrace variable_length_shift(const LocationTrace& trace, std::size_t n);

/// Keeps the first `length` cells and the trip boundaries that still fit.
LocationTrace truncate(const LocationTrace& trace, std::size_t length);

/// Pairs per-node traces time by time. Unequal lengths truncate to the
/// shortest and record a warning.
JointTrace joint_process(std::span<const LocationTrace> traces);

/// A discrete RWMM: path alphabet plus a waypoint process on the same grid.
struct DiscreteModel {
  PathAlphabet alphabet;
  WaypointProcessSpec waypoints;
};

/// Generating sequences kept next to their encoding.
struct NodeRun {
  std::vector<Cell> waypoints;
  std::vector<PathId> paths;
  LocationTrace trace;
};

/// Samples whole trips until the location trace reaches `horizon` cells.
/// The trace may overrun the horizon by less than one trip.
NodeRun simulate_node(const DiscreteModel& model, std::size_t horizon, std::uint64_t seed, std::size_t node_id = 0);

struct JointRun {
  std::vector<NodeRun> nodes;
  JointTrace joint;  // every node truncated to exactly `horizon` steps
};

JointRun simulate_joint(const DiscreteModel& model, std::size_t node_count, std::size_t horizon, std::uint64_t seed);

}  // namespace rwmm
