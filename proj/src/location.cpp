#include "rwmm/location.hpp"

#include <algorithm>

namespace rwmm {

std::vector<Cell> encode_path(const Path& p) {
  return std::vector<Cell>(p.cells.begin(), p.cells.end() - 1);
}

LocationTrace encode_sequence(std::span<const Path> paths, std::size_t node_id) {
  LocationTrace trace;
  trace.node_id = node_id;
  trace.trip_boundaries.reserve(paths.size() + 1);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = paths[i];
    if (p.cells.size() < 2) throw InputError("path " + std::to_string(i) + " has no steps");
    if (i + 1 < paths.size() && p.dest() != paths[i + 1].source()) {
      throw InputError("path " + std::to_string(i) + " ends away from the start of path " + std::to_string(i + 1));
    }
    trace.cells.insert(trace.cells.end(), p.cells.begin(), p.cells.end() - 1);
    trace.trip_boundaries.push_back(trace.cells.size());
  }
  return trace;
}

LocationTrace encode_sequence(const PathAlphabet& alphabet, std::span<const PathId> paths, std::size_t node_id) {
  LocationTrace trace;
  trace.node_id = node_id;
  trace.trip_boundaries.reserve(paths.size() + 1);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const Path& p = alphabet.path(paths[i]);
    if (i + 1 < paths.size() && p.dest() != alphabet.path(paths[i + 1]).source()) {
      throw InputError("path " + std::to_string(i) + " ends away from the start of path " + std::to_string(i + 1));
    }
    trace.cells.insert(trace.cells.end(), p.cells.begin(), p.cells.end() - 1);
    trace.trip_boundaries.push_back(trace.cells.size());
  }
  return trace;
}

std::size_t gamma(std::span<const Path> paths, std::size_t n) {
  if (n > paths.size()) throw RangeError("gamma(" + std::to_string(n) + ") needs that many paths");
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += paths[i].length();
  return total;
}

std::size_t gamma(const PathAlphabet& alphabet, std::span<const PathId> paths, std::size_t n) {
  if (n > paths.size()) throw RangeError("gamma(" + std::to_string(n) + ") needs that many paths");
  std::size_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += alphabet.path(paths[i]).length();
  return total;
}

LocationTrace variable_length_shift(const LocationTrace& trace, std::size_t n) {
  if (n > trace.trips()) {
    throw RangeError("cannot shift by " + std::to_string(n) + " trips; trace holds " + std::to_string(trace.trips()));
  }
  const std::size_t offset = trace.trip_boundaries[n];
  LocationTrace out;
  out.node_id = trace.node_id;
  out.cells.assign(trace.cells.begin() + static_cast<std::ptrdiff_t>(offset), trace.cells.end());
  out.trip_boundaries.clear();
  for (std::size_t k = n; k < trace.trip_boundaries.size(); ++k) out.trip_boundaries.push_back(trace.trip_boundaries[k] - offset);
  return out;
}

LocationTrace truncate(const LocationTrace& trace, std::size_t length) {
  if (length >= trace.cells.size()) return trace;
  LocationTrace out;
  out.node_id = trace.node_id;
  out.cells.assign(trace.cells.begin(), trace.cells.begin() + static_cast<std::ptrdiff_t>(length));
  out.trip_boundaries.clear();
  for (std::size_t t : trace.trip_boundaries) {
    if (t > length) break;
    out.trip_boundaries.push_back(t);
  }
  return out;
}

JointTrace joint_process(std::span<const LocationTrace> traces) {
  JointTrace joint;
  joint.node_count = traces.size();
  if (traces.empty()) return joint;
  std::size_t shortest = traces.front().size();
  std::size_t longest = shortest;
  for (const auto& t : traces) {
    shortest = std::min(shortest, t.size());
    longest = std::max(longest, t.size());
  }
  if (shortest != longest) {
    joint.warnings.push_back("node traces differ in length (" + std::to_string(shortest) + " to " +
                             std::to_string(longest) + "); truncated to " + std::to_string(shortest));
  }
  joint.cells.resize(shortest * traces.size());
  for (std::size_t t = 0; t < shortest; ++t) {
    for (std::size_t v = 0; v < traces.size(); ++v) joint.cells[t * traces.size() + v] = traces[v].cells[t];
  }
  return joint;
}

NodeRun simulate_node(const DiscreteModel& model, std::size_t horizon, std::uint64_t seed, std::size_t node_id) {
  if (!(model.alphabet.grid() == model.waypoints.grid())) {
    throw InputError("waypoint process and alphabet use different grids");
  }
  NodeRun run;
  run.trace.node_id = node_id;
  const std::uint64_t node_seed = derive_seed(seed, Stream::kRun, node_id);
  WaypointSampler waypoints(model.waypoints, node_seed);
  PathSampler paths(model.alphabet, node_seed);

  run.waypoints.push_back(waypoints.next());
  while (run.trace.cells.size() < horizon) {
    const Cell next = waypoints.next();
    const PathId id = paths.next(run.waypoints.back(), next);
    const Path& p = model.alphabet.path(id);
    run.trace.cells.insert(run.trace.cells.end(), p.cells.begin(), p.cells.end() - 1);
    run.trace.trip_boundaries.push_back(run.trace.cells.size());
    run.waypoints.push_back(next);
    run.paths.push_back(id);
  }
  return run;
}

JointRun simulate_joint(const DiscreteModel& model, std::size_t node_count, std::size_t horizon, std::uint64_t seed) {
  JointRun run;
  std::vector<LocationTrace> truncated;
  run.nodes.reserve(node_count);
  truncated.reserve(node_count);
  for (std::size_t v = 0; v < node_count; ++v) {
    run.nodes.push_back(simulate_node(model, horizon, seed, v));
    truncated.push_back(truncate(run.nodes.back().trace, horizon));
  }
  run.joint = joint_process(truncated);
  return run;
}

}  // namespace rwmm
