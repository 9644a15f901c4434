#pragma once

#include "rwmm/geometry.hpp"
#include "rwmm/location.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace rwmm {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

/// Rectangle [0, width] x [0, height] in meters, speeds in m/s.
struct ContinuousAreaSpec {
  double width = 1.0;
  double height = 1.0;
  double min_speed = 1.0;
  double max_speed = 1.0;
  double pause_time = 0.0;

  /// Throws ConfigError unless 0 < min_speed <= max_speed and the area is non-empty.
  void validate() const;
};

/// One straight trip at constant speed, followed by a pause at the destination.
struct Leg {
  Point origin;
  Point destination;
  double speed = 1.0;
  double start_time = 0.0;
  double pause = 0.0;

  double travel_time() const { return distance(origin, destination) / speed; }
  double arrival_time() const { return start_time + travel_time(); }
  double end_time() const { return arrival_time() + pause; }
};

struct ContinuousTrace {
  ContinuousAreaSpec area;
  double duration = 0.0;
  double dt = 1.0;
  std::vector<Point> initial;                 // per node
  std::vector<std::vector<Leg>> legs;         // per node, in time order
  std::vector<std::vector<Point>> samples;    // per node, at t = k * dt, k = 0..steps()

  std::size_t node_count() const { return initial.size(); }
  std::size_t steps() const { return samples.empty() ? 0 : samples.front().size() - 1; }

  /// Exact position from the legs.
  Point position(std::size_t node, double t) const;
};

/// Classic RWMM: uniform waypoints over the rectangle, speeds uniform on
/// [min_speed, max_speed], positions sampled every dt.
ContinuousTrace simulate_continuous(const ContinuousAreaSpec& area, std::size_t nodes, double duration, double dt,
                                    std::uint64_t seed);

/// Builds a trace from explicit legs and fills in the samples.
ContinuousTrace make_trace(const ContinuousAreaSpec& area, std::vector<Point> initial,
                           std::vector<std::vector<Leg>> legs, double duration, double dt);

/// Nearest cell when the area is tiled uniformly by the grid; ties go to the
/// smaller index.
Cell nearest_cell(const ContinuousAreaSpec& area, const GridSpec& grid, Point p);

struct DiscretizedNode {
  std::vector<Path> paths;
  LocationTrace trace;
};

/// Snapshots each leg every dt from its own start, one cell per step.
/// Pauses become runs of pause paths; nodes are padded with pause paths up to
/// floor(duration / dt) steps.
std::vector<DiscretizedNode> discretize_trace(const ContinuousTrace& ct, const GridSpec& grid, double dt);

struct Flow {
  std::size_t source = 0;
  std::size_t sink = 1;

  friend bool operator==(const Flow&, const Flow&) = default;
};

struct TrafficReport {
  std::vector<Flow> flows;
  double range = 0.0;
  double bitrate = 0.0;  // bytes per second
  double packet_size = 0.0;
  std::vector<double> times;                    // k * dt
  std::vector<std::vector<double>> cumulative;  // per node, bytes received by times[k]
};

/// Single-hop disk model: during step k every flow whose endpoints were
/// within `range` at the start of the step delivers bitrate * dt bytes.
TrafficReport traffic_proxy(const ContinuousTrace& ct, std::span<const Flow> flows, double range, double bitrate,
                            double packet_size);

struct Segment {
  enum class Kind { kFlat, kRamp };
  Kind kind;
  std::size_t begin = 0;  // step index
  std::size_t end = 0;    // one past the last step
};

/// Maximal runs of zero and positive per-step increments.
std::vector<Segment> classify_segments(std::span<const double> cumulative);

}  // namespace rwmm
