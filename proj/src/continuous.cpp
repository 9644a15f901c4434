#include "rwmm/continuous.hpp"

#include "rwmm/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwmm {

namespace {

constexpr double kTieEps = 1e-9;

void validate_time(double duration, double dt) {
  if (!(duration > 0) || !std::isfinite(duration)) throw ConfigError("duration must be positive");
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
}

std::size_t step_count(double duration, double dt) {
  return static_cast<std::size_t>(std::floor(duration / dt + kTieEps));
}

int nearest_index(double coordinate, double cell_size, int cells) {
  const double u = coordinate / cell_size - 0.5;
  const int r = static_cast<int>(std::ceil(u - 0.5 - kTieEps));
  return std::clamp(r, 0, cells - 1);
}

Point along(const Leg& leg, double elapsed) {
  const double d = distance(leg.origin, leg.destination);
  if (d == 0.0) return leg.origin;
  const double f = std::clamp(elapsed * leg.speed / d, 0.0, 1.0);
  return Point{leg.origin.x + f * (leg.destination.x - leg.origin.x),
               leg.origin.y + f * (leg.destination.y - leg.origin.y)};
}

void fill_samples(ContinuousTrace& ct) {
  const std::size_t steps = step_count(ct.duration, ct.dt);
  ct.samples.assign(ct.node_count(), {});
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    auto& s = ct.samples[v];
    s.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
      Point p = ct.position(v, static_cast<double>(k) * ct.dt);
      p.x = std::clamp(p.x, 0.0, ct.area.width);
      p.y = std::clamp(p.y, 0.0, ct.area.height);
      s.push_back(p);
    }
  }
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ContinuousAreaSpec::validate() const {
  std::vector<ConfigIssue> issues;
  if (!(width > 0) || !(height > 0) || !std::isfinite(width) || !std::isfinite(height)) {
    issues.push_back({0, "area sides must be positive"});
  }
  if (!(min_speed > 0)) {
    issues.push_back({0, "min_speed must be > 0 (a zero minimum speed makes the average speed decay to zero)"});
  }
  if (!(max_speed >= min_speed) || !std::isfinite(max_speed)) issues.push_back({0, "max_speed must be >= min_speed"});
  if (!(pause_time >= 0) || !std::isfinite(pause_time)) issues.push_back({0, "pause_time must be >= 0"});
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

Point ContinuousTrace::position(std::size_t node, double t) const {
  const auto& path = legs.at(node);
  if (path.empty() || t <= path.front().start_time) return initial.at(node);
  auto it = std::upper_bound(path.begin(), path.end(), t, [](double time, const Leg& leg) { return time < leg.start_time; });
  const Leg& leg = *(it - 1);
  return along(leg, t - leg.start_time);
}

ContinuousTrace make_trace(const ContinuousAreaSpec& area, std::vector<Point> initial,
                           std::vector<std::vector<Leg>> legs, double duration, double dt) {
  area.validate();
  validate_time(duration, dt);
  if (legs.size() != initial.size()) throw InputError("need one leg list per node");
  ContinuousTrace ct;
  ct.area = area;
  ct.duration = duration;
  ct.dt = dt;
  ct.initial = std::move(initial);
  ct.legs = std::move(legs);
  fill_samples(ct);
  return ct;
}

ContinuousTrace simulate_continuous(const ContinuousAreaSpec& area, std::size_t nodes, double duration, double dt,
                                    std::uint64_t seed) {
  area.validate();
  validate_time(duration, dt);
  std::vector<Point> initial(nodes);
  std::vector<std::vector<Leg>> legs(nodes);
  for (std::size_t v = 0; v < nodes; ++v) {
    Rng rng = make_rng(seed, Stream::kContinuous, v);
    std::uniform_real_distribution<double> ux(0.0, area.width);
    std::uniform_real_distribution<double> uy(0.0, area.height);
    std::uniform_real_distribution<double> us(area.min_speed, area.max_speed);
    auto draw_speed = [&] { return area.min_speed == area.max_speed ? area.min_speed : us(rng); };

    Point here{ux(rng), uy(rng)};
    initial[v] = here;
    double t = 0.0;
    while (t < duration) {
      Leg leg;
      leg.origin = here;
      leg.destination = Point{ux(rng), uy(rng)};
      leg.speed = draw_speed();
      leg.start_time = t;
      leg.pause = area.pause_time;
      t = leg.end_time();
      here = leg.destination;
      legs[v].push_back(leg);
    }
  }
  return make_trace(area, std::move(initial), std::move(legs), duration, dt);
}

Cell nearest_cell(const ContinuousAreaSpec& area, const GridSpec& grid, Point p) {
  return Cell{nearest_index(p.x, area.width / grid.width, grid.width),
              nearest_index(p.y, area.height / grid.height, grid.height)};
}

std::vector<DiscretizedNode> discretize_trace(const ContinuousTrace& ct, const GridSpec& grid, double dt) {
  grid.validate();
  validate_time(ct.duration, dt);
  const std::size_t total_steps = std::max<std::size_t>(1, step_count(ct.duration, dt));
  std::vector<DiscretizedNode> out(ct.node_count());
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    auto& paths = out[v].paths;
    std::size_t steps = 0;
    Cell here = nearest_cell(ct.area, grid, ct.initial[v]);
    for (const Leg& leg : ct.legs[v]) {
      const Cell from = nearest_cell(ct.area, grid, leg.origin);
      const Cell to = nearest_cell(ct.area, grid, leg.destination);
      const auto length = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(leg.travel_time() / dt - kTieEps)));
      Path p;
      p.cells.reserve(length + 1);
      p.cells.push_back(from);
      for (std::size_t k = 1; k < length; ++k) {
        p.cells.push_back(nearest_cell(ct.area, grid, along(leg, static_cast<double>(k) * dt)));
      }
      p.cells.push_back(to);
      steps += p.length();
      paths.push_back(std::move(p));
      const auto pauses = static_cast<std::size_t>(std::llround(leg.pause / dt));
      for (std::size_t i = 0; i < pauses; ++i) paths.push_back(Path{{to, to}});
      steps += pauses;
      here = to;
    }
    while (steps < total_steps) {
      paths.push_back(Path{{here, here}});
      ++steps;
    }
    out[v].trace = encode_sequence(paths, v);
  }
  return out;
}

TrafficReport traffic_proxy(const ContinuousTrace& ct, std::span<const Flow> flows, double range, double bitrate,
                            double packet_size) {
  for (const Flow& f : flows) {
    if (f.source >= ct.node_count() || f.sink >= ct.node_count()) {
      throw InputError("flow " + std::to_string(f.source) + "->" + std::to_string(f.sink) + " references a missing node");
    }
  }
  if (!(range >= 0) || !(bitrate >= 0) || !(packet_size > 0)) {
    throw ConfigError("range and bitrate must be >= 0 and packet_size > 0");
  }
  TrafficReport report;
  report.flows.assign(flows.begin(), flows.end());
  report.range = range;
  report.bitrate = bitrate;
  report.packet_size = packet_size;
  const std::size_t steps = ct.steps();
  report.times.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) report.times.push_back(static_cast<double>(k) * ct.dt);
  report.cumulative.assign(ct.node_count(), std::vector<double>(steps + 1, 0.0));

  const double batch = bitrate * ct.dt;
  for (std::size_t k = 1; k <= steps; ++k) {
    for (auto& c : report.cumulative) c[k] = c[k - 1];
    for (const Flow& f : flows) {
      if (distance(ct.samples[f.source][k - 1], ct.samples[f.sink][k - 1]) <= range) {
        report.cumulative[f.sink][k] += batch;
      }
    }
  }
  return report;
}

std::vector<Segment> classify_segments(std::span<const double> cumulative) {
  std::vector<Segment> out;
  for (std::size_t k = 1; k < cumulative.size(); ++k) {
    const auto kind = cumulative[k] > cumulative[k - 1] ? Segment::Kind::kRamp : Segment::Kind::kFlat;
    if (!out.empty() && out.back().kind == kind) {
      out.back().end = k;
    } else {
      out.push_back(Segment{kind, k - 1, k});
    }
  }
  return out;
}

}  // namespace rwmm
