#include "rwmm/analysis.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rwmm {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

JointTrace as_joint(const LocationTrace& trace) {
  JointTrace joint;
  joint.node_count = 1;
  joint.cells = trace.cells;
  return joint;
}

}  // namespace

Observable::Observable(Kind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const CellIndicator&) {},
                 [](const CylinderIndicator& c) {
                   if (c.symbols.empty()) throw ConfigError("cylinder observable needs at least one cell");
                 },
                 [](const NodePairWithinRange& p) {
                   if (!std::isfinite(p.radius) || p.radius < 0) throw ConfigError("pair radius must be finite and >= 0");
                   if (p.first == p.second) throw ConfigError("pair observable needs two distinct nodes");
                 },
                 [this](const UserTable& t) {
                   if (!std::isfinite(t.default_value)) throw ConfigError("observable table must be bounded");
                   lower_ = upper_ = t.default_value;
                   for (const auto& [cell, v] : t.values) {
                     if (!std::isfinite(v)) throw ConfigError("observable table must be bounded");
                     lower_ = std::min(lower_, v);
                     upper_ = std::max(upper_, v);
                   }
                 },
             },
             kind_);
}

std::size_t Observable::window() const {
  if (const auto* c = std::get_if<CylinderIndicator>(&kind_)) return c->symbols.size();
  return 1;
}

std::size_t Observable::nodes_needed() const {
  return std::visit(Overloaded{
                        [](const NodePairWithinRange& p) { return std::max(p.first, p.second) + 1; },
                        [](const auto& single) { return single.node + 1; },
                    },
                    kind_);
}

double Observable::evaluate(const JointTrace& trace, std::size_t k) const {
  return std::visit(Overloaded{
                        [&](const CellIndicator& c) { return trace.at(k, c.node) == c.cell ? 1.0 : 0.0; },
                        [&](const CylinderIndicator& c) {
                          for (std::size_t i = 0; i < c.symbols.size(); ++i) {
                            if (trace.at(k + i, c.node) != c.symbols[i]) return 0.0;
                          }
                          return 1.0;
                        },
                        [&](const NodePairWithinRange& p) {
                          const double d2 = static_cast<double>(squared_distance(trace.at(k, p.first), trace.at(k, p.second)));
                          return d2 <= p.radius * p.radius ? 1.0 : 0.0;
                        },
                        [&](const UserTable& t) {
                          auto it = t.values.find(trace.at(k, t.node));
                          return it == t.values.end() ? t.default_value : it->second;
                        },
                    },
                    kind_);
}

std::vector<std::size_t> default_checkpoints(std::size_t n, std::size_t count) {
  std::vector<std::size_t> out;
  if (n == 0 || count == 0) return out;
  count = std::min(count, n);
  for (std::size_t i = 1; i <= count; ++i) {
    const std::size_t c = n * i / count;
    if (out.empty() || c > out.back()) out.push_back(c);
  }
  return out;
}

ConvergenceReport time_average(const JointTrace& trace, const Observable& f, std::span<const std::size_t> checkpoints,
                               std::optional<double> tolerance, std::size_t window) {
  if (checkpoints.empty()) throw InputError("time average needs at least one checkpoint");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] == 0 || (i && checkpoints[i] <= checkpoints[i - 1])) {
      throw InputError("checkpoints must be positive and strictly increasing");
    }
  }
  if (f.nodes_needed() > trace.node_count) {
    throw InputError("observable reads node " + std::to_string(f.nodes_needed() - 1) + " but the trace has " +
                     std::to_string(trace.node_count) + " nodes");
  }
  const std::size_t last = checkpoints.back();
  if (last + f.window() - 1 > trace.length()) {
    throw InputError("trace of length " + std::to_string(trace.length()) + " is too short for checkpoint " +
                     std::to_string(last));
  }

  ConvergenceReport report;
  report.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  report.partial_averages.reserve(checkpoints.size());
  double sum = 0.0;
  std::size_t next = 0;
  for (std::size_t k = 0; k < last; ++k) {
    sum += f.evaluate(trace, k);
    if (k + 1 == checkpoints[next]) {
      report.partial_averages.push_back(sum / static_cast<double>(k + 1));
      ++next;
    }
  }
  report.final_value = report.partial_averages.back();
  report.window = std::max<std::size_t>(1, std::min(window, report.partial_averages.size()));
  const auto tail = std::span<const double>(report.partial_averages).last(report.window);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  report.cauchy_width = *hi - *lo;
  report.tolerance = tolerance.value_or(3.0 / std::sqrt(static_cast<double>(last)));
  report.converged = report.cauchy_width <= report.tolerance;
  return report;
}

ConvergenceReport time_average(const LocationTrace& trace, const Observable& f,
                               std::span<const std::size_t> checkpoints, std::optional<double> tolerance,
                               std::size_t window) {
  return time_average(as_joint(trace), f, checkpoints, tolerance, window);
}

CesaroEstimate cesaro_measure(const DiscreteModel& model, const LocationCylinder& event, std::size_t runs,
                              std::size_t horizon, std::uint64_t seed) {
  if (runs == 0) throw InputError("cesaro estimate needs at least one run");
  if (event.symbols.empty()) throw InputError("location cylinder must fix at least one cell");
  if (horizon < event.symbols.size()) throw InputError("horizon shorter than the event");
  for (Cell c : event.symbols) {
    if (!model.alphabet.grid().contains(c)) throw InputError("location cylinder cell outside the grid");
  }

  const std::size_t len = event.symbols.size();
  const std::size_t needed = event.start + horizon + len - 1;
  std::vector<std::vector<std::uint8_t>> hits(runs);
  detail::parallel_for(runs, [&](std::size_t r) {
    const NodeRun run = simulate_node(model, needed, derive_seed(seed, Stream::kRun, r));
    auto& h = hits[r];
    h.assign(horizon, 0);
    const auto& cells = run.trace.cells;
    for (std::size_t k = 0; k < horizon; ++k) {
      const std::size_t at = event.start + k;
      h[k] = std::equal(event.symbols.begin(), event.symbols.end(), cells.begin() + static_cast<std::ptrdiff_t>(at));
    }
  });

  CesaroEstimate est;
  est.runs = runs;
  est.horizon = horizon;
  est.shifted_measures.assign(horizon, 0.0);
  est.prefix_values.reserve(horizon);
  std::vector<std::size_t> counts(horizon, 0);
  for (const auto& h : hits) {
    for (std::size_t k = 0; k < horizon; ++k) counts[k] += h[k];
  }
  double running = 0.0;
  for (std::size_t k = 0; k < horizon; ++k) {
    est.shifted_measures[k] = static_cast<double>(counts[k]) / static_cast<double>(runs);
    running += est.shifted_measures[k];
    est.prefix_values.push_back(running / static_cast<double>(k + 1));
  }
  est.value = est.prefix_values.back();
  return est;
}

SampleSpread sample_spread(std::span<const double> values) {
  SampleSpread s;
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.spread = *hi - *lo;
  if (values.size() > 1) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

SpreadReport ergodicity_check(const DiscreteModel& model, const Observable& f, std::span<const std::uint64_t> seeds,
                              std::size_t horizon, std::size_t node_count, double tolerance) {
  if (seeds.size() < 2) throw InputError("ergodicity check needs at least two seeds");
  if (horizon == 0) throw InputError("ergodicity check needs a positive horizon");
  if (f.nodes_needed() > node_count) throw InputError("observable reads more nodes than are simulated");

  SpreadReport report;
  report.seeds.assign(seeds.begin(), seeds.end());
  report.values.assign(seeds.size(), 0.0);
  const std::size_t checkpoint[] = {horizon};
  detail::parallel_for(seeds.size(), [&](std::size_t i) {
    const JointRun run = simulate_joint(model, node_count, horizon + f.window() - 1, seeds[i]);
    report.values[i] = time_average(run.joint, f, checkpoint).final_value;
  });
  const SampleSpread s = sample_spread(report.values);
  report.spread = s.spread;
  report.stddev = s.stddev;
  report.tolerance = tolerance;
  report.pass = report.spread <= tolerance;
  return report;
}

double Histogram::frequency(Cell c) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts.at(grid.index(c))) / static_cast<double>(total);
}

Histogram location_histogram(const GridSpec& grid, const LocationTrace& trace) {
  if (trace.cells.empty()) throw InputError("histogram needs a non-empty trace");
  Histogram h{grid, std::vector<std::uint64_t>(grid.cell_count(), 0), 0};
  for (Cell c : trace.cells) {
    if (!grid.contains(c)) throw InputError("trace cell outside the grid");
    ++h.counts[grid.index(c)];
  }
  h.total = trace.cells.size();
  return h;
}

JointHistogram location_histogram(const GridSpec& grid, const JointTrace& trace) {
  if (trace.length() == 0) throw InputError("histogram needs a non-empty trace");
  JointHistogram out;
  out.pooled = Histogram{grid, std::vector<std::uint64_t>(grid.cell_count(), 0), 0};
  out.per_node.assign(trace.node_count, out.pooled);
  for (std::size_t t = 0; t < trace.length(); ++t) {
    for (std::size_t v = 0; v < trace.node_count; ++v) {
      const Cell c = trace.at(t, v);
      if (!grid.contains(c)) throw InputError("trace cell outside the grid");
      ++out.per_node[v].counts[grid.index(c)];
      ++out.pooled.counts[grid.index(c)];
    }
  }
  for (auto& h : out.per_node) h.total = trace.length();
  out.pooled.total = trace.length() * trace.node_count;
  return out;
}

}  // namespace rwmm
