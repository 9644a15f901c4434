#pragma once

#include "rwmm/analysis.hpp"
#include "rwmm/continuous.hpp"
#include "rwmm/errors.hpp"
#include "rwmm/geometry.hpp"
#include "rwmm/processes.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rwmm {

enum class Mode { kDiscrete, kContinuous, kVerify, kAnalyze };

std::string_view to_string(Mode mode);

enum class WaypointKind { kIidUniform, kMarkovLocal, kMarkov };

/// Everything a run needs besides its seeds.
///
/// Text format: one `key = value` per line, `#` starts a comment. Lists use
/// `;` as separator. See README for the full key table.
struct RunConfig {
  Mode mode = Mode::kDiscrete;

  // discrete / verify / analyze
  std::optional<GridSpec> grid;
  std::vector<Rational> speeds;
  WaypointKind waypoints = WaypointKind::kIidUniform;
  std::vector<std::vector<Rational>> markov_matrix;
  std::vector<Rational> markov_initial;
  std::size_t nodes = 1;
  std::size_t horizon = 0;

  // continuous
  std::optional<ContinuousAreaSpec> area;
  double duration = 0.0;
  double dt = 1.0;
  std::vector<Flow> flows;
  double range = 250.0;
  double bitrate = 512.0;
  double packet_size = 512.0;

  // analyze
  std::vector<std::string> observables;  // canonical observable specs
  std::size_t checkpoints = 100;
  std::optional<double> tolerance;
  double spread_tolerance = 0.02;
  std::size_t cesaro_runs = 0;
  std::size_t cesaro_horizon = 10000;

  // verify
  std::size_t verify_horizon = 2;
  std::size_t verify_prefixes = 20;

  std::vector<std::uint64_t> seeds{1};
  std::string output = ".";
};

/// Parses and validates. Throws ConfigError listing every problem found,
/// each tagged with its line number.
RunConfig parse_config(std::string_view text);

/// Parses an observable such as `cell:2,2`, `cell:1,0@1`, `cylinder:0,0/1,0`,
/// `pair:0,1,1.5` or `table:0,0=1/1,1=2.5`.
Observable parse_observable(std::string_view spec);

WaypointProcessSpec make_waypoint_process(const RunConfig& config);
DiscreteModel make_discrete_model(const RunConfig& config);

/// Deterministic serialization of every field except seeds and output.
std::string canonical_text(const RunConfig& config);

/// 16 hex digits of FNV-1a over canonical_text.
std::string config_digest(const RunConfig& config);

}  // namespace rwmm
