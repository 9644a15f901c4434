#pragma once

#include "rwmm/analysis.hpp"
#include "rwmm/config.hpp"
#include "rwmm/continuous.hpp"
#include "rwmm/location.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rwmm {

inline constexpr int kTraceFileVersion = 1;

/// "%.9g".
std::string format_double(double value);

/// Comment-style header lines followed by a CSV body.
struct TraceFile {
  int version = kTraceFileVersion;
  std::string kind;
  std::string digest;
  std::uint64_t seed = 0;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string write_trace_file(const TraceFile& file);
TraceFile read_trace_file(std::string_view text);

/// Prefixes `body` with the trace-file header lines so any output (CSV
/// report or ns-2 script) carries the digest of the config that produced it.
/// Reads only the leading header lines of any stamped output; columns and rows stay empty.
TraceFile read_output_header(std::string_view text);
std::string stamp_output(std::string_view kind, const RunConfig& config, std::uint64_t seed, std::string_view body);

/// Throws InputError when the file was not produced by `config`.
void verify_digest(const TraceFile& file, const RunConfig& config);

/// Columns t, x0, y0, x1, y1, ...
TraceFile location_trace_file(const JointTrace& trace, const RunConfig& config, std::uint64_t seed);

/// One row per trip: node, trip, start, path_id, length, source and destination cells.
TraceFile path_trace_file(const std::vector<NodeRun>& runs, const PathAlphabet& alphabet, const RunConfig& config,
                          std::uint64_t seed);

/// Columns t, x0, y0, ... from the sampled continuous positions.
TraceFile position_trace_file(const ContinuousTrace& ct, const RunConfig& config, std::uint64_t seed);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);

std::string export_csv_report(const ConvergenceReport& report);
std::string export_csv_report(const Histogram& histogram);
std::string export_csv_report(const TrafficReport& report);
std::string export_csv_report(const SpreadReport& report);
std::string export_csv_report(const CesaroEstimate& estimate, std::size_t stride = 1);

/// ns-2 setdest idiom: X_/Y_/Z_ initial-position lines per node, then one
/// `$ns_ at <t> "$node_(<i>) setdest <x> <y> <speed>"` line per leg, ordered
/// by (start time, node). Six decimals throughout.
std::string export_ns2(const ContinuousTrace& ct);

struct Ns2Scenario {
  std::vector<Point> initial;
  std::vector<std::vector<Leg>> legs;  // pause reconstructed from the next start time
};

Ns2Scenario parse_ns2(std::string_view text);

}  // namespace rwmm
