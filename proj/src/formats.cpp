#include "rwmm/formats.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace rwmm {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const auto at = line.find(',', begin);
    out.emplace_back(line.substr(begin, at == std::string_view::npos ? std::string_view::npos : at - begin));
    if (at == std::string_view::npos) break;
    begin = at + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

void write_rows(std::ostringstream& out, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

// Parses `$node_(<i>)` at the start of `s`, returning the node index and the rest.
bool parse_node_ref(std::string_view& s, std::size_t& node) {
  constexpr std::string_view prefix = "$node_(";
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  const auto close = s.find(')');
  if (close == std::string_view::npos) return false;
  node = std::stoul(std::string(s.substr(0, close)));
  s.remove_prefix(close + 1);
  return true;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

namespace {

void write_header(std::ostream& out, int version, std::string_view kind, std::string_view digest, std::uint64_t seed) {
  out << "# rwmm-trace " << version << '\n'
      << "# kind " << kind << '\n'
      << "# config-digest " << digest << '\n'
      << "# seed " << seed << '\n';
}

}  // namespace

std::string write_trace_file(const TraceFile& file) {
  std::ostringstream out;
  write_header(out, file.version, file.kind, file.digest, file.seed);
  write_rows(out, file.columns, file.rows);
  return out.str();
}

TraceFile read_output_header(std::string_view text) {
  TraceFile file;
  file.version = 0;
  for (auto line : lines_of(text)) {
    if (line.empty() || line.front() != '#') break;
    std::istringstream in{std::string(line.substr(1))};
    std::string key;
    in >> key;
    if (key == "rwmm-trace") in >> file.version;
    else if (key == "kind") in >> file.kind;
    else if (key == "config-digest") in >> file.digest;
    else if (key == "seed") in >> file.seed;
  }
  if (file.version != kTraceFileVersion) throw InputError("output has no rwmm header (or unsupported version)");
  if (file.digest.empty()) throw InputError("output header has no config digest");
  return file;
}

std::string stamp_output(std::string_view kind, const RunConfig& config, std::uint64_t seed, std::string_view body) {
  std::ostringstream out;
  write_header(out, kTraceFileVersion, kind, config_digest(config), seed);
  out << body;
  return out.str();
}

TraceFile read_trace_file(std::string_view text) {
  TraceFile file;
  file.version = 0;
  bool have_columns = false;
  for (auto line : lines_of(text)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream in{std::string(line.substr(1))};
      std::string key;
      in >> key;
      if (key == "rwmm-trace") in >> file.version;
      else if (key == "kind") in >> file.kind;
      else if (key == "config-digest") in >> file.digest;
      else if (key == "seed") in >> file.seed;
      continue;
    }
    auto fields = split_csv_line(line);
    if (!have_columns) {
      file.columns = std::move(fields);
      have_columns = true;
    } else {
      if (fields.size() != file.columns.size()) throw InputError("trace row has the wrong number of columns");
      file.rows.push_back(std::move(fields));
    }
  }
  if (file.version != kTraceFileVersion) throw InputError("not an rwmm trace file (or unsupported version)");
  if (file.digest.empty()) throw InputError("trace file has no config digest");
  return file;
}

void verify_digest(const TraceFile& file, const RunConfig& config) {
  const std::string expected = config_digest(config);
  if (file.digest != expected) {
    throw InputError("trace file digest " + file.digest + " does not match config digest " + expected);
  }
}

TraceFile location_trace_file(const JointTrace& trace, const RunConfig& config, std::uint64_t seed) {
  TraceFile file;
  file.kind = "location";
  file.digest = config_digest(config);
  file.seed = seed;
  file.columns.push_back("t");
  for (std::size_t v = 0; v < trace.node_count; ++v) {
    file.columns.push_back("x" + std::to_string(v));
    file.columns.push_back("y" + std::to_string(v));
  }
  file.rows.reserve(trace.length());
  for (std::size_t t = 0; t < trace.length(); ++t) {
    std::vector<std::string> row{std::to_string(t)};
    for (std::size_t v = 0; v < trace.node_count; ++v) {
      row.push_back(std::to_string(trace.at(t, v).x));
      row.push_back(std::to_string(trace.at(t, v).y));
    }
    file.rows.push_back(std::move(row));
  }
  return file;
}

TraceFile path_trace_file(const std::vector<NodeRun>& runs, const PathAlphabet& alphabet, const RunConfig& config,
                          std::uint64_t seed) {
  TraceFile file;
  file.kind = "paths";
  file.digest = config_digest(config);
  file.seed = seed;
  file.columns = {"node", "trip", "start", "path_id", "length", "src_x", "src_y", "dst_x", "dst_y"};
  for (std::size_t v = 0; v < runs.size(); ++v) {
    const auto& run = runs[v];
    for (std::size_t i = 0; i < run.paths.size(); ++i) {
      const Path& p = alphabet.path(run.paths[i]);
      file.rows.push_back({std::to_string(v), std::to_string(i), std::to_string(run.trace.trip_boundaries[i]),
                           std::to_string(run.paths[i]), std::to_string(p.length()), std::to_string(p.source().x),
                           std::to_string(p.source().y), std::to_string(p.dest().x), std::to_string(p.dest().y)});
    }
  }
  return file;
}

TraceFile position_trace_file(const ContinuousTrace& ct, const RunConfig& config, std::uint64_t seed) {
  TraceFile file;
  file.kind = "positions";
  file.digest = config_digest(config);
  file.seed = seed;
  file.columns.push_back("t");
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    file.columns.push_back("x" + std::to_string(v));
    file.columns.push_back("y" + std::to_string(v));
  }
  for (std::size_t k = 0; k <= ct.steps(); ++k) {
    std::vector<std::string> row{format_double(static_cast<double>(k) * ct.dt)};
    for (std::size_t v = 0; v < ct.node_count(); ++v) {
      row.push_back(format_double(ct.samples[v][k].x));
      row.push_back(format_double(ct.samples[v][k].y));
    }
    file.rows.push_back(std::move(row));
  }
  return file;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool have_header = false;
  for (auto line : lines_of(text)) {
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size()) throw InputError("CSV row has the wrong number of columns");
      table.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw InputError("CSV text has no header row");
  return table;
}

std::string export_csv_report(const ConvergenceReport& report) {
  std::ostringstream out;
  out << "checkpoint,partial_average,spread\n";
  const std::size_t window = std::max<std::size_t>(1, report.window);
  for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
    const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
    const auto begin = report.partial_averages.begin() + static_cast<std::ptrdiff_t>(first);
    const auto end = report.partial_averages.begin() + static_cast<std::ptrdiff_t>(i + 1);
    const auto [lo, hi] = std::minmax_element(begin, end);
    out << report.checkpoints[i] << ',' << format_double(report.partial_averages[i]) << ',' << format_double(*hi - *lo)
        << '\n';
  }
  return out.str();
}

std::string export_csv_report(const Histogram& histogram) {
  std::ostringstream out;
  out << "x,y,count,frequency\n";
  for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
    const Cell c = histogram.grid.cell(i);
    out << c.x << ',' << c.y << ',' << histogram.counts[i] << ',' << format_double(histogram.frequency(c)) << '\n';
  }
  return out.str();
}

std::string export_csv_report(const TrafficReport& report) {
  std::vector<std::size_t> sinks;
  for (const auto& f : report.flows) sinks.push_back(f.sink);
  std::sort(sinks.begin(), sinks.end());
  sinks.erase(std::unique(sinks.begin(), sinks.end()), sinks.end());

  std::ostringstream out;
  out << "time";
  for (std::size_t s : sinks) out << ",bytes_node" << s;
  out << '\n';
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    out << format_double(report.times[k]);
    for (std::size_t s : sinks) out << ',' << format_double(report.cumulative[s][k]);
    out << '\n';
  }
  return out.str();
}

std::string export_csv_report(const SpreadReport& report) {
  std::ostringstream out;
  out << "seed,time_average\n";
  for (std::size_t i = 0; i < report.seeds.size(); ++i) {
    out << report.seeds[i] << ',' << format_double(report.values[i]) << '\n';
  }
  out << "# spread " << format_double(report.spread) << " stddev " << format_double(report.stddev) << " tolerance "
      << format_double(report.tolerance) << (report.pass ? " PASS" : " FAIL") << '\n';
  return out.str();
}

std::string export_csv_report(const CesaroEstimate& estimate, std::size_t stride) {
  stride = std::max<std::size_t>(1, stride);
  std::ostringstream out;
  out << "offset,shifted_measure,cesaro_average\n";
  for (std::size_t k = 0; k < estimate.prefix_values.size(); ++k) {
    if ((k + 1) % stride != 0 && k + 1 != estimate.prefix_values.size()) continue;
    out << k << ',' << format_double(estimate.shifted_measures[k]) << ',' << format_double(estimate.prefix_values[k])
        << '\n';
  }
  return out.str();
}

std::string export_ns2(const ContinuousTrace& ct) {
  std::ostringstream out;
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    out << "$node_(" << v << ") set X_ " << fixed6(ct.initial[v].x) << '\n'
        << "$node_(" << v << ") set Y_ " << fixed6(ct.initial[v].y) << '\n'
        << "$node_(" << v << ") set Z_ " << fixed6(0.0) << '\n';
  }
  struct Move {
    double time;
    std::size_t node;
    std::size_t leg;
  };
  std::vector<Move> moves;
  for (std::size_t v = 0; v < ct.node_count(); ++v) {
    for (std::size_t i = 0; i < ct.legs[v].size(); ++i) moves.push_back({ct.legs[v][i].start_time, v, i});
  }
  std::stable_sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) {
    return a.time != b.time ? a.time < b.time : a.node < b.node;
  });
  for (const auto& m : moves) {
    const Leg& leg = ct.legs[m.node][m.leg];
    out << "$ns_ at " << fixed6(leg.start_time) << " \"$node_(" << m.node << ") setdest " << fixed6(leg.destination.x)
        << ' ' << fixed6(leg.destination.y) << ' ' << fixed6(leg.speed) << "\"\n";
  }
  return out.str();
}

Ns2Scenario parse_ns2(std::string_view text) {
  Ns2Scenario scenario;
  auto ensure = [&](std::size_t node) {
    if (scenario.initial.size() <= node) {
      scenario.initial.resize(node + 1);
      scenario.legs.resize(node + 1);
    }
  };
  std::size_t line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    std::string_view line = raw;
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    std::size_t node = 0;
    try {
      if (line.substr(0, 7) == "$node_(") {
        if (!parse_node_ref(line, node)) throw InputError("bad node reference");
        std::istringstream in{std::string(line)};
        std::string set, axis;
        double value = 0;
        if (!(in >> set >> axis >> value) || set != "set") throw InputError("bad position line");
        ensure(node);
        if (axis == "X_") scenario.initial[node].x = value;
        else if (axis == "Y_") scenario.initial[node].y = value;
        else if (axis != "Z_") throw InputError("unknown axis " + axis);
      } else if (line.substr(0, 7) == "$ns_ at") {
        std::istringstream in{std::string(line.substr(7))};
        double time = 0;
        if (!(in >> time)) throw InputError("bad movement time");
        std::string rest;
        std::getline(in, rest);
        std::string_view r = rest;
        while (!r.empty() && (r.front() == ' ' || r.front() == '"')) r.remove_prefix(1);
        while (!r.empty() && (r.back() == ' ' || r.back() == '"')) r.remove_suffix(1);
        if (!parse_node_ref(r, node)) throw InputError("bad node reference");
        std::istringstream args{std::string(r)};
        std::string verb;
        Leg leg;
        if (!(args >> verb >> leg.destination.x >> leg.destination.y >> leg.speed) || verb != "setdest") {
          throw InputError("bad setdest line");
        }
        leg.start_time = time;
        ensure(node);
        scenario.legs[node].push_back(leg);
      } else {
        throw InputError("unrecognized line");
      }
    } catch (const InputError& e) {
      throw InputError("ns-2 line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception&) {
      throw InputError("ns-2 line " + std::to_string(line_no) + ": malformed");
    }
  }
  for (std::size_t v = 0; v < scenario.legs.size(); ++v) {
    auto& legs = scenario.legs[v];
    Point here = scenario.initial[v];
    for (std::size_t i = 0; i < legs.size(); ++i) {
      legs[i].origin = here;
      here = legs[i].destination;
      legs[i].pause = i + 1 < legs.size() ? std::max(0.0, legs[i + 1].start_time - legs[i].arrival_time()) : 0.0;
    }
  }
  return scenario;
}

}  // namespace rwmm
