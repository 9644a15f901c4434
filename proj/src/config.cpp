#include "rwmm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>

namespace rwmm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    const auto at = s.find(sep, begin);
    parts.push_back(trim(s.substr(begin, at == std::string_view::npos ? std::string_view::npos : at - begin)));
    if (at == std::string_view::npos) break;
    begin = at + 1;
  }
  return parts;
}

std::vector<std::string_view> split_nonempty(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (auto p : split(s, sep)) {
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view text, const char* what) {
  Int value{};
  text = trim(text);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw InputError(std::string(what) + " must be an integer, got '" + std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text, const char* what) {
  text = trim(text);
  std::string copy(text);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || !std::isfinite(v)) {
    throw InputError(std::string(what) + " must be a finite number, got '" + copy + "'");
  }
  return v;
}

std::size_t parse_positive(std::string_view text, const char* what) {
  const auto v = parse_int<long long>(text, what);
  if (v < 1) throw InputError(std::string(what) + " must be >= 1");
  return static_cast<std::size_t>(v);
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view text, char sep, const char* what) {
  const auto at = text.find(sep);
  if (at == std::string_view::npos) throw InputError(std::string(what) + " must look like A" + sep + "B");
  return {trim(text.substr(0, at)), trim(text.substr(at + 1))};
}

Cell parse_cell(std::string_view text) {
  auto [x, y] = split_pair(text, ',', "cell");
  return Cell{parse_int<int>(x, "cell x"), parse_int<int>(y, "cell y")};
}

std::string_view strip_node(std::string_view body, std::size_t& node) {
  node = 0;
  if (auto at = body.rfind('@'); at != std::string_view::npos) {
    node = static_cast<std::size_t>(parse_int<long long>(body.substr(at + 1), "observable node"));
    body = trim(body.substr(0, at));
  }
  return body;
}

std::string remove_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t') out.push_back(c);
  }
  return out;
}

std::string real_text(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string_view mode_name(Mode m) { return to_string(m); }

std::vector<Cell> observable_cells(const Observable& f) {
  std::vector<Cell> cells;
  if (auto* c = std::get_if<CellIndicator>(&f.kind())) cells.push_back(c->cell);
  if (auto* c = std::get_if<CylinderIndicator>(&f.kind())) cells = c->symbols;
  if (auto* t = std::get_if<UserTable>(&f.kind())) {
    for (const auto& [cell, v] : t->values) cells.push_back(cell);
  }
  return cells;
}

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kDiscrete: return "discrete";
    case Mode::kContinuous: return "continuous";
    case Mode::kVerify: return "verify";
    case Mode::kAnalyze: return "analyze";
  }
  return "?";
}

Observable parse_observable(std::string_view spec) {
  spec = trim(spec);
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ConfigError("observable '" + std::string(spec) + "' needs a kind prefix");
  const auto kind = trim(spec.substr(0, colon));
  std::size_t node = 0;
  const auto body = strip_node(trim(spec.substr(colon + 1)), node);
  try {
    if (kind == "cell") return Observable(CellIndicator{parse_cell(body), node});
    if (kind == "cylinder") {
      CylinderIndicator c{{}, node};
      for (auto part : split_nonempty(body, '/')) c.symbols.push_back(parse_cell(part));
      return Observable(std::move(c));
    }
    if (kind == "pair") {
      const auto parts = split(body, ',');
      if (parts.size() != 3) throw InputError("pair observable needs first,second,radius");
      return Observable(NodePairWithinRange{static_cast<std::size_t>(parse_int<long long>(parts[0], "pair node")),
                                            static_cast<std::size_t>(parse_int<long long>(parts[1], "pair node")),
                                            parse_real(parts[2], "pair radius")});
    }
    if (kind == "table") {
      UserTable t;
      t.node = node;
      for (auto entry : split_nonempty(body, '/')) {
        auto [cell, value] = split_pair(entry, '=', "table entry");
        if (cell == "default") {
          t.default_value = parse_real(value, "table default");
        } else {
          t.values[parse_cell(cell)] = parse_real(value, "table value");
        }
      }
      return Observable(std::move(t));
    }
  } catch (const InputError& e) {
    throw ConfigError(std::string("observable '") + std::string(spec) + "': " + e.what());
  }
  throw ConfigError("unknown observable kind '" + std::string(kind) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  std::map<std::string, std::size_t> seen;
  std::map<std::string, std::size_t> line_of;
  bool markov_initial_given = false;

  using Handler = std::function<void(std::string_view)>;
  const std::map<std::string, Handler> handlers = {
      {"mode",
       [&](std::string_view v) {
         if (v == "discrete") cfg.mode = Mode::kDiscrete;
         else if (v == "continuous") cfg.mode = Mode::kContinuous;
         else if (v == "verify") cfg.mode = Mode::kVerify;
         else if (v == "analyze") cfg.mode = Mode::kAnalyze;
         else throw InputError("mode must be discrete, continuous, verify or analyze");
       }},
      {"grid",
       [&](std::string_view v) {
         auto [w, h] = split_pair(v, 'x', "grid");
         GridSpec g{parse_int<int>(w, "grid width"), parse_int<int>(h, "grid height")};
         if (g.width < 1 || g.height < 1) throw InputError("grid sides must be >= 1");
         cfg.grid = g;
       }},
      {"speeds",
       [&](std::string_view v) {
         cfg.speeds.clear();
         for (auto s : split_nonempty(v, ';')) {
           Rational r = parse_rational(s);
           if (r <= 0) throw InputError("speeds must be positive, got " + std::string(s));
           cfg.speeds.push_back(r);
         }
         if (cfg.speeds.empty()) throw InputError("speed set must not be empty");
       }},
      {"waypoints",
       [&](std::string_view v) {
         if (v == "iid-uniform") cfg.waypoints = WaypointKind::kIidUniform;
         else if (v == "markov-local") cfg.waypoints = WaypointKind::kMarkovLocal;
         else if (v == "markov") cfg.waypoints = WaypointKind::kMarkov;
         else throw InputError("waypoints must be iid-uniform, markov-local or markov");
       }},
      {"markov_matrix",
       [&](std::string_view v) {
         cfg.markov_matrix.clear();
         for (auto row : split_nonempty(v, '|')) {
           std::vector<Rational> r;
           for (auto e : split_nonempty(row, ';')) r.push_back(parse_rational(e));
           cfg.markov_matrix.push_back(std::move(r));
         }
       }},
      {"markov_initial",
       [&](std::string_view v) {
         markov_initial_given = true;
         cfg.markov_initial.clear();
         for (auto e : split_nonempty(v, ';')) cfg.markov_initial.push_back(parse_rational(e));
       }},
      {"nodes", [&](std::string_view v) { cfg.nodes = parse_positive(v, "nodes"); }},
      {"horizon", [&](std::string_view v) { cfg.horizon = parse_positive(v, "horizon"); }},
      {"area",
       [&](std::string_view v) {
         auto [w, h] = split_pair(v, 'x', "area");
         ContinuousAreaSpec a = cfg.area.value_or(ContinuousAreaSpec{});
         a.width = parse_real(w, "area width");
         a.height = parse_real(h, "area height");
         if (!(a.width > 0) || !(a.height > 0)) throw InputError("area sides must be positive");
         cfg.area = a;
       }},
      {"min_speed",
       [&](std::string_view v) {
         ContinuousAreaSpec a = cfg.area.value_or(ContinuousAreaSpec{});
         a.min_speed = parse_real(v, "min_speed");
         if (!(a.min_speed > 0)) {
           throw InputError("min_speed must be > 0: the zero-speed degeneracy guard forbids a zero minimum speed");
         }
         cfg.area = a;
       }},
      {"max_speed",
       [&](std::string_view v) {
         ContinuousAreaSpec a = cfg.area.value_or(ContinuousAreaSpec{});
         a.max_speed = parse_real(v, "max_speed");
         if (!(a.max_speed > 0)) throw InputError("max_speed must be > 0");
         cfg.area = a;
       }},
      {"pause_time",
       [&](std::string_view v) {
         ContinuousAreaSpec a = cfg.area.value_or(ContinuousAreaSpec{});
         a.pause_time = parse_real(v, "pause_time");
         if (a.pause_time < 0) throw InputError("pause_time must be >= 0");
         cfg.area = a;
       }},
      {"duration",
       [&](std::string_view v) {
         cfg.duration = parse_real(v, "duration");
         if (!(cfg.duration > 0)) throw InputError("duration must be > 0");
       }},
      {"dt",
       [&](std::string_view v) {
         cfg.dt = parse_real(v, "dt");
         if (!(cfg.dt > 0)) throw InputError("dt must be > 0");
       }},
      {"flows",
       [&](std::string_view v) {
         cfg.flows.clear();
         for (auto f : split_nonempty(v, ';')) {
           auto [a, b] = split_pair(f, '>', "flow");
           cfg.flows.push_back(Flow{static_cast<std::size_t>(parse_int<long long>(a, "flow source")),
                                    static_cast<std::size_t>(parse_int<long long>(b, "flow sink"))});
         }
       }},
      {"range",
       [&](std::string_view v) {
         cfg.range = parse_real(v, "range");
         if (cfg.range < 0) throw InputError("range must be >= 0");
       }},
      {"bitrate",
       [&](std::string_view v) {
         cfg.bitrate = parse_real(v, "bitrate");
         if (cfg.bitrate < 0) throw InputError("bitrate must be >= 0");
       }},
      {"packet_size",
       [&](std::string_view v) {
         cfg.packet_size = parse_real(v, "packet_size");
         if (!(cfg.packet_size > 0)) throw InputError("packet_size must be > 0");
       }},
      {"observables",
       [&](std::string_view v) {
         cfg.observables.clear();
         for (auto o : split_nonempty(v, ';')) {
           try {
             parse_observable(o);
           } catch (const ConfigError& e) {
             throw InputError(e.what());
           }
           cfg.observables.push_back(remove_spaces(o));
         }
       }},
      {"checkpoints", [&](std::string_view v) { cfg.checkpoints = parse_positive(v, "checkpoints"); }},
      {"tolerance",
       [&](std::string_view v) {
         cfg.tolerance = parse_real(v, "tolerance");
         if (!(*cfg.tolerance > 0)) throw InputError("tolerance must be > 0");
       }},
      {"spread_tolerance",
       [&](std::string_view v) {
         cfg.spread_tolerance = parse_real(v, "spread_tolerance");
         if (!(cfg.spread_tolerance > 0)) throw InputError("spread_tolerance must be > 0");
       }},
      {"cesaro_runs",
       [&](std::string_view v) {
         const auto n = parse_int<long long>(v, "cesaro_runs");
         if (n < 0) throw InputError("cesaro_runs must be >= 0");
         cfg.cesaro_runs = static_cast<std::size_t>(n);
       }},
      {"cesaro_horizon", [&](std::string_view v) { cfg.cesaro_horizon = parse_positive(v, "cesaro_horizon"); }},
      {"verify_horizon", [&](std::string_view v) { cfg.verify_horizon = parse_positive(v, "verify_horizon"); }},
      {"verify_prefixes", [&](std::string_view v) { cfg.verify_prefixes = parse_positive(v, "verify_prefixes"); }},
      {"seeds",
       [&](std::string_view v) {
         cfg.seeds.clear();
         for (auto s : split_nonempty(v, ';')) cfg.seeds.push_back(parse_int<std::uint64_t>(s, "seed"));
         if (cfg.seeds.empty()) throw InputError("seed list must not be empty");
       }},
      {"output",
       [&](std::string_view v) {
         if (v.empty()) throw InputError("output must not be empty");
         cfg.output = std::string(v);
       }},
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "expected 'key = value'"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));
    auto handler = handlers.find(key);
    if (handler == handlers.end()) {
      issues.push_back({line_no, "unknown key '" + key + "'"});
      continue;
    }
    if (auto prev = seen.find(key); prev != seen.end()) {
      issues.push_back({line_no, "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) +
                                     ", again on line " + std::to_string(line_no) + ")"});
      continue;
    }
    seen[key] = line_no;
    try {
      handler->second(value);
    } catch (const Error& e) {
      issues.push_back({line_no, key + ": " + e.what()});
    }
  }

  auto has = [&](const std::string& key) { return seen.count(key) > 0; };
  auto require = [&](const std::string& key) {
    if (!has(key)) issues.push_back({0, "missing required key '" + key + "' for mode " + std::string(mode_name(cfg.mode))});
  };
  auto line = [&](const std::string& key) { return has(key) ? seen[key] : std::size_t{0}; };

  if (!has("mode")) {
    issues.push_back({0, "missing required key 'mode'"});
  } else {
    switch (cfg.mode) {
      case Mode::kDiscrete:
        require("grid"), require("speeds"), require("horizon");
        break;
      case Mode::kVerify:
        require("grid"), require("speeds");
        break;
      case Mode::kAnalyze:
        require("grid"), require("speeds"), require("horizon"), require("observables");
        break;
      case Mode::kContinuous:
        require("area"), require("min_speed"), require("max_speed"), require("duration");
        break;
    }
  }

  if (cfg.area && has("min_speed") && has("max_speed") && cfg.area->max_speed < cfg.area->min_speed) {
    issues.push_back({line("max_speed"), "max_speed must be >= min_speed"});
  }
  for (const auto& f : cfg.flows) {
    if (f.source >= cfg.nodes || f.sink >= cfg.nodes) {
      issues.push_back({line("flows"), "flow " + std::to_string(f.source) + ">" + std::to_string(f.sink) +
                                           " references a node beyond nodes = " + std::to_string(cfg.nodes)});
    }
    if (f.source == f.sink) issues.push_back({line("flows"), "flow source and sink must differ"});
  }
  for (const auto& spec : cfg.observables) {
    const Observable f = parse_observable(spec);
    if (f.nodes_needed() > cfg.nodes) {
      issues.push_back({line("observables"), "observable '" + spec + "' reads a node beyond nodes = " + std::to_string(cfg.nodes)});
    }
    if (cfg.grid) {
      for (Cell c : observable_cells(f)) {
        if (!cfg.grid->contains(c)) issues.push_back({line("observables"), "observable '" + spec + "' uses a cell outside the grid"});
      }
    }
  }
  if (cfg.waypoints == WaypointKind::kMarkov && !has("markov_matrix")) {
    issues.push_back({line("waypoints"), "waypoints = markov needs markov_matrix"});
  }
  if (cfg.waypoints == WaypointKind::kMarkov && cfg.grid && has("markov_matrix") && issues.empty()) {
    if (!markov_initial_given) {
      const std::size_t n = cfg.grid->cell_count();
      cfg.markov_initial.assign(n, Rational(1, static_cast<long long>(n)));
    }
    try {
      (void)make_waypoint_process(cfg);
    } catch (const ConfigError& e) {
      for (const auto& issue : e.issues()) issues.push_back({line("markov_matrix"), issue.message});
    }
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

WaypointProcessSpec make_waypoint_process(const RunConfig& config) {
  if (!config.grid) throw ConfigError("waypoint process needs a grid");
  switch (config.waypoints) {
    case WaypointKind::kIidUniform: return WaypointProcessSpec::iid_uniform(*config.grid);
    case WaypointKind::kMarkovLocal: return make_local_markov(*config.grid);
    case WaypointKind::kMarkov: {
      auto initial = config.markov_initial;
      if (initial.empty()) {
        const std::size_t n = config.grid->cell_count();
        initial.assign(n, Rational(1, static_cast<long long>(n)));
      }
      return WaypointProcessSpec::markov(*config.grid, config.markov_matrix, std::move(initial));
    }
  }
  throw ConfigError("unknown waypoint process");
}

DiscreteModel make_discrete_model(const RunConfig& config) {
  if (!config.grid) throw ConfigError("discrete model needs a grid");
  if (config.speeds.empty()) throw ConfigError("discrete model needs speeds");
  return DiscreteModel{build_alphabet(*config.grid, config.speeds), make_waypoint_process(config)};
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream out;
  out << "mode=" << to_string(c.mode) << '\n';
  out << "grid=" << (c.grid ? std::to_string(c.grid->width) + "x" + std::to_string(c.grid->height) : "") << '\n';
  std::vector<Rational> speeds = c.speeds;
  std::sort(speeds.begin(), speeds.end());
  speeds.erase(std::unique(speeds.begin(), speeds.end()), speeds.end());
  out << "speeds=";
  for (std::size_t i = 0; i < speeds.size(); ++i) out << (i ? ";" : "") << to_string(speeds[i]);
  out << '\n';
  out << "waypoints=" << static_cast<int>(c.waypoints) << '\n';
  out << "markov_matrix=";
  for (std::size_t i = 0; i < c.markov_matrix.size(); ++i) {
    out << (i ? "|" : "");
    for (std::size_t j = 0; j < c.markov_matrix[i].size(); ++j) out << (j ? " " : "") << to_string(c.markov_matrix[i][j]);
  }
  out << '\n';
  out << "markov_initial=";
  for (std::size_t i = 0; i < c.markov_initial.size(); ++i) out << (i ? " " : "") << to_string(c.markov_initial[i]);
  out << '\n';
  out << "nodes=" << c.nodes << '\n' << "horizon=" << c.horizon << '\n';
  if (c.area) {
    out << "area=" << real_text(c.area->width) << 'x' << real_text(c.area->height) << '\n'
        << "min_speed=" << real_text(c.area->min_speed) << '\n'
        << "max_speed=" << real_text(c.area->max_speed) << '\n'
        << "pause_time=" << real_text(c.area->pause_time) << '\n';
  } else {
    out << "area=\n";
  }
  out << "duration=" << real_text(c.duration) << '\n' << "dt=" << real_text(c.dt) << '\n';
  out << "flows=";
  for (std::size_t i = 0; i < c.flows.size(); ++i) out << (i ? ";" : "") << c.flows[i].source << '>' << c.flows[i].sink;
  out << '\n';
  out << "range=" << real_text(c.range) << '\n'
      << "bitrate=" << real_text(c.bitrate) << '\n'
      << "packet_size=" << real_text(c.packet_size) << '\n';
  out << "observables=";
  for (std::size_t i = 0; i < c.observables.size(); ++i) out << (i ? ";" : "") << c.observables[i];
  out << '\n';
  out << "checkpoints=" << c.checkpoints << '\n'
      << "tolerance=" << (c.tolerance ? real_text(*c.tolerance) : "") << '\n'
      << "spread_tolerance=" << real_text(c.spread_tolerance) << '\n'
      << "cesaro_runs=" << c.cesaro_runs << '\n'
      << "cesaro_horizon=" << c.cesaro_horizon << '\n'
      << "verify_horizon=" << c.verify_horizon << '\n'
      << "verify_prefixes=" << c.verify_prefixes << '\n';
  return out.str();
}

std::string config_digest(const RunConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_text(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace rwmm
