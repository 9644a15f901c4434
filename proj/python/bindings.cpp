#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <rwmm/analysis.hpp>
#include <rwmm/commands.hpp>
#include <rwmm/config.hpp>
#include <rwmm/continuous.hpp>
#include <rwmm/formats.hpp>
#include <rwmm/location.hpp>
#include <rwmm/processes.hpp>

#include <sstream>

namespace py = pybind11;
using namespace rwmm;

namespace {

using CellTuple = std::pair<int, int>;

Cell cell(const CellTuple& c) { return Cell{c.first, c.second}; }
CellTuple tuple(Cell c) { return {c.x, c.y}; }

std::vector<Cell> cells(const std::vector<CellTuple>& v) {
  std::vector<Cell> out;
  out.reserve(v.size());
  for (const auto& c : v) out.push_back(cell(c));
  return out;
}

std::vector<CellTuple> tuples(std::span<const Cell> v) {
  std::vector<CellTuple> out;
  out.reserve(v.size());
  for (Cell c : v) out.push_back(tuple(c));
  return out;
}

py::object fraction(const Rational& r) {
  static py::object Fraction = py::module_::import("fractions").attr("Fraction");
  return Fraction(to_string(r));
}

// Accepts int, str ("3/2", "0.25") or fractions.Fraction.
Rational rational(const py::handle& obj) { return parse_rational(py::str(obj).cast<std::string>()); }

std::vector<Rational> rationals(const py::iterable& xs) {
  std::vector<Rational> out;
  for (auto x : xs) out.push_back(rational(x));
  return out;
}

JointTrace joint_from(const std::vector<std::vector<CellTuple>>& per_node) {
  std::vector<LocationTrace> traces;
  for (std::size_t v = 0; v < per_node.size(); ++v) {
    LocationTrace t;
    t.node_id = v;
    t.cells = cells(per_node[v]);
    traces.push_back(std::move(t));
  }
  return joint_process(traces);
}

py::dict report_dict(const ConvergenceReport& r) {
  py::dict d;
  d["checkpoints"] = r.checkpoints;
  d["partial_averages"] = r.partial_averages;
  d["final_value"] = r.final_value;
  d["cauchy_width"] = r.cauchy_width;
  d["tolerance"] = r.tolerance;
  d["converged"] = r.converged;
  return d;
}

DiscreteModel model(const PathAlphabet& a, const WaypointProcessSpec& w) { return DiscreteModel{a, w}; }

}  // namespace

PYBIND11_MODULE(rwmm, m) {
  m.doc() = "Random waypoint mobility: exact path-channel measures, simulation and ergodic diagnostics";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<RangeError>(m, "RangeError", base.ptr());

  m.def(
      "digitize_trip",
      [](CellTuple src, CellTuple dst, const py::object& speed) { return tuples(digitize_trip(cell(src), cell(dst), rational(speed)).cells); },
      py::arg("source"), py::arg("dest"), py::arg("speed"));

  py::class_<PathAlphabet>(m, "PathAlphabet")
      .def(py::init([](int width, int height, const py::iterable& speeds, std::optional<std::size_t> cap) {
             return build_alphabet(GridSpec{width, height}, rationals(speeds), cap.value_or(enumeration_cap()));
           }),
           py::arg("width"), py::arg("height"), py::arg("speeds"), py::arg("cap") = py::none())
      .def("__len__", &PathAlphabet::size)
      .def_property_readonly("max_length", &PathAlphabet::max_length)
      .def_property_readonly("speeds", [](const PathAlphabet& a) {
        py::list out;
        for (const auto& s : a.speeds()) out.append(fraction(s));
        return out;
      })
      .def("path", [](const PathAlphabet& a, PathId id) { return tuples(a.path(id).cells); })
      .def("family", [](const PathAlphabet& a, CellTuple s, CellTuple d) {
        const auto f = a.family(cell(s), cell(d));
        return std::vector<PathId>(f.begin(), f.end());
      })
      .def("find", [](const PathAlphabet& a, const std::vector<CellTuple>& p) { return a.find(Path{cells(p)}); });

  py::class_<WaypointProcessSpec>(m, "WaypointProcess")
      .def_static("iid_uniform", [](int w, int h) { return WaypointProcessSpec::iid_uniform({w, h}); })
      .def_static("local_markov", [](int w, int h) { return make_local_markov({w, h}); })
      .def_static(
          "markov",
          [](int w, int h, const std::vector<py::iterable>& rows, std::optional<py::iterable> initial) {
            std::vector<std::vector<Rational>> matrix;
            for (const auto& r : rows) matrix.push_back(rationals(r));
            const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
            std::vector<Rational> init = initial ? rationals(*initial)
                                                 : std::vector<Rational>(n, Rational(1, static_cast<long long>(n)));
            return WaypointProcessSpec::markov({w, h}, std::move(matrix), std::move(init));
          },
          py::arg("width"), py::arg("height"), py::arg("matrix"), py::arg("initial") = py::none())
      .def("marginal",
           [](const WaypointProcessSpec& s, std::size_t k) {
             py::list out;
             for (const auto& p : s.marginal(k)) out.append(fraction(p));
             return out;
           })
      .def("cylinder_probability",
           [](const WaypointProcessSpec& s, std::size_t start, const std::vector<CellTuple>& symbols) {
             return fraction(waypoint_cylinder_prob(s, {start, cells(symbols)}));
           })
      .def("sample", [](const WaypointProcessSpec& s, std::size_t count, std::uint64_t seed) {
        return tuples(sample_waypoints(s, count, seed));
      });

  m.def("channel_cylinder_prob", [](const PathAlphabet& a, const std::vector<CellTuple>& w, const std::vector<PathId>& p) {
    return fraction(channel_cylinder_prob(a, cells(w), p));
  });
  m.def(
      "check_channel_stationarity",
      [](const PathAlphabet& a, const std::vector<CellTuple>& w, std::size_t n) {
        const auto r = check_channel_stationarity(a, cells(w), n);
        py::dict d;
        d["max_discrepancy"] = fraction(r.max_discrepancy);
        d["cylinders_checked"] = r.cylinders_checked;
        return d;
      },
      py::arg("alphabet"), py::arg("waypoints"), py::arg("horizon"));
  m.def(
      "check_output_mixing",
      [](const PathAlphabet& al, const std::vector<CellTuple>& w, const std::vector<PathId>& a,
         const std::vector<PathId>& b, std::size_t tau) {
        const auto r = check_output_mixing(al, cells(w), a, b, tau);
        py::dict d;
        d["discrepancy"] = fraction(r.discrepancy);
        d["joint"] = fraction(r.joint);
        d["shifted"] = fraction(r.shifted);
        d["base"] = fraction(r.base);
        d["premise_met"] = r.premise_met;
        return d;
      },
      py::arg("alphabet"), py::arg("waypoints"), py::arg("a"), py::arg("b"), py::arg("tau"));
  m.def("channel_normalization", [](const PathAlphabet& a, const std::vector<CellTuple>& w, std::size_t n) {
    return fraction(channel_normalization(a, cells(w), n));
  });
  m.def(
      "path_process_prob",
      [](const WaypointProcessSpec& s, const PathAlphabet& a, std::size_t start, const std::vector<PathId>& p,
         std::size_t horizon) { return fraction(path_process_prob(s, a, {start, p}, horizon)); },
      py::arg("process"), py::arg("alphabet"), py::arg("start"), py::arg("paths"), py::arg("horizon"));
  m.def("sample_paths", [](const PathAlphabet& a, const std::vector<CellTuple>& w, std::uint64_t seed) {
    return sample_paths(a, cells(w), seed);
  });
  m.def("encode_sequence", [](const PathAlphabet& a, const std::vector<PathId>& p) {
    const auto t = encode_sequence(a, p);
    py::dict d;
    d["cells"] = tuples(t.cells);
    d["trip_boundaries"] = t.trip_boundaries;
    return d;
  });

  m.def(
      "simulate_joint",
      [](const PathAlphabet& a, const WaypointProcessSpec& w, std::size_t nodes, std::size_t horizon, std::uint64_t seed) {
        const auto run = simulate_joint(model(a, w), nodes, horizon, seed);
        py::list out;
        for (std::size_t v = 0; v < nodes; ++v) {
          py::dict d;
          std::vector<CellTuple> c;
          for (std::size_t t = 0; t < run.joint.length(); ++t) c.push_back(tuple(run.joint.at(t, v)));
          d["cells"] = c;
          d["waypoints"] = tuples(run.nodes[v].waypoints);
          d["paths"] = run.nodes[v].paths;
          out.append(d);
        }
        return out;
      },
      py::arg("alphabet"), py::arg("process"), py::arg("nodes"), py::arg("horizon"), py::arg("seed"));
  m.def(
      "time_average",
      [](const std::vector<std::vector<CellTuple>>& traces, const std::string& observable,
         const std::vector<std::size_t>& checkpoints, std::optional<double> tolerance) {
        return report_dict(time_average(joint_from(traces), parse_observable(observable), checkpoints, tolerance));
      },
      py::arg("traces"), py::arg("observable"), py::arg("checkpoints"), py::arg("tolerance") = py::none());
  m.def(
      "cesaro_measure",
      [](const PathAlphabet& a, const WaypointProcessSpec& w, const std::vector<CellTuple>& symbols, std::size_t runs,
         std::size_t horizon, std::uint64_t seed, std::size_t start) {
        const auto e = cesaro_measure(model(a, w), {start, cells(symbols)}, runs, horizon, seed);
        py::dict d;
        d["value"] = e.value;
        d["prefix_values"] = e.prefix_values;
        d["shifted_measures"] = e.shifted_measures;
        return d;
      },
      py::arg("alphabet"), py::arg("process"), py::arg("cells"), py::arg("runs"), py::arg("horizon"), py::arg("seed"),
      py::arg("start") = 0);
  m.def(
      "ergodicity_check",
      [](const PathAlphabet& a, const WaypointProcessSpec& w, const std::string& observable,
         const std::vector<std::uint64_t>& seeds, std::size_t horizon, std::size_t nodes, double tolerance) {
        const auto r = ergodicity_check(model(a, w), parse_observable(observable), seeds, horizon, nodes, tolerance);
        py::dict d;
        d["values"] = r.values;
        d["spread"] = r.spread;
        d["stddev"] = r.stddev;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("alphabet"), py::arg("process"), py::arg("observable"), py::arg("seeds"), py::arg("horizon"),
      py::arg("nodes") = 1, py::arg("tolerance") = 0.02);

  py::class_<ContinuousTrace>(m, "ContinuousTrace")
      .def_property_readonly("node_count", &ContinuousTrace::node_count)
      .def_property_readonly("steps", &ContinuousTrace::steps)
      .def("samples",
           [](const ContinuousTrace& ct, std::size_t node) {
             std::vector<std::pair<double, double>> out;
             for (Point p : ct.samples.at(node)) out.emplace_back(p.x, p.y);
             return out;
           })
      .def("legs",
           [](const ContinuousTrace& ct, std::size_t node) {
             py::list out;
             for (const Leg& l : ct.legs.at(node)) {
               py::dict d;
               d["origin"] = std::make_pair(l.origin.x, l.origin.y);
               d["destination"] = std::make_pair(l.destination.x, l.destination.y);
               d["speed"] = l.speed;
               d["start_time"] = l.start_time;
               d["pause"] = l.pause;
               out.append(d);
             }
             return out;
           })
      .def("ns2", [](const ContinuousTrace& ct) { return export_ns2(ct); })
      .def(
          "traffic",
          [](const ContinuousTrace& ct, const std::vector<std::pair<std::size_t, std::size_t>>& flows, double range,
             double bitrate, double packet_size) {
            std::vector<Flow> fs;
            for (auto [s, k] : flows) fs.push_back({s, k});
            const auto r = traffic_proxy(ct, fs, range, bitrate, packet_size);
            py::dict d;
            d["times"] = r.times;
            d["cumulative"] = r.cumulative;
            return d;
          },
          py::arg("flows"), py::arg("range") = 250.0, py::arg("bitrate") = 512.0, py::arg("packet_size") = 512.0)
      .def("discretize", [](const ContinuousTrace& ct, int width, int height) {
        std::vector<std::vector<CellTuple>> out;
        for (const auto& n : discretize_trace(ct, {width, height}, ct.dt)) out.push_back(tuples(n.trace.cells));
        return out;
      });
  m.def(
      "simulate_continuous",
      [](double width, double height, double min_speed, double max_speed, double pause_time, std::size_t nodes,
         double duration, double dt, std::uint64_t seed) {
        return simulate_continuous({width, height, min_speed, max_speed, pause_time}, nodes, duration, dt, seed);
      },
      py::arg("width"), py::arg("height"), py::arg("min_speed"), py::arg("max_speed"), py::arg("pause_time") = 0.0,
      py::arg("nodes") = 1, py::arg("duration") = 100.0, py::arg("dt") = 1.0, py::arg("seed") = 1);

  m.def("config_digest", [](const std::string& text) { return config_digest(parse_config(text)); });
  m.def(
      "run_command",
      [](const std::string& name, const std::string& config, const std::vector<std::uint64_t>& seeds,
         const std::string& out) {
        std::ostringstream log, err;
        const int code = run_command(name, CommandOptions{config, seeds, out}, log, err);
        return py::make_tuple(code, log.str(), err.str());
      },
      py::arg("name"), py::arg("config"), py::arg("seeds") = std::vector<std::uint64_t>{}, py::arg("out") = "");
}
