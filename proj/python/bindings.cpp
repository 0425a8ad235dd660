// Python bindings for the ring scheduler and simulation harness.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cranring/harness.hpp"

namespace py = pybind11;
using namespace cranring;

namespace {

py::dict summary_dict(const LatencyHistogram& h) {
    py::dict d;
    d["samples"] = h.total();
    if (!h.empty()) {
        LatencySummary s = summarize(h);
        d["mean"] = s.mean;
        d["max"] = s.max;
        d["p50"] = s.p50;
        d["p90"] = s.p90;
        d["p99"] = s.p99;
        py::list cdf;
        for (const auto& [latency, fraction] : h.cdf())
            cdf.append(py::make_tuple(latency, fraction));
        d["cdf"] = cdf;
    }
    return d;
}

py::dict run_output_dict(const RunOutput& out) {
    py::dict d;
    d["load_fraction"] = out.load_fraction;
    d["periods_measured"] = out.periods_measured;
    py::dict classes;
    for (int c = 0; c < kTrafficClassCount; ++c) {
        auto cls = static_cast<TrafficClass>(c);
        py::dict cd = summary_dict(out.merged.histogram(cls));
        cd["se_of_mean"] = out.cls(cls).se;
        classes[to_string(cls)] = cd;
    }
    d["classes"] = classes;
    if (out.assignment) {
        d["assignment"] = assignment_to_json(*out.assignment);
        d["reserved_unused_per_period"] = out.reserved_unused;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "slotted optical ring simulator: deterministic C-RAN scheduling, "
              "insertion policies and latency measurement";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<CapacityError>(m, "CapacityError");
    py::register_exception<InfeasibleError>(m, "InfeasibleError");
    py::register_exception<ScheduleFault>(m, "ScheduleFault");

    py::class_<CapacityParams>(m, "CapacityParams")
        .def(py::init([](Uot P, Uot RS, Uot ET, Uot F, int k) {
                 CapacityParams p{P, RS, ET, F, k};
                 p.validate();
                 return p;
             }),
             py::arg("P"), py::arg("RS"), py::arg("ET"), py::arg("F"), py::arg("k"))
        .def_readwrite("P", &CapacityParams::period)
        .def_readwrite("RS", &CapacityParams::ring_size)
        .def_readwrite("ET", &CapacityParams::emission_time)
        .def_readwrite("F", &CapacityParams::accel)
        .def_readwrite("k", &CapacityParams::antennas)
        .def("__repr__", [](const CapacityParams& p) {
            return "CapacityParams(P=" + std::to_string(p.period) +
                   ", RS=" + std::to_string(p.ring_size) +
                   ", ET=" + std::to_string(p.emission_time) +
                   ", F=" + std::to_string(p.accel) + ", k=" + std::to_string(p.antennas) + ")";
        });

    py::class_<RingTopology>(m, "RingTopology")
        .def(py::init<std::vector<Uot>, std::vector<int>, int>(), py::arg("arc_weights"),
             py::arg("rrh_nodes"), py::arg("bbu_node"))
        .def_static("equidistant", &RingTopology::equidistant, py::arg("nodes"), py::arg("rs"),
                    py::arg("rrh_nodes"), py::arg("bbu_node"))
        .def_property_readonly("ring_size", &RingTopology::ring_size)
        .def_property_readonly("node_count", &RingTopology::node_count)
        .def("omega", &RingTopology::omega, py::arg("u"), py::arg("v"));

    py::class_<Assignment>(m, "Assignment")
        .def_property_readonly("latency_bound", [](const Assignment& a) { return a.latency_bound; })
        .def_property_readonly("used_rrh_positions", &Assignment::used_rrh_positions)
        .def("offsets",
             [](const Assignment& a) {
                 py::dict d;
                 for (const RrhPlan& p : a.rrhs) d[py::int_(p.rrh_id)] = p.offset();
                 return d;
             })
        .def("segments",
             [](const Assignment& a) {
                 py::dict d;
                 for (const RrhPlan& p : a.rrhs) {
                     py::list segs;
                     for (const EmissionSegment& s : p.segments)
                         segs.append(py::make_tuple(s.start, s.count, s.position));
                     d[py::int_(p.rrh_id)] = segs;
                 }
                 return d;
             })
        .def("to_json", &assignment_to_json)
        .def("__repr__", [](const Assignment& a) {
            return "Assignment(rrhs=" + std::to_string(a.rrhs.size()) +
                   ", latency_bound=" + std::to_string(a.latency_bound) + ")";
        });

    m.def("assignment_from_json", &assignment_from_json, py::arg("text"));

    m.def("max_antennas_zero_latency", &max_antennas_zero_latency, py::arg("params"));
    m.def("max_antennas_saturating", &max_antennas_saturating, py::arg("params"));

    m.def("prop1_assign", &prop1_assign, py::arg("params"), py::arg("topology"));
    m.def("naive_assign", &naive_assign, py::arg("params"), py::arg("topology"));
    m.def("compact_positions", &compact_positions, py::arg("params"), py::arg("topology"));
    m.def("balance_period", &balance_period, py::arg("assignment"), py::arg("params"),
          py::arg("topology"));
    m.def("balance_used_positions", &balance_used_positions, py::arg("assignment"), py::arg("x"),
          py::arg("params"), py::arg("topology"));
    m.def("saturate_positions", &saturate_positions, py::arg("params"), py::arg("topology"));

    m.def(
        "check_validity",
        [](const Assignment& a, const RingTopology& topo, const CapacityParams& p) {
            ValidityReport r = check_validity(a, topo, p);
            return py::make_tuple(r.valid, r.conflict);
        },
        py::arg("assignment"), py::arg("topology"), py::arg("params"),
        "Brute-force simulation check; returns (valid, conflict_description).");

    m.def(
        "waste",
        [](const Assignment& a, const RingTopology& topo, const CapacityParams& p) {
            WasteReport w = measure_waste(a, topo, p);
            py::dict per_pair;
            for (const auto& [pair, value] : w.per_pair) per_pair[py::int_(pair)] = value;
            return py::make_tuple(w.total, per_pair);
        },
        py::arg("assignment"), py::arg("topology"), py::arg("params"),
        "Reserved-but-unused containers per period: (total, per_position_pair).");

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            ExperimentConfig c = ExperimentConfig::from_json(config_json);
            return run_output_dict(run_experiment(c));
        },
        py::arg("config_json"),
        "Run a config (JSON text) over its replications and return merged statistics.");

    m.def(
        "run_experiment_to_dir",
        [](const std::string& config_json, const std::filesystem::path& out_dir) {
            ExperimentConfig c = ExperimentConfig::from_json(config_json);
            RunOutput out = run_experiment(c);
            write_outputs(out, c, out_dir);
            return run_output_dict(out);
        },
        py::arg("config_json"), py::arg("out_dir"));

    m.def("reference_config_json", [] { return reference_config().to_json(); });
}
