#include "cranring/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

#include <json.hpp>

#include "cranring/rng.hpp"

namespace cranring {

using nlohmann::json;
using nlohmann::ordered_json;

void ExperimentConfig::validate() const {
    params.validate();
    if (nodes < 1) throw ConfigError("config: nodes must be >= 1");
    if (!arcs.empty() && static_cast<int>(arcs.size()) != nodes)
        throw ConfigError("config: arcs must list one weight per node");
    if (container_bytes <= 0) throw ConfigError("config: container size must be positive");
    if (be_load < 0.0 || be_load >= 1.0) throw ConfigError("config: be load must be in [0, 1)");
    if (be_p_high <= 0.0 || be_p_high >= 1.0) throw ConfigError("config: p_high must be in (0, 1)");
    if (be_t_max <= 0) throw ConfigError("config: t_max must be positive");
    if (horizon < (warmup_periods + 10) * params.period)
        throw ConfigError("config: horizon must cover warm-up plus at least 10 periods");
    if (replications < 1) throw ConfigError("config: replications must be >= 1");
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
}

RingTopology ExperimentConfig::build_topology() const {
    std::vector<int> attach = rrh_nodes;
    if (attach.empty()) {
        for (int i = 0; i < params.antennas; ++i) attach.push_back(i % nodes);
    }
    if (static_cast<int>(attach.size()) != params.antennas)
        throw ConfigError("config: rrh_nodes must list one node per antenna");
    int bbu = bbu_node < 0 ? nodes - 1 : bbu_node;
    if (arcs.empty()) return RingTopology::equidistant(nodes, params.ring_size, attach, bbu);
    RingTopology topo(arcs, attach, bbu);
    if (topo.ring_size() != params.ring_size)
        throw ConfigError("config: arc weights must sum to RS");
    return topo;
}

BeArrivalSpec ExperimentConfig::build_be_spec() const {
    BeArrivalSpec spec;
    spec.capacity = container_bytes;
    spec.t_max = be_t_max;
    spec.q_high = container_bytes;
    double per_node = be_load / static_cast<double>(nodes);
    // keep the high mode rarer than the target rate, then solve the low
    // mode so that E[q]/C matches the per-node load
    spec.p_high = be_p_high < per_node ? be_p_high : per_node / 2.0;
    double q_low = static_cast<double>(container_bytes) * (per_node - spec.p_high) /
                   (1.0 - spec.p_high);
    spec.q_low = static_cast<std::int64_t>(std::llround(q_low));
    if (spec.q_low < 0) spec.q_low = 0;
    return spec;
}

Assignment ExperimentConfig::build_assignment(const RingTopology& topo) const {
    if (scheduler == "prop1") return prop1_assign(params, topo);
    if (scheduler == "naive") return naive_assign(params, topo);
    if (scheduler == "compact") return compact_positions(params, topo);
    if (scheduler == "balance_period") return balance_period(naive_assign(params, topo), params, topo);
    if (scheduler == "compact_balance")
        return balance_period(compact_positions(params, topo), params, topo);
    if (scheduler == "balance_used") {
        Assignment base = compact_positions(params, topo);
        return balance_used_positions(base, static_cast<int>(base.used_rrh_positions().size()),
                                      params, topo);
    }
    if (scheduler == "saturate") return saturate_positions(params, topo);
    throw ConfigError("config: unknown scheduler '" + scheduler + "'");
}

namespace {

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
    if (doc.contains(key)) out = doc.at(key).get<T>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json doc = json::parse(text);
    ExperimentConfig c;
    if (doc.contains("topology")) {
        const json& t = doc.at("topology");
        read_field(t, "nodes", c.nodes);
        if (t.contains("arcs") && t.at("arcs").is_array())
            c.arcs = t.at("arcs").get<std::vector<Uot>>();
        read_field(t, "rrh_nodes", c.rrh_nodes);
        read_field(t, "bbu_node", c.bbu_node);
    }
    if (doc.contains("params")) {
        const json& p = doc.at("params");
        read_field(p, "P", c.params.period);
        read_field(p, "RS", c.params.ring_size);
        read_field(p, "ET", c.params.emission_time);
        read_field(p, "F", c.params.accel);
        read_field(p, "k", c.params.antennas);
        read_field(p, "C", c.container_bytes);
    }
    if (doc.contains("policy")) c.policy = policy_from_string(doc.at("policy").get<std::string>());
    read_field(doc, "scheduler", c.scheduler);
    if (doc.contains("be")) {
        const json& b = doc.at("be");
        read_field(b, "enabled", c.be_enabled);
        read_field(b, "target_load", c.be_load);
        read_field(b, "p_high", c.be_p_high);
        read_field(b, "t_max", c.be_t_max);
    }
    read_field(doc, "horizon", c.horizon);
    read_field(doc, "replications", c.replications);
    read_field(doc, "warmup_periods", c.warmup_periods);
    read_field(doc, "master_seed", c.master_seed);
    read_field(doc, "jobs", c.jobs);
    return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
    ordered_json doc;
    doc["topology"] = {{"nodes", nodes}, {"bbu_node", bbu_node < 0 ? nodes - 1 : bbu_node}};
    if (!arcs.empty()) doc["topology"]["arcs"] = arcs;
    if (!rrh_nodes.empty()) doc["topology"]["rrh_nodes"] = rrh_nodes;
    doc["params"] = {{"P", params.period}, {"RS", params.ring_size},
                     {"ET", params.emission_time}, {"F", params.accel},
                     {"k", params.antennas}, {"C", container_bytes}};
    doc["policy"] = to_string(policy);
    if (policy == PolicyKind::DeterministicReservation) doc["scheduler"] = scheduler;
    doc["be"] = {{"enabled", be_enabled}, {"target_load", be_load},
                 {"p_high", be_p_high}, {"t_max", be_t_max}};
    doc["horizon"] = horizon;
    doc["replications"] = replications;
    doc["warmup_periods"] = warmup_periods;
    doc["master_seed"] = master_seed;
    return doc.dump(2) + "\n";
}

namespace {

MetricsSink run_one_replication(const ExperimentConfig& config, const RingTopology& topo,
                                const std::optional<Assignment>& assignment, int rep) {
    std::uint64_t seed = child_seed(config.master_seed, static_cast<std::uint64_t>(rep));
    SimOptions opt;
    opt.policy = config.policy;
    opt.assignment = assignment;
    opt.be_enabled = config.be_enabled;
    opt.be = config.build_be_spec();
    opt.horizon = config.horizon;
    opt.warmup_periods = config.warmup_periods;
    opt.seed = seed;
    if (config.policy != PolicyKind::DeterministicReservation) {
        Rng rng(seed);
        opt.offsets.resize(topo.rrh_count());
        for (Uot& m : opt.offsets)
            m = static_cast<Uot>(rng.below(static_cast<std::uint64_t>(config.params.period)));
    }
    Simulation sim(topo, config.params, opt);
    sim.run();
    return sim.take_result().metrics;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& config) {
    config.validate();
    RingTopology topo = config.build_topology();
    std::optional<Assignment> assignment;
    if (config.policy == PolicyKind::DeterministicReservation)
        assignment = config.build_assignment(topo);

    std::vector<MetricsSink> reps(static_cast<std::size_t>(config.replications));
    if (config.jobs <= 1) {
        for (int r = 0; r < config.replications; ++r)
            reps[r] = run_one_replication(config, topo, assignment, r);
    } else {
        for (int base = 0; base < config.replications; base += config.jobs) {
            int end = std::min(config.replications, base + config.jobs);
            std::vector<std::future<MetricsSink>> batch;
            for (int r = base; r < end; ++r) {
                batch.push_back(std::async(std::launch::async, run_one_replication,
                                           std::cref(config), std::cref(topo),
                                           std::cref(assignment), r));
            }
            for (int r = base; r < end; ++r) reps[r] = batch[r - base].get();
        }
    }

    RunOutput out;
    for (const MetricsSink& m : reps) out.merged.merge(m);
    out.periods_measured = (config.horizon - config.warmup_periods * config.params.period) /
                           config.params.period;
    out.load_fraction = out.merged.load_fraction(
        config.params.period, out.periods_measured * config.replications);

    for (int c = 0; c < kTrafficClassCount; ++c) {
        ClassStats& st = out.stats[c];
        st.samples = out.merged.histogram(static_cast<TrafficClass>(c)).total();
        for (const MetricsSink& m : reps) {
            const LatencyHistogram& h = m.histogram(static_cast<TrafficClass>(c));
            if (!h.empty()) st.rep_means.push_back(h.mean());
        }
        if (!st.rep_means.empty()) {
            double sum = 0.0;
            for (double v : st.rep_means) sum += v;
            st.mean = out.merged.histogram(static_cast<TrafficClass>(c)).mean();
            double rep_mean = sum / static_cast<double>(st.rep_means.size());
            double var = 0.0;
            for (double v : st.rep_means) var += (v - rep_mean) * (v - rep_mean);
            if (st.rep_means.size() > 1) {
                var /= static_cast<double>(st.rep_means.size() - 1);
                st.se = std::sqrt(var / static_cast<double>(st.rep_means.size()));
            }
        }
    }

    if (assignment) {
        out.assignment = assignment;
        out.reserved_unused = measure_waste(*assignment, topo, config.params).total;
    }
    return out;
}

namespace {

ordered_json summary_of_class(const LatencyHistogram& h) {
    ordered_json j;
    if (h.empty()) return j;
    LatencySummary s = summarize(h);
    j["samples"] = h.total();
    j["mean"] = s.mean;
    j["max"] = s.max;
    j["p50"] = s.p50;
    j["p90"] = s.p90;
    j["p99"] = s.p99;
    ordered_json cdf = ordered_json::array();
    for (const auto& [latency, fraction] : h.cdf()) cdf.push_back({latency, fraction});
    j["cdf"] = cdf;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

}  // namespace

void write_outputs(const RunOutput& out, const ExperimentConfig& config,
                   const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (int c = 0; c < kTrafficClassCount; ++c) {
        auto cls = static_cast<TrafficClass>(c);
        write_file(out_dir / (std::string("cdf_") + to_string(cls) + ".csv"),
                   histogram_csv(cls, out.merged.histogram(cls)));
    }
    ordered_json doc;
    doc["config"] = ordered_json::parse(config.to_json());
    doc["replications"] = config.replications;
    doc["periods_measured_per_replication"] = out.periods_measured;
    doc["load_fraction"] = out.load_fraction;
    ordered_json classes;
    for (int c = 0; c < kTrafficClassCount; ++c) {
        auto cls = static_cast<TrafficClass>(c);
        classes[to_string(cls)] = summary_of_class(out.merged.histogram(cls));
    }
    doc["classes"] = classes;
    if (out.assignment) doc["reserved_unused_per_period"] = out.reserved_unused;
    write_file(out_dir / "summary.json", doc.dump(2) + "\n");
    if (out.assignment) write_file(out_dir / "assignment.json", assignment_to_json(*out.assignment));
}

ExperimentConfig reference_config() {
    ExperimentConfig c;
    c.nodes = 5;
    c.params = CapacityParams{1000, 100, 500, 10, 5};
    c.container_bytes = 100000;
    c.be_enabled = true;
    c.be_load = 0.4;
    return c;
}

std::vector<Scenario> paper_suite(const SuiteOptions& opt) {
    auto base = [&](PolicyKind policy, const std::string& sched, int k, Uot et) {
        ExperimentConfig c = reference_config();
        c.policy = policy;
        c.scheduler = sched;
        c.params.antennas = k;
        c.params.emission_time = et;
        c.replications = opt.replications;
        c.horizon = opt.horizon;
        c.master_seed = opt.master_seed;
        c.jobs = opt.jobs;
        return c;
    };
    auto stoc = [&](PolicyKind p, int k, Uot et) { return base(p, "", k, et); };
    auto det = [&](const std::string& s, int k, Uot et) {
        return base(PolicyKind::DeterministicReservation, s, k, et);
    };

    std::vector<Scenario> suite;
    {
        Scenario s{"A_insertion_policies",
                   "stochastic insertion: does prioritizing C-RAN help it and hurt best effort?",
                   {}};
        s.runs.push_back({"fifo", stoc(PolicyKind::Fifo, 5, 500), {}});
        s.runs.push_back({"cran_priority", stoc(PolicyKind::CranPriority, 5, 500), {}});
        suite.push_back(std::move(s));
    }
    {
        Scenario s{"B_balance_inside_period",
                   "does spreading the emission blocks over the period help best effort?",
                   {}};
        s.runs.push_back({"naive", det("naive", 5, 500), {}});
        s.runs.push_back({"balance_period", det("balance_period", 5, 500), {}});
        suite.push_back(std::move(s));
    }
    {
        Scenario s{"C_compacting_positions",
                   "k=12, ET=200: compacting positions, then balancing on top",
                   {}};
        s.runs.push_back({"naive", det("naive", 12, 200), {}});
        s.runs.push_back({"compact", det("compact", 12, 200), {}});
        s.runs.push_back({"compact_balance", det("compact_balance", 12, 200), {}});
        s.runs.push_back({"balance_used", det("balance_used", 12, 200), {}});
        suite.push_back(std::move(s));
    }
    {
        Scenario s{"D_saturating_positions",
                   "saturating positions against balancing and plain FIFO",
                   {}};
        s.runs.push_back({"fifo", stoc(PolicyKind::Fifo, 5, 500), {}});
        s.runs.push_back({"saturate", det("saturate", 5, 500), {}});
        s.runs.push_back({"balance_period", det("balance_period", 5, 500), {}});
        suite.push_back(std::move(s));
    }
    for (Scenario& s : suite) {
        for (ScenarioRun& run : s.runs) run.output = run_experiment(run.config);
    }
    return suite;
}

std::string suite_table(const std::vector<Scenario>& scenarios) {
    std::ostringstream os;
    for (const Scenario& s : scenarios) {
        os << s.name << ": " << s.question << "\n";
        for (const ScenarioRun& run : s.runs) {
            os << "  " << run.label;
            for (int c = 0; c < kTrafficClassCount; ++c) {
                auto cls = static_cast<TrafficClass>(c);
                const LatencyHistogram& h = run.output.merged.histogram(cls);
                if (h.empty()) continue;
                os << "  " << to_string(cls) << ": mean=" << h.mean() << " max=" << h.max();
            }
            os << "\n";
        }
    }
    return os.str();
}

void write_suite_outputs(const std::vector<Scenario>& scenarios,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    ordered_json report;
    for (const Scenario& s : scenarios) {
        ordered_json js;
        js["question"] = s.question;
        for (const ScenarioRun& run : s.runs) {
            write_outputs(run.output, run.config, out_dir / s.name / run.label);
            ordered_json jr;
            for (int c = 0; c < kTrafficClassCount; ++c) {
                auto cls = static_cast<TrafficClass>(c);
                const ClassStats& st = run.output.cls(cls);
                if (st.samples == 0) continue;
                jr[to_string(cls)] = {{"mean", st.mean},
                                      {"se", st.se},
                                      {"max", run.output.merged.histogram(cls).max()}};
            }
            jr["load_fraction"] = run.output.load_fraction;
            js["runs"][run.label] = jr;
        }
        report[s.name] = js;
    }
    write_file(out_dir / "suite_report.json", report.dump(2) + "\n");
    write_file(out_dir / "suite_report.txt", suite_table(scenarios));
}

}  // namespace cranring
