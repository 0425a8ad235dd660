#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cranring/metrics.hpp"
#include "cranring/policies.hpp"
#include "cranring/scheduler.hpp"
#include "cranring/simulation.hpp"
#include "cranring/topology.hpp"
#include "cranring/types.hpp"

namespace cranring {

/// One experiment: topology + parameters + policy + traffic mix, run over
/// seeded replications. Parsed from a single JSON document; CLI flags may
/// override the top-level fields.
struct ExperimentConfig {
    // topology
    int nodes = 5;
    std::vector<Uot> arcs;       // empty: equidistant (RS/nodes each)
    std::vector<int> rrh_nodes;  // empty: round robin starting at node 0
    int bbu_node = -1;           // -1: last node

    CapacityParams params{1000, 100, 500, 10, 5};
    std::int64_t container_bytes = 100000;  // C

    PolicyKind policy = PolicyKind::CranPriority;
    std::string scheduler = "compact_balance";  // deterministic policy only

    bool be_enabled = true;
    double be_load = 0.4;  // aggregate, as a fraction of ring capacity
    double be_p_high = 0.05;
    Uot be_t_max = 100;

    Uot horizon = 1000000;
    int replications = 100;
    std::int64_t warmup_periods = 2;
    std::uint64_t master_seed = 1;
    int jobs = 1;

    void validate() const;
    RingTopology build_topology() const;
    BeArrivalSpec build_be_spec() const;
    /// Dispatch on `scheduler`: prop1, naive, compact, balance_period,
    /// compact_balance, balance_used, saturate.
    Assignment build_assignment(const RingTopology& topo) const;

    static ExperimentConfig from_json(const std::string& text);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    std::string to_json() const;
};

/// Across-replication statistics of one traffic class.
struct ClassStats {
    std::int64_t samples = 0;
    double mean = 0.0;  // mean latency of the merged histogram
    double se = 0.0;    // standard error of the across-replication mean
    std::vector<double> rep_means;
};

struct RunOutput {
    MetricsSink merged;
    std::array<ClassStats, kTrafficClassCount> stats;
    double load_fraction = 0.0;
    std::int64_t periods_measured = 0;
    std::optional<Assignment> assignment;  // deterministic runs
    double reserved_unused = 0.0;          // per period, deterministic runs

    const ClassStats& cls(TrafficClass c) const { return stats[static_cast<int>(c)]; }
};

/// Run all replications (child seed = f(master_seed, index)) and merge.
/// Throws ScheduleFault if a deterministic schedule is invalid at runtime.
RunOutput run_experiment(const ExperimentConfig& config);

/// Write cdf_<class>.csv, summary.json and assignment.json (deterministic
/// runs) into out_dir; byte-identical for identical config + seed.
void write_outputs(const RunOutput& out, const ExperimentConfig& config,
                   const std::filesystem::path& out_dir);

struct ScenarioRun {
    std::string label;
    ExperimentConfig config;
    RunOutput output;
};

struct Scenario {
    std::string name;
    std::string question;  // what the comparison is about
    std::vector<ScenarioRun> runs;
};

struct SuiteOptions {
    int replications = 32;
    Uot horizon = 200000;
    std::uint64_t master_seed = 20260809;
    int jobs = 1;
};

/// The four comparisons of the experiment matrix:
///   A  FIFO vs C-RAN priority (stochastic insertion, reference params)
///   B  naive vs balancing inside the period, k = 5
///   C  naive vs compacting vs compacting+balancing vs balancing used
///      positions, k = 12, ET = 200
///   D  FIFO vs saturating positions vs balancing inside the period, k = 5
std::vector<Scenario> paper_suite(const SuiteOptions& opt);

/// Human-readable comparison table plus suite_report.json + per-run files.
void write_suite_outputs(const std::vector<Scenario>& scenarios,
                         const std::filesystem::path& out_dir);
std::string suite_table(const std::vector<Scenario>& scenarios);

/// Reference architecture parameters (Table-style defaults): P=1000,
/// RS=100, ET=500, F=10, k=5, C=100 kb, 5 equidistant nodes, one RRH per
/// node, C-RAN load 50%, BE load 40%.
ExperimentConfig reference_config();

}  // namespace cranring
