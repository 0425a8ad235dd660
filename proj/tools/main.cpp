// cranring: simulate C-RAN and best-effort traffic on a slotted optical
// ring and compute collision-free emission schedules.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cranring/harness.hpp"

using namespace cranring;

namespace {

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> replications;
    std::optional<Uot> horizon;
    std::optional<int> jobs;

    void apply(ExperimentConfig& config) const {
        if (seed) config.master_seed = *seed;
        if (replications) config.replications = *replications;
        if (horizon) config.horizon = *horizon;
        if (jobs) config.jobs = *jobs;
    }
};

int cmd_run(const std::string& config_path, const std::string& out_dir, const Overrides& ov) {
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    ov.apply(config);
    RunOutput out = run_experiment(config);
    write_outputs(out, config, out_dir);
    std::cout << "wrote " << out_dir << " (load " << out.load_fraction << ")\n";
    for (int c = 0; c < kTrafficClassCount; ++c) {
        auto cls = static_cast<TrafficClass>(c);
        const LatencyHistogram& h = out.merged.histogram(cls);
        if (h.empty()) continue;
        std::cout << "  " << to_string(cls) << ": samples=" << h.total() << " mean=" << h.mean()
                  << " max=" << h.max() << "\n";
    }
    return 0;
}

int cmd_suite(const std::string& out_dir, const Overrides& ov) {
    SuiteOptions opt;
    if (ov.seed) opt.master_seed = *ov.seed;
    if (ov.replications) opt.replications = *ov.replications;
    if (ov.horizon) opt.horizon = *ov.horizon;
    if (ov.jobs) opt.jobs = *ov.jobs;
    std::vector<Scenario> scenarios = paper_suite(opt);
    write_suite_outputs(scenarios, out_dir);
    std::cout << suite_table(scenarios);
    std::cout << "wrote " << out_dir << "\n";
    return 0;
}

int cmd_schedule(const std::string& config_path, const std::string& out_file) {
    ExperimentConfig config = ExperimentConfig::from_file(config_path);
    RingTopology topo = config.build_topology();
    Assignment a = config.build_assignment(topo);
    std::string doc = assignment_to_json(a);
    if (!out_file.empty()) {
        std::ofstream f(out_file, std::ios::binary);
        f << doc;
    } else {
        std::cout << doc;
    }
    ValidityReport v = check_validity(a, topo, config.params);
    WasteReport w = measure_waste(a, topo, config.params);
    std::cout << "scheduler: " << config.scheduler << "\n";
    std::cout << "latency bound: " << a.latency_bound << " UoT\n";
    std::cout << "validity: " << (v.valid ? "valid" : "CONFLICT: " + v.conflict) << "\n";
    std::cout << "reserved-but-unused per period: " << w.total << " containers\n";
    for (const auto& [pair, value] : w.per_pair)
        std::cout << "  position pair (" << pair << "," << pair + 1 << "): " << value << "\n";
    return v.valid ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slotted optical ring simulator with deterministic C-RAN scheduling"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    std::string out_dir = "results";
    std::string out_file;

    CLI::App* run = app.add_subcommand("run", "run one experiment from a JSON config");
    run->add_option("config", config_path, "config JSON file")->required();
    run->add_option("--out-dir", out_dir, "output directory");

    CLI::App* suite = app.add_subcommand("suite", "run the four comparison scenarios");
    suite->add_option("--out-dir", out_dir, "output directory");

    CLI::App* schedule =
        app.add_subcommand("schedule", "print/export an assignment with validity and waste");
    schedule->add_option("config", config_path, "config JSON file")->required();
    schedule->add_option("--out", out_file, "write the assignment JSON here");

    for (CLI::App* sub : {run, suite}) {
        sub->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t v) { ov.seed = v; }, "master seed");
        sub->add_option_function<int>(
            "--replications", [&](int v) { ov.replications = v; }, "replication count");
        sub->add_option_function<Uot>(
            "--horizon", [&](Uot v) { ov.horizon = v; }, "simulated UoT per replication");
        sub->add_option_function<int>(
            "--jobs", [&](int v) { ov.jobs = v; }, "parallel replications");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, ov);
        if (suite->parsed()) return cmd_suite(out_dir, ov);
        if (schedule->parsed()) return cmd_schedule(config_path, out_file);
    } catch (const ScheduleFault& e) {
        std::cerr << "invalid schedule: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
