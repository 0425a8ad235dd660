// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Tolerances and thresholds are pinned in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cranring/harness.hpp"
#include "cranring/rng.hpp"
#include "cranring/scheduler.hpp"
#include "cranring/simulation.hpp"
#include "draws.hpp"

using namespace cranring;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

CapacityParams table_params(int k, Uot et = 500) { return CapacityParams{1000, 100, et, 10, k}; }

RingTopology table_topology(int k, int nodes = 5) {
    std::vector<int> attach(k);
    for (int i = 0; i < k; ++i) attach[i] = i % nodes;
    return RingTopology::equidistant(nodes, 100, attach, nodes - 1);
}

/// RRHs kept off the BBU node: the waste accounting of the position-packing
/// analysis assumes every handoff releases upstream of the BBU node.
RingTopology offside_topology(int k, int nodes = 5) {
    std::vector<int> attach(k);
    for (int i = 0; i < k; ++i) attach[i] = i % (nodes - 1);
    return RingTopology::equidistant(nodes, 100, attach, nodes - 1);
}

BeArrivalSpec be_spec_for(double total_load, int nodes, std::int64_t capacity = 100000) {
    BeArrivalSpec spec;
    spec.capacity = capacity;
    spec.q_high = capacity;
    spec.t_max = 100;
    double per_node = total_load / nodes;
    spec.p_high = per_node > 0.1 ? 0.05 : per_node / 2.0;
    spec.q_low = static_cast<std::int64_t>(std::llround(
        static_cast<double>(capacity) * (per_node - spec.p_high) / (1.0 - spec.p_high)));
    return spec;
}

struct DetRun {
    SimResult result;
};

DetRun run_det(const Assignment& a, const RingTopology& topo, const CapacityParams& p,
               Uot periods, bool with_be, std::uint64_t seed, double be_load = 0.4) {
    SimOptions opt;
    opt.policy = PolicyKind::DeterministicReservation;
    opt.assignment = a;
    opt.horizon = periods * p.period;
    opt.warmup_periods = 0;  // deterministic runs start in steady state
    opt.seed = seed;
    if (with_be) {
        opt.be_enabled = true;
        opt.be = be_spec_for(be_load, topo.node_count());
    }
    Simulation sim(topo, p, opt);
    sim.run();
    return {sim.take_result()};
}

double se_diff(const ClassStats& a, const ClassStats& b) {
    return std::sqrt(a.se * a.se + b.se * b.se);
}

/// a < b with a margin exceeding the across-replication standard error
bool ordered_below(const ClassStats& a, const ClassStats& b) {
    return b.mean - a.mean > se_diff(a, b);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- criteria

void criterion1_capacity() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = max_antennas_zero_latency(table_params(5)) == 5;
    pass = pass && max_antennas_saturating(table_params(9)) == 9;
    bool nine_ok = false, ten_rejected = false;
    try {
        Assignment a = saturate_positions(table_params(9), table_topology(9));
        nine_ok = check_validity(a, table_topology(9), table_params(9)).valid;
    } catch (const CapacityError&) {
    }
    try {
        saturate_positions(table_params(10), table_topology(10));
    } catch (const CapacityError&) {
        ten_rejected = true;
    }
    pass = pass && nine_ok && ten_rejected;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "zero-latency max = %d (want 5), saturating k=9 valid=%d, k=10 rejected=%d "
                  "[%.2fs]",
                  max_antennas_zero_latency(table_params(5)), nine_ok ? 1 : 0,
                  ten_rejected ? 1 : 0, elapsed_s(t0));
    report(1, "capacity formulas", pass, buf);
}

struct SweepOutcome {
    int draws = 0;
    int zero_latency_runs = 0;
    std::int64_t cran_packets = 0;
    int nonzero_latency_runs = 0;
    int checker_accepts = 0;
    int checker_runs = 0;
};

SweepOutcome sweep_zero_latency(int draw_count, std::uint64_t seed) {
    SweepOutcome out;
    Rng rng(seed);
    for (int i = 0; i < draw_count; ++i) {
        testing::Draw d = testing::random_feasible(rng, 10);
        RingTopology topo = d.topology();
        std::vector<Assignment> zero_latency;
        Assignment naive = naive_assign(d.params, topo);
        zero_latency.push_back(naive);
        Assignment compact = compact_positions(d.params, topo);
        zero_latency.push_back(compact);
        zero_latency.push_back(balance_period(naive, d.params, topo));
        zero_latency.push_back(balance_used_positions(
            compact, static_cast<int>(compact.used_rrh_positions().size()), d.params, topo));
        if (d.params.antennas * d.params.emission_time + d.params.ring_size <= d.params.period)
            zero_latency.push_back(prop1_assign(d.params, topo));

        for (const Assignment& a : zero_latency) {
            ++out.checker_runs;
            if (check_validity(a, topo, d.params).valid) ++out.checker_accepts;
            DetRun r = run_det(a, topo, d.params, 100, true, seed + i, 0.3);
            ++out.zero_latency_runs;
            const LatencyHistogram& up = r.result.metrics.histogram(TrafficClass::CranUp);
            const LatencyHistogram& dn = r.result.metrics.histogram(TrafficClass::CranDown);
            out.cran_packets += up.total() + dn.total();
            if (r.result.conflict || up.max() != 0 || dn.max() != 0) ++out.nonzero_latency_runs;
        }
        // saturating outputs also go through the checker (accept side)
        Assignment sat = saturate_positions(d.params, topo);
        ++out.checker_runs;
        if (check_validity(sat, topo, d.params).valid) ++out.checker_accepts;
        ++out.draws;
    }
    return out;
}

SweepOutcome g_sweep;  // shared between criteria 2 and 6

void criterion2_zero_latency() {
    auto t0 = std::chrono::steady_clock::now();
    g_sweep = sweep_zero_latency(200, 0xC2A11);

    // reference configuration, every zero-latency scheduler, 100 periods
    CapacityParams p = table_params(5);
    RingTopology topo = table_topology(5);
    Assignment naive = naive_assign(p, topo);
    Assignment compact = compact_positions(p, topo);
    std::vector<Assignment> table_assignments{
        naive, compact, balance_period(naive, p, topo),
        balance_used_positions(compact, 5, p, topo)};
    int table_bad = 0;
    std::int64_t table_packets = 0;
    for (const Assignment& a : table_assignments) {
        DetRun r = run_det(a, topo, p, 100, true, 42);
        const LatencyHistogram& up = r.result.metrics.histogram(TrafficClass::CranUp);
        const LatencyHistogram& dn = r.result.metrics.histogram(TrafficClass::CranDown);
        table_packets += up.total() + dn.total();
        if (r.result.conflict || up.max() != 0 || dn.max() != 0) ++table_bad;
    }

    bool pass = g_sweep.draws == 200 && g_sweep.nonzero_latency_runs == 0 && table_bad == 0 &&
                table_packets == 4 * 2 * 5 * 50 * 100;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%d draws, %d runs, %lld C-RAN packets all at latency 0; reference config "
                  "%lld packets at 0 [%.1fs]",
                  g_sweep.draws, g_sweep.zero_latency_runs,
                  static_cast<long long>(g_sweep.cran_packets),
                  static_cast<long long>(table_packets), elapsed_s(t0));
    report(2, "zero latency for every zero-latency scheduler", pass, buf);
}

void criterion3_saturating_bound() {
    auto t0 = std::chrono::steady_clock::now();
    CapacityParams p = table_params(5);
    RingTopology topo = table_topology(5);
    Assignment a = saturate_positions(p, topo);
    DetRun r = run_det(a, topo, p, 100, true, 7);
    const LatencyHistogram& up = r.result.metrics.histogram(TrafficClass::CranUp);
    const LatencyHistogram& dn = r.result.metrics.histogram(TrafficClass::CranDown);
    // max latency exactly 2, and only the values 0 and 2 occur
    bool pass = !r.result.conflict && up.max() == 2 && dn.max() == 0;
    std::int64_t at(0);
    for (Uot l = 0; l <= up.max_latency_tracked(); ++l) {
        if (l != 0 && l != 2 && up.count_at(l) > 0) pass = false;
        if (l == 2) at = up.count_at(l);
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "uplink max = %lld UoT (want 2), %lld packets at 2, downlink max = %lld [%.2fs]",
                  static_cast<long long>(up.max()), static_cast<long long>(at),
                  static_cast<long long>(dn.max()), elapsed_s(t0));
    report(3, "saturating latency bound of 2 UoT", pass, buf);
}

void criterion4_reservation_guarantee() {
    auto t0 = std::chrono::steady_clock::now();
    CapacityParams p = table_params(5);
    RingTopology topo = table_topology(5);
    Assignment a = saturate_positions(p, topo);
    DetRun r = run_det(a, topo, p, 2000, true, 13);  // 2000 periods = 1e7 node-tick events
    bool pass = r.result.node_tick_events >= 10000000 && r.result.reservation_violations == 0 &&
                !r.result.conflict;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%lld step events sampled, %lld violations [%.1fs]",
                  static_cast<long long>(r.result.node_tick_events),
                  static_cast<long long>(r.result.reservation_violations), elapsed_s(t0));
    report(4, "reservation guarantee (fillable exactly RS later)", pass, buf);
}

void criterion5_waste() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    {  // prop1 and compact: < 2RS per used position pair
        CapacityParams p = table_params(4, 200);
        RingTopology topo = offside_topology(4);
        WasteReport w = measure_waste(prop1_assign(p, topo), topo, p);
        for (const auto& [pair, v] : w.per_pair) pass = pass && v < 200.0;
        detail += "prop1(k=4,ET=200) per-pair " + std::to_string(w.total) + "; ";
    }
    {
        CapacityParams p = table_params(12, 200);
        RingTopology topo = offside_topology(12);
        WasteReport w = measure_waste(compact_positions(p, topo), topo, p);
        double worst = 0;
        for (const auto& [pair, v] : w.per_pair) {
            pass = pass && v < 200.0;
            worst = std::max(worst, v);
        }
        detail += "compact(k=12) worst pair " + std::to_string(worst) + " < 200; ";
    }
    {  // fully saturated position wastes exactly RS
        CapacityParams p = table_params(3, 300);  // 3*300 + 100 = P
        RingTopology topo = offside_topology(3);
        WasteReport w = measure_waste(prop1_assign(p, topo), topo, p);
        pass = pass && w.per_pair.size() == 1 &&
               std::llround(w.per_pair.begin()->second) == 100;
        detail += "saturated prop1 position " + std::to_string(w.total) + " = RS; ";
    }
    {  // every position of the k=9 saturating plan is fully used: RS each
        CapacityParams p = table_params(9);
        RingTopology topo = offside_topology(9);
        WasteReport w = measure_waste(saturate_positions(p, topo), topo, p);
        for (const auto& [pair, v] : w.per_pair) pass = pass && std::llround(v) == 100;
        detail += "saturate(k=9) " + std::to_string(w.per_pair.size()) + " positions at RS";
    }
    char buf[240];
    std::snprintf(buf, sizeof buf, "%s [%.1fs]", detail.c_str(), elapsed_s(t0));
    report(5, "waste bounds", pass, buf);
}

void criterion6_checker() {
    auto t0 = std::chrono::steady_clock::now();
    // accept side: every scheduler output of the criterion-2 sweep
    bool accept_ok = g_sweep.checker_runs > 0 && g_sweep.checker_accepts == g_sweep.checker_runs;

    // reject side: 100 mutated assignments forcing two RRHs onto one container
    Rng rng(0xC6);
    int rejected = 0, built = 0;
    while (built < 100) {
        testing::Draw d = testing::random_feasible(rng, 10);
        if (d.params.antennas < 2) continue;
        RingTopology topo = d.topology();
        Assignment a = compact_positions(d.params, topo);
        int ia = static_cast<int>(rng.below(a.rrhs.size()));
        int ib = static_cast<int>(rng.below(a.rrhs.size() - 1));
        if (ib >= ia) ++ib;
        const RrhPlan& victim = a.rrhs[ia];
        RrhPlan& mutant = a.rrhs[ib];
        int ua = topo.rrh_node(victim.rrh_id);
        int ub = topo.rrh_node(mutant.rrh_id);
        // claim the same physical containers the victim fills, while they
        // are still circulating filled (omega(ua,ub) < RS ahead), or the
        // same tick when co-located
        Uot shift = ua == ub ? 0 : topo.omega(ua, ub);
        mutant.segments = victim.segments;
        for (EmissionSegment& seg : mutant.segments) {
            seg.start = floor_mod(victim.segments[0].start + shift, d.params.period);
            seg.position =
                static_cast<int>(floor_mod(seg.position + shift, d.params.accel));
        }
        a.refresh_latency_bound();
        ++built;
        if (!check_validity(a, topo, d.params).valid) ++rejected;
    }
    bool pass = accept_ok && rejected == 100;
    char buf[160];
    std::snprintf(buf, sizeof buf, "accepted %d/%d scheduler outputs, rejected %d/100 mutants [%.1fs]",
                  g_sweep.checker_accepts, g_sweep.checker_runs, rejected, elapsed_s(t0));
    report(6, "validity oracle equivalence", pass, buf);
}

std::vector<Scenario> g_suite;

void criterion7_orderings() {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOptions opt;
    opt.replications = 32;
    opt.horizon = 200000;
    opt.master_seed = 0xC7;
    g_suite = paper_suite(opt);

    auto find = [&](const std::string& scenario, const std::string& label) -> const RunOutput& {
        for (const Scenario& s : g_suite) {
            if (s.name != scenario) continue;
            for (const ScenarioRun& r : s.runs) {
                if (r.label == label) return r.output;
            }
        }
        throw std::runtime_error("missing scenario run " + scenario + "/" + label);
    };
    const RunOutput& fifo = find("A_insertion_policies", "fifo");
    const RunOutput& prio = find("A_insertion_policies", "cran_priority");
    const RunOutput& naive5 = find("B_balance_inside_period", "naive");
    const RunOutput& bal5 = find("B_balance_inside_period", "balance_period");
    const RunOutput& naive12 = find("C_compacting_positions", "naive");
    const RunOutput& compact12 = find("C_compacting_positions", "compact");
    const RunOutput& cb12 = find("C_compacting_positions", "compact_balance");
    const RunOutput& bu12 = find("C_compacting_positions", "balance_used");
    const RunOutput& satD = find("D_saturating_positions", "saturate");
    const RunOutput& balD = find("D_saturating_positions", "balance_period");

    auto up = [](const RunOutput& r) { return r.cls(TrafficClass::CranUp); };
    auto be = [](const RunOutput& r) { return r.cls(TrafficClass::BestEffort); };

    bool a_cran = ordered_below(up(prio), up(fifo));
    bool a_be = ordered_below(be(fifo), be(prio));
    bool b_order = ordered_below(be(bal5), be(naive5));
    bool c_order = ordered_below(be(compact12), be(naive12)) &&
                   ordered_below(be(cb12), be(compact12));
    double improvement = be(compact12).mean - be(bu12).mean;
    double margin_d = se_diff(be(compact12), be(bu12));
    bool d_bound = improvement > -margin_d && improvement + margin_d < 10.0 / 2.0;  // F/2
    bool e_order = ordered_below(be(satD), be(balD));
    bool pass = a_cran && a_be && b_order && c_order && d_bound && e_order;

    char buf[420];
    std::snprintf(
        buf, sizeof buf,
        "(a) cran %.2f<%.2f be %.2f>%.2f:%d%d (b) %.2f<%.2f:%d (c) %.2f>%.2f>%.2f:%d "
        "(d) improvement %.3f in (0,5):%d (e) %.2f<%.2f:%d [%.0fs]",
        up(prio).mean, up(fifo).mean, be(prio).mean, be(fifo).mean, a_cran, a_be, be(bal5).mean,
        be(naive5).mean, b_order, be(naive12).mean, be(compact12).mean, be(cb12).mean, c_order,
        improvement, d_bound, be(satD).mean, be(balD).mean, e_order, elapsed_s(t0));
    report(7, "latency orderings across the scenario matrix", pass, buf);
}

void criterion8_updown_symmetry() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    for (const char* label : {"fifo", "cran_priority"}) {
        const RunOutput* out = nullptr;
        for (const Scenario& s : g_suite) {
            if (s.name != "A_insertion_policies") continue;
            for (const ScenarioRun& r : s.runs) {
                if (r.label == label) out = &r.output;
            }
        }
        if (!out) {
            pass = false;
            continue;
        }
        const LatencyHistogram& up = out->merged.histogram(TrafficClass::CranUp);
        const LatencyHistogram& dn = out->merged.histogram(TrafficClass::CranDown);
        double worst = 0.0;
        for (int d = 1; d <= 9; ++d) {
            double qa = static_cast<double>(up.quantile(d / 10.0));
            double qb = static_cast<double>(dn.quantile(d / 10.0));
            double tol = std::max(1.0, 0.02 * std::max(qa, qb));  // 2%, 1 UoT floor on integers
            if (std::abs(qa - qb) > tol) pass = false;
            if (std::max(qa, qb) > 0) worst = std::max(worst, std::abs(qa - qb) / std::max(qa, qb));
        }
        detail += std::string(label) + " worst decile gap " +
                  std::to_string(static_cast<int>(worst * 1000) / 10.0) + "%; ";
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s[%.1fs]", detail.c_str(), elapsed_s(t0));
    report(8, "uplink/downlink latency symmetry within 2% per decile", pass, buf);
}

void criterion9_determinism() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (PolicyKind policy : {PolicyKind::CranPriority, PolicyKind::DeterministicReservation}) {
        ExperimentConfig c = reference_config();
        c.policy = policy;
        c.scheduler = "saturate";
        c.horizon = 15000;
        c.replications = 3;
        c.master_seed = 99;
        fs::path d1 = fs::temp_directory_path() / "cranring_acc_det1";
        fs::path d2 = fs::temp_directory_path() / "cranring_acc_det2";
        fs::remove_all(d1);
        fs::remove_all(d2);
        write_outputs(run_experiment(c), c, d1);
        write_outputs(run_experiment(c), c, d2);
        for (const auto& entry : fs::directory_iterator(d1)) {
            fs::path other = d2 / entry.path().filename();
            if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) pass = false;
        }
        fs::remove_all(d1);
        fs::remove_all(d2);
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "stochastic and deterministic reruns byte-identical [%.1fs]",
                  elapsed_s(t0));
    report(9, "determinism of outputs under fixed config+seed", pass, buf);
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion1_capacity();
    criterion2_zero_latency();
    criterion3_saturating_bound();
    criterion4_reservation_guarantee();
    criterion5_waste();
    criterion6_checker();
    criterion7_orderings();
    criterion8_updown_symmetry();
    criterion9_determinism();
    std::printf("%s — %d criterion(s) failed, total %.0fs\n",
                g_failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT", g_failures,
                elapsed_s(t0));
    return g_failures == 0 ? 0 : 1;
}
