#pragma once

#include <array>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cranring/metrics.hpp"
#include "cranring/policies.hpp"
#include "cranring/ring.hpp"
#include "cranring/scheduler.hpp"
#include "cranring/traffic.hpp"
#include "cranring/types.hpp"

namespace cranring {

struct SimOptions {
    PolicyKind policy = PolicyKind::Fifo;
    std::optional<Assignment> assignment;  // deterministic policy
    std::vector<Uot> offsets;              // per-RRH data offsets (stochastic policies)

    bool be_enabled = false;
    BeArrivalSpec be;  // identical per node; seeds differ

    Uot horizon = 0;
    std::int64_t warmup_periods = 2;
    std::uint64_t seed = 1;
    TieBreak tie_break = TieBreak::CranFirst;

    /// Throw ScheduleFault on a refused reservation/scheduled fill
    /// (deterministic runs); the validity checker records instead.
    bool fault_on_refusal = true;
    bool stop_on_conflict = false;

    bool measure_waste = false;
    bool collect_stream_period_fills = false;  // checker instrumentation
    bool check_work_conservation = false;
};

struct SimResult {
    MetricsSink metrics;
    std::optional<std::string> conflict;

    std::int64_t reservation_violations = 0;
    std::int64_t node_tick_events = 0;
    std::int64_t work_conservation_violations = 0;
    std::int64_t reservations_expired_unconsumed = 0;

    WasteReport waste;              // when measure_waste
    std::int64_t periods_measured = 0;

    // [stream][period] fill counts, when collect_stream_period_fills
    std::vector<std::vector<std::int64_t>> stream_period_fills;
};

/// Sequential time-stepped simulator of one replication: ring state,
/// per-node insertion buffers, traffic generators and the insertion policy.
class Simulation {
public:
    Simulation(const RingTopology& topo, const CapacityParams& params, SimOptions options);

    void step();
    void run();  // steps until options.horizon

    Uot now() const { return ring_.now(); }
    const RingState& ring() const { return ring_; }
    SimResult take_result();

    const NodeBuffers& buffers(int node) const { return buffers_[node]; }

private:
    void deliver_read_events();
    void generate_arrivals();
    void act_deterministic(int node);
    void act_stochastic(int node);
    void record_fill(TrafficClass cls, Uot enqueue_time, int node);
    void note_conflict(const std::string& what);

    RingTopology topo_;
    CapacityParams params_;
    SimOptions opt_;
    DetSchedule sched_;  // empty tables for stochastic policies
    RingState ring_;

    std::vector<NodeBuffers> buffers_;                    // stochastic policies
    std::vector<std::deque<Uot>> up_queue_;               // det: per-RRH uplink packets
    std::vector<std::deque<Uot>> dn_queue_;               // det: per-RRH downlink packets
    std::vector<std::vector<std::vector<int>>> arrivals_; // [node][tick mod P] -> rrh ids
    std::vector<Uot> rrh_delay_;                          // omega(node, bbu), RS if same node
    std::vector<std::optional<BeGenerator>> be_;

    struct ReadEvent {
        int rrh_id;
    };
    std::vector<std::vector<ReadEvent>> events_;  // ring buffer over RS + 2 ticks

    // free-but-reserved container passes observed at the BBU node, per
    // stream: each one is a container-fill opportunity the reservation
    // scheme denied to best-effort traffic
    std::vector<std::int64_t> reserved_free_passes_;

    Uot warmup_end_ = 0;
    bool measuring_ = false;
    SimResult result_;
};

}  // namespace cranring
