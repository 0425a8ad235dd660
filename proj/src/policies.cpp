#include "cranring/policies.hpp"

namespace cranring {

const char* to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Fifo: return "fifo";
        case PolicyKind::CranPriority: return "cran_priority";
        case PolicyKind::DeterministicReservation: return "deterministic";
    }
    return "?";
}

PolicyKind policy_from_string(const std::string& s) {
    if (s == "fifo") return PolicyKind::Fifo;
    if (s == "cran_priority") return PolicyKind::CranPriority;
    if (s == "deterministic") return PolicyKind::DeterministicReservation;
    throw ConfigError("unknown policy: " + s);
}

BufferChoice fifo_select(const NodeBuffers& b, TieBreak tie) {
    if (b.cran.empty() && b.be.empty()) return BufferChoice::None;
    if (b.cran.empty()) return BufferChoice::Be;
    if (b.be.empty()) return BufferChoice::Cran;
    Uot tc = b.cran.front().enqueue_time;
    Uot tb = b.be.front().enqueue_time;
    if (tc != tb) return tc < tb ? BufferChoice::Cran : BufferChoice::Be;
    return tie == TieBreak::CranFirst ? BufferChoice::Cran : BufferChoice::Be;
}

BufferChoice cran_priority_select(const NodeBuffers& b) {
    if (!b.cran.empty()) return BufferChoice::Cran;
    if (!b.be.empty()) return BufferChoice::Be;
    return BufferChoice::None;
}

DetSchedule build_det_schedule(const Assignment& a, const RingTopology& topo,
                               const CapacityParams& p) {
    if (static_cast<int>(a.rrhs.size()) != topo.rrh_count())
        throw ConfigError("assignment does not match the topology's RRH count");
    const Uot P = p.period;
    const Uot RS = p.ring_size;
    const Uot F = p.accel;

    DetSchedule sched;
    sched.reserves.assign(topo.node_count(), std::vector<std::vector<int>>(P));
    sched.fills.assign(topo.node_count(), std::vector<std::vector<int>>(P));

    auto add_stream = [&](const StreamMeta& meta, Uot first_fill, int count) {
        int id = sched.stream_count();
        sched.streams.push_back(meta);
        for (int j = 0; j < count; ++j) {
            Uot f = floor_mod(first_fill + j * F, P);
            sched.fills[meta.node][f].push_back(id);
            sched.reserves[meta.node][floor_mod(f - RS, P)].push_back(id);
            if (f < RS) {
                // the backing reservation predates the start of the run
                int container = static_cast<int>(
                    floor_mod(f - topo.dist_from_origin(meta.node), RS));
                sched.seeds.push_back({container, meta.node, f - RS, id});
            }
        }
        return id;
    };

    // uplink first, then downlink, so uplink stream ids form a prefix
    for (const RrhPlan& plan : a.rrhs) {
        int node = topo.rrh_node(plan.rrh_id);
        for (const EmissionSegment& seg : plan.segments) {
            add_stream({node, TrafficClass::CranUp, plan.rrh_id, seg.position, seg.position},
                       seg.start, seg.count);
        }
    }
    sched.uplink_streams = sched.stream_count();
    for (const RrhPlan& plan : a.rrhs) {
        int node = topo.rrh_node(plan.rrh_id);
        Uot delay = topo.omega(node, topo.bbu_node());
        for (const EmissionSegment& seg : plan.segments) {
            int dn_pos = static_cast<int>(floor_mod(seg.position + 1, F));
            add_stream({topo.bbu_node(), TrafficClass::CranDown, plan.rrh_id, dn_pos, seg.position},
                       seg.start + delay + 1, seg.count);
        }
    }
    return sched;
}

}  // namespace cranring
