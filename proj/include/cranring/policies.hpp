#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "cranring/scheduler.hpp"
#include "cranring/topology.hpp"
#include "cranring/traffic.hpp"
#include "cranring/types.hpp"

namespace cranring {

enum class PolicyKind : std::uint8_t { Fifo, CranPriority, DeterministicReservation };

const char* to_string(PolicyKind k);
PolicyKind policy_from_string(const std::string& s);

/// Tie-break between packets enqueued the same UoT under the FIFO rule.
enum class TieBreak : std::uint8_t { CranFirst, BeFirst };

/// Per-node insertion buffers. The FIFO rule still keeps the classes in
/// two queues but always picks the globally oldest head.
struct NodeBuffers {
    std::deque<InsertionBufferEntry> cran;
    std::deque<InsertionBufferEntry> be;

    bool empty() const { return cran.empty() && be.empty(); }
};

enum class BufferChoice : std::uint8_t { None, Cran, Be };

/// Oldest packet without class distinction; ties go to C-RAN (then lower
/// source id, which queue insertion order already provides).
BufferChoice fifo_select(const NodeBuffers& b, TieBreak tie = TieBreak::CranFirst);

/// The C-RAN buffer is drained first and the best-effort buffer is only
/// considered while it is empty.
BufferChoice cran_priority_select(const NodeBuffers& b);

/// One scheduled emission run of the deterministic policy. Uplink streams
/// fill at their RRH's node, downlink streams at the BBU node one UoT
/// after the corresponding uplink packet passes it. Each stream reserves
/// the container of every fill one circulation (RS) ahead.
struct StreamMeta {
    int node = 0;
    TrafficClass cls = TrafficClass::CranUp;
    int rrh_id = 0;     // owning RRH (also the packet queue key)
    int position = 0;   // arrival residue mod F at the BBU node
    int pair = 0;       // RRH-side position of the (RRH, BBU) pair
};

/// Static per-period action tables driving reservation and emission.
struct DetSchedule {
    int uplink_streams = 0;  // stream ids [0, uplink_streams) are uplink
    std::vector<StreamMeta> streams;

    // indexed [node][tick mod P] -> stream ids acting at that tick
    std::vector<std::vector<std::vector<int>>> reserves;
    std::vector<std::vector<std::vector<int>>> fills;

    /// Fills whose backing reservation would predate t = 0; seeded
    /// directly into the initial ring state (periodic steady start).
    struct SeedReservation {
        int container = 0;
        int node = 0;
        Uot placed = 0;
        int stream = 0;
    };
    std::vector<SeedReservation> seeds;

    int stream_count() const { return static_cast<int>(streams.size()); }
};

DetSchedule build_det_schedule(const Assignment& a, const RingTopology& topo,
                               const CapacityParams& p);

}  // namespace cranring
