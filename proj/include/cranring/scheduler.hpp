#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cranring/topology.hpp"
#include "cranring/types.hpp"

namespace cranring {

/// Timing parameters of the architecture, all in UoT.
struct CapacityParams {
    Uot period = 0;         // P
    Uot ring_size = 0;      // RS
    Uot emission_time = 0;  // ET
    Uot accel = 0;          // F
    int antennas = 0;       // k

    int packets_per_period() const { return static_cast<int>(emission_time / accel); }

    /// Basic shape checks shared by every consumer.
    void validate() const;
    /// Deterministic scheduling also needs slot-aligned RS and period:
    /// positions are residues mod F, and a container keeps its position
    /// across circulations and periods only when F divides RS and P.
    void validate_slotted() const;
};

/// One emission run: fills at start, start+F, ... (mod P), `count` packets,
/// all observed at the BBU node at the same position (arrival mod F).
struct EmissionSegment {
    Uot start = 0;  // fill time at the RRH's node, in [0, P)
    int count = 0;
    int position = 0;
};

struct RrhPlan {
    int rrh_id = 0;
    std::vector<EmissionSegment> segments;  // 1, or 2 when straddling positions

    Uot offset() const { return segments.empty() ? 0 : segments.front().start; }
};

/// Per-RRH emission plan. Zero-latency plans have one segment per RRH; a
/// saturating plan may split one RRH across two positions two UoT apart,
/// which delays the packets of the second segment by exactly 2 UoT.
struct Assignment {
    std::vector<RrhPlan> rrhs;
    Uot latency_bound = 0;  // max C-RAN insertion-buffer wait the plan allows

    const RrhPlan& plan_for(int rrh_id) const;
    /// Distinct RRH-side positions in use, ascending.
    std::vector<int> used_rrh_positions() const;
    void refresh_latency_bound();
};

// --- capacity formulas ---

/// floor((P-RS)/ET) * F/2: antennas supported with one position per RRH
/// for the whole emission time (zero latency).
int max_antennas_zero_latency(const CapacityParams& p);

/// floor((P-RS)/ET * F/2): antennas supported when an RRH may straddle two
/// positions (saturating, latency up to 2 UoT).
int max_antennas_saturating(const CapacityParams& p);

// --- assignment constructors ---

/// All RRHs packed on position 0 in ring order, offsets
/// m_i = (i-1)*ET + omega(u_1, u_i) up to the alignment that lands the
/// shared position on 0. Requires k*ET + RS <= P.
Assignment prop1_assign(const CapacityParams& p, const RingTopology& topo);

/// One RRH per even position, round robin, every group starting in the
/// first slot of the period.
Assignment naive_assign(const CapacityParams& p, const RingTopology& topo);

/// As many RRHs as fit per position (cap = floor((P-RS)/ET)), filling
/// ceil(k/cap) even positions and leaving the rest untouched.
Assignment compact_positions(const CapacityParams& p, const RingTopology& topo);

/// Re-space emission blocks so the free-container time of each used
/// position is spread uniformly over the period, and stagger the used
/// positions' patterns across the period.
Assignment balance_period(const Assignment& a, const CapacityParams& p, const RingTopology& topo);

/// Relocate the x used (RRH,BBU) position pairs so they are spread as
/// evenly as possible over the F positions; emission content unchanged.
Assignment balance_used_positions(const Assignment& a, int x, const CapacityParams& p,
                                  const RingTopology& topo);

/// Use every container of a position before opening the next one: l whole
/// RRHs per position plus a straddler continuing 2 UoT later on the next
/// even position. Supports max_antennas_saturating(p) antennas.
Assignment saturate_positions(const CapacityParams& p, const RingTopology& topo);

// --- validation and accounting ---

struct ValidityReport {
    bool valid = true;
    std::string conflict;  // first conflict, empty when valid

    explicit operator bool() const { return valid; }
};

/// Brute force: simulate reservation + emission (no best effort) for three
/// periods after one warm-up period; valid iff no reserve/fill refusal,
/// every packet within the declared latency bound, and every stream emits
/// ET/F packets per checked period.
ValidityReport check_validity(const Assignment& a, const RingTopology& topo,
                              const CapacityParams& p);

struct WasteReport {
    /// Keyed by RRH-side position; container-fills' worth of capacity made
    /// unusable per period by uplink reservations (blocked-free time / F).
    std::map<int, double> per_pair;
    double total = 0.0;
};

/// Measured by simulation over steady-state periods.
WasteReport measure_waste(const Assignment& a, const RingTopology& topo, const CapacityParams& p);

/// Total reserved-but-unused container count per steady-state period.
Uot waste(const Assignment& a, const RingTopology& topo, const CapacityParams& p);

// --- serialization (JSON document: list of {rrh_id, segments}) ---

std::string assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const std::string& text);

}  // namespace cranring
