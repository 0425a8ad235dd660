#pragma once

#include <cstdint>
#include <vector>

#include "cranring/topology.hpp"
#include "cranring/types.hpp"

namespace cranring {

enum class FillResult : std::uint8_t { Ok, RefusedFilled, RefusedReserved };
enum class ReserveResult : std::uint8_t { Ok, RefusedReserved };

/// One circulating container. A container can be Filled and carry a
/// reservation at the same time; the reservation survives the release.
struct Container {
    int filler = -1;  // -1: not filled
    TrafficClass fill_class = TrafficClass::BestEffort;
    Uot fill_time = 0;

    int reserver = -1;  // -1: no active reservation
    int reserve_stream = -1;
    Uot reserve_time = 0;

    // A reservation that matured this tick (the container is back at its
    // reserver). Moved out of the active slot at begin_tick so a fresh
    // reservation can be placed the same tick; resolved at end_tick.
    int due_reserver = -1;
    int due_stream = -1;
    Uot due_reserve_time = 0;
    bool due_consumed = false;

    bool filled() const { return filler >= 0; }
    bool reserved() const { return reserver >= 0; }
};

/// Time-stepped state machine of the slotted ring: RS containers, one per
/// UoT of circumference. Node u sees container (t - omega(0,u)) mod RS, so
/// a container filled at u passes v omega(u,v) UoT later and returns to u
/// after a full circulation of RS UoT.
///
/// Tick protocol: begin_tick (emission release, reservation maturity),
/// then reserve/fill calls from the policy layer, then end_tick (one-shot
/// expiry of unconsumed matured reservations), then advance_clock.
class RingState {
public:
    explicit RingState(const RingTopology& topo);

    Uot now() const { return now_; }
    Uot ring_size() const { return rs_; }
    int node_count() const { return static_cast<int>(base_.size()); }

    int container_index_at(int node) const {
        return static_cast<int>(floor_mod(now_ - base_[node], rs_));
    }
    const Container& container_at(int node) const { return c_[container_index_at(node)]; }
    const Container& container(int index) const { return c_[index]; }

    /// Place a reservation before the first tick, as if it had been made
    /// at placed_time < 0; used to start deterministic runs in their
    /// periodic steady state.
    void seed_reservation(int container_index, int node, Uot placed_time, int stream);

    void begin_tick();
    void end_tick();
    void advance_clock() { ++now_; }

    /// end_tick + advance_clock + begin_tick: move every container one UoT
    /// and apply emission release at the new time.
    void advance();

    FillResult fill(int node, TrafficClass cls, int stream = -1);
    ReserveResult reserve(int node, int stream = -1);

    bool fillable_by(int node) const {
        const Container& c = container_at(node);
        return !c.filled() && (c.reserver < 0 || c.reserver == node);
    }
    /// Eligible for opportunistic (best-effort) insertion: free and carrying
    /// no reservation, matured or not.
    bool fillable_unreserved(int node) const {
        const Container& c = container_at(node);
        return !c.filled() && c.reserver < 0 && c.due_reserver < 0;
    }

    // --- instrumentation ---
    std::int64_t reservation_violations() const { return reservation_violations_; }
    std::int64_t expired_unconsumed() const { return expired_unconsumed_; }
    std::int64_t node_tick_events() const { return node_tick_events_; }

    bool operator==(const RingState& other) const;

private:
    Container& at(int node) { return c_[container_index_at(node)]; }

    Uot now_ = 0;
    Uot rs_;
    std::vector<Uot> base_;
    std::vector<Container> c_;
    std::vector<int> due_nodes_;  // nodes whose container matured this tick

    std::int64_t reservation_violations_ = 0;
    std::int64_t expired_unconsumed_ = 0;
    std::int64_t node_tick_events_ = 0;
};

}  // namespace cranring
