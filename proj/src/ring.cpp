#include "cranring/ring.hpp"

namespace cranring {

RingState::RingState(const RingTopology& topo)
    : rs_(topo.ring_size()), c_(static_cast<std::size_t>(topo.ring_size())) {
    base_.resize(topo.node_count());
    for (int u = 0; u < topo.node_count(); ++u) base_[u] = topo.dist_from_origin(u);
}

void RingState::seed_reservation(int container_index, int node, Uot placed_time, int stream) {
    Container& c = c_[container_index];
    if (c.reserved()) throw ConfigError("seed_reservation: container already reserved");
    c.reserver = node;
    c.reserve_stream = stream;
    c.reserve_time = placed_time;
}

void RingState::begin_tick() {
    due_nodes_.clear();
    for (int u = 0; u < node_count(); ++u) {
        ++node_tick_events_;
        Container& c = at(u);
        // 1. emission release: a filled container is freed when it is back
        //    at its filler, one circulation after the fill.
        if (c.filled() && c.filler == u && now_ == c.fill_time + rs_) {
            c.filler = -1;
        }
        // 2. reservation maturity: one round after placement the container
        //    is back at its reserver. Move the reservation to the due slot;
        //    it either backs a fill this tick or expires at end_tick.
        if (c.reserved() && c.reserver == u && now_ == c.reserve_time + rs_) {
            if (c.filled()) ++reservation_violations_;  // guarantee breach: not fillable
            c.due_reserver = c.reserver;
            c.due_stream = c.reserve_stream;
            c.due_reserve_time = c.reserve_time;
            c.due_consumed = false;
            c.reserver = -1;
            c.reserve_stream = -1;
            due_nodes_.push_back(u);
        }
    }
}

void RingState::end_tick() {
    for (int u : due_nodes_) {
        Container& c = at(u);
        if (c.due_reserver < 0) continue;
        if (!c.due_consumed) ++expired_unconsumed_;
        c.due_reserver = -1;
        c.due_stream = -1;
    }
}

void RingState::advance() {
    end_tick();
    advance_clock();
    begin_tick();
}

FillResult RingState::fill(int node, TrafficClass cls, int stream) {
    (void)stream;
    Container& c = at(node);
    if (c.filled()) return FillResult::RefusedFilled;
    if (c.reserved() && c.reserver != node) return FillResult::RefusedReserved;
    if (c.due_reserver >= 0 && !c.due_consumed) c.due_consumed = true;
    c.filler = node;
    c.fill_class = cls;
    c.fill_time = now_;
    return FillResult::Ok;
}

ReserveResult RingState::reserve(int node, int stream) {
    Container& c = at(node);
    if (c.reserved()) {
        if (c.reserver != node) return ReserveResult::RefusedReserved;
        return ReserveResult::Ok;  // same node: already held
    }
    c.reserver = node;
    c.reserve_stream = stream;
    c.reserve_time = now_;
    return ReserveResult::Ok;
}

bool RingState::operator==(const RingState& other) const {
    if (now_ != other.now_ || rs_ != other.rs_ || base_ != other.base_) return false;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        const Container& a = c_[i];
        const Container& b = other.c_[i];
        if (a.filler != b.filler || a.reserver != b.reserver) return false;
        if (a.filled() && (a.fill_class != b.fill_class || a.fill_time != b.fill_time)) return false;
        if (a.reserved() && a.reserve_time != b.reserve_time) return false;
    }
    return true;
}

}  // namespace cranring
