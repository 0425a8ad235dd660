#include "cranring/simulation.hpp"

#include <algorithm>

#include "cranring/rng.hpp"

namespace cranring {

namespace {
constexpr std::uint64_t kBeStreamSalt = 0x6265;  // distinct seed domain per generator kind
}

Simulation::Simulation(const RingTopology& topo, const CapacityParams& params, SimOptions options)
    : topo_(topo),
      params_(params),
      opt_(std::move(options)),
      sched_(opt_.policy == PolicyKind::DeterministicReservation && opt_.assignment
                 ? build_det_schedule(*opt_.assignment, topo_, params_)
                 : DetSchedule{}),
      ring_(topo_) {
    const Uot P = params_.period;
    if (opt_.policy == PolicyKind::DeterministicReservation && !opt_.assignment)
        throw ConfigError("deterministic policy needs an assignment");

    buffers_.resize(topo_.node_count());
    up_queue_.resize(topo_.rrh_count());
    dn_queue_.resize(topo_.rrh_count());
    rrh_delay_.resize(topo_.rrh_count());
    for (int r = 0; r < topo_.rrh_count(); ++r) rrh_delay_[r] = topo_.uplink_delay(r);

    // uplink data grid: packet into the insertion buffer at m_i + j*F
    std::vector<Uot> offsets;
    if (opt_.policy == PolicyKind::DeterministicReservation) {
        offsets.resize(topo_.rrh_count());
        for (const RrhPlan& plan : opt_.assignment->rrhs) offsets[plan.rrh_id] = plan.offset();
    } else {
        offsets = opt_.offsets;
        if (static_cast<int>(offsets.size()) != topo_.rrh_count())
            throw ConfigError("need one offset per RRH");
    }
    arrivals_.assign(topo_.node_count(), std::vector<std::vector<int>>(P));
    for (int r = 0; r < topo_.rrh_count(); ++r) {
        for (int j = 0; j < params_.packets_per_period(); ++j) {
            Uot t = floor_mod(offsets[r] + j * params_.accel, P);
            arrivals_[topo_.rrh_node(r)][t].push_back(r);
        }
    }

    if (opt_.be_enabled) {
        be_.resize(topo_.node_count());
        for (int u = 0; u < topo_.node_count(); ++u)
            be_[u].emplace(opt_.be, child_seed(opt_.seed ^ kBeStreamSalt, u));
    }

    events_.assign(static_cast<std::size_t>(topo_.ring_size() + 2), {});
    reserved_free_passes_.assign(static_cast<std::size_t>(sched_.stream_count()) + 1, 0);

    if (opt_.policy == PolicyKind::DeterministicReservation) {
        // Periodic steady start. Two kinds of state would normally be left
        // over from the (virtual) previous period:
        //  - read events whose generating uplink fill predates t = 0, so
        //    the first downlink fills of the period have their packets;
        //  - uplink packets of a straddling segment whose delayed fill
        //    wrapped past the period boundary.
        for (const RrhPlan& plan : opt_.assignment->rrhs) {
            Uot delay = rrh_delay_[plan.rrh_id];
            Uot data_tick = plan.offset();
            std::vector<Uot> seeded_enqueues;
            for (const EmissionSegment& seg : plan.segments) {
                Uot lag = floor_mod(seg.start - data_tick, P);  // 0, or 2 past a straddle
                for (int j = 0; j < seg.count; ++j) {
                    Uot fill = floor_mod(seg.start + j * params_.accel, P);
                    Uot read_t = fill + delay + 1;
                    if (read_t >= P) {  // wraps: generating fill predates t=0
                        events_[static_cast<std::size_t>(read_t - P)].push_back({plan.rrh_id});
                    }
                    if (fill < lag) seeded_enqueues.push_back(fill - lag);
                    data_tick += params_.accel;
                }
            }
            std::sort(seeded_enqueues.begin(), seeded_enqueues.end());
            for (Uot enq : seeded_enqueues) up_queue_[plan.rrh_id].push_back(enq);
        }
    }

    for (const DetSchedule::SeedReservation& s : sched_.seeds) {
        if (ring_.container(s.container).reserved()) {
            note_conflict("two streams reserve the same container before t=0 (container " +
                          std::to_string(s.container) + ")");
            continue;
        }
        ring_.seed_reservation(s.container, s.node, s.placed, s.stream);
    }

    warmup_end_ = opt_.warmup_periods * P;
    if (opt_.collect_stream_period_fills)
        result_.stream_period_fills.assign(sched_.stream_count(),
                                           std::vector<std::int64_t>(opt_.horizon / P + 2, 0));
    ring_.begin_tick();
}

void Simulation::note_conflict(const std::string& what) {
    if (!result_.conflict) result_.conflict = what;
    if (opt_.fault_on_refusal) throw ScheduleFault(what);
}

void Simulation::record_fill(TrafficClass cls, Uot enqueue_time, int node) {
    Uot t = ring_.now();
    if (t < warmup_end_) return;
    result_.metrics.record(cls, t - enqueue_time, node, t / params_.period);
    result_.metrics.count_fill(cls);
}

void Simulation::deliver_read_events() {
    Uot t = ring_.now();
    auto& slot = events_[static_cast<std::size_t>(t % static_cast<Uot>(events_.size()))];
    for (const ReadEvent& ev : slot) {
        if (opt_.policy == PolicyKind::DeterministicReservation) {
            dn_queue_[ev.rrh_id].push_back(t);
        } else {
            buffers_[topo_.bbu_node()].cran.push_back(
                {TrafficClass::CranDown, t, ev.rrh_id});
        }
    }
    slot.clear();
}

void Simulation::generate_arrivals() {
    Uot t = ring_.now();
    Uot tp = t % params_.period;
    for (int u = 0; u < topo_.node_count(); ++u) {
        for (int r : arrivals_[u][tp]) {
            if (opt_.policy == PolicyKind::DeterministicReservation) {
                up_queue_[r].push_back(t);
            } else {
                buffers_[u].cran.push_back({TrafficClass::CranUp, t, r});
            }
        }
        if (opt_.be_enabled && be_[u]->step(t)) {
            buffers_[u].be.push_back({TrafficClass::BestEffort, t, u});
        }
    }
}

void Simulation::act_deterministic(int node) {
    Uot t = ring_.now();
    Uot tp = t % params_.period;
    for (int s : sched_.reserves[node][tp]) {
        if (ring_.reserve(node, s) != ReserveResult::Ok) {
            note_conflict("reservation refused at node " + std::to_string(node) + ", t=" +
                          std::to_string(t) + " (stream " + std::to_string(s) + ")");
            return;
        }
    }
    bool cran_filled = false;
    for (int s : sched_.fills[node][tp]) {
        const StreamMeta& meta = sched_.streams[s];
        auto& q = meta.cls == TrafficClass::CranUp ? up_queue_[meta.rrh_id]
                                                   : dn_queue_[meta.rrh_id];
        if (q.empty()) {
            note_conflict("scheduled fill without a packet at node " + std::to_string(node) +
                          ", t=" + std::to_string(t));
            return;
        }
        FillResult fr = ring_.fill(node, meta.cls, s);
        if (fr != FillResult::Ok) {
            note_conflict(std::string("scheduled fill refused (") +
                          (fr == FillResult::RefusedFilled ? "container filled"
                                                           : "reserved by another node") +
                          ") at node " + std::to_string(node) + ", t=" + std::to_string(t));
            return;
        }
        Uot enq = q.front();
        q.pop_front();
        cran_filled = true;
        record_fill(meta.cls, enq, node);
        if (meta.cls == TrafficClass::CranUp) {
            Uot read_t = t + rrh_delay_[meta.rrh_id] + 1;
            events_[static_cast<std::size_t>(read_t % static_cast<Uot>(events_.size()))]
                .push_back({meta.rrh_id});
        }
        if (opt_.collect_stream_period_fills)
            ++result_.stream_period_fills[s][static_cast<std::size_t>(t / params_.period)];
    }
    // best effort takes any passing free container no reservation touches
    if (!cran_filled && !buffers_[node].be.empty() && ring_.fillable_unreserved(node)) {
        ring_.fill(node, TrafficClass::BestEffort);
        record_fill(TrafficClass::BestEffort, buffers_[node].be.front().enqueue_time, node);
        buffers_[node].be.pop_front();
    }
}

void Simulation::act_stochastic(int node) {
    NodeBuffers& b = buffers_[node];
    bool fillable = ring_.fillable_by(node);
    if (fillable && !b.empty()) {
        BufferChoice choice = opt_.policy == PolicyKind::Fifo
                                  ? fifo_select(b, opt_.tie_break)
                                  : cran_priority_select(b);
        auto& q = choice == BufferChoice::Cran ? b.cran : b.be;
        FillResult fr = ring_.fill(node, q.front().cls);
        if (fr == FillResult::Ok) {
            const InsertionBufferEntry& e = q.front();
            record_fill(e.cls, e.enqueue_time, node);
            if (e.cls == TrafficClass::CranUp) {
                Uot read_t = ring_.now() + rrh_delay_[e.source_id] + 1;
                events_[static_cast<std::size_t>(read_t % static_cast<Uot>(events_.size()))]
                    .push_back({e.source_id});
            }
            q.pop_front();
        } else if (opt_.check_work_conservation) {
            // a fillable container passed an eligible packet unused
            ++result_.work_conservation_violations;
        }
    }
}

void Simulation::step() {
    Uot t = ring_.now();
    if (!measuring_ && t >= warmup_end_) measuring_ = true;
    deliver_read_events();
    generate_arrivals();
    bool det = opt_.policy == PolicyKind::DeterministicReservation;
    for (int u = 0; u < topo_.node_count(); ++u) {
        if (opt_.stop_on_conflict && result_.conflict) break;
        if (det) {
            act_deterministic(u);
        } else {
            act_stochastic(u);
        }
    }
    if (opt_.measure_waste && measuring_) {
        // a free container passing the BBU node under a reservation is one
        // container-fill the scheme denied to best effort this period
        const Container& c = ring_.container_at(topo_.bbu_node());
        if (!c.filled()) {
            int stream = c.reserved() ? c.reserve_stream
                                      : (c.due_reserver >= 0 && !c.due_consumed ? c.due_stream : -1);
            if (stream >= 0) ++reserved_free_passes_[stream];
        }
    }
    ring_.end_tick();
    ring_.advance_clock();
    ring_.begin_tick();
}

void Simulation::run() {
    while (ring_.now() < opt_.horizon) {
        step();
        if (opt_.stop_on_conflict && result_.conflict) break;
    }
}

SimResult Simulation::take_result() {
    result_.reservation_violations = ring_.reservation_violations();
    result_.node_tick_events = ring_.node_tick_events();
    result_.reservations_expired_unconsumed = ring_.expired_unconsumed();
    result_.periods_measured = (opt_.horizon - warmup_end_) / params_.period;
    if (opt_.measure_waste && result_.periods_measured > 0) {
        // reported in UoT worth of capacity: each denied fill carries F UoT
        // of electronic-side traffic
        for (int s = 0; s < sched_.uplink_streams; ++s) {
            double w = static_cast<double>(reserved_free_passes_[s]) *
                       static_cast<double>(params_.accel) /
                       static_cast<double>(result_.periods_measured);
            result_.waste.per_pair[sched_.streams[s].pair] += w;
            result_.waste.total += w;
        }
        result_.metrics.set_reserved_unused(result_.waste.total);
    }
    return std::move(result_);
}

}  // namespace cranring
