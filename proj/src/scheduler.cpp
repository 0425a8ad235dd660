#include "cranring/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "cranring/simulation.hpp"

namespace cranring {

void CapacityParams::validate() const {
    if (period <= 0 || ring_size <= 0 || emission_time <= 0 || accel <= 0)
        throw ConfigError("params: P, RS, ET, F must be positive");
    if (accel % 2 != 0) throw ConfigError("params: F must be even (RRH/BBU position split)");
    if (emission_time % accel != 0) throw ConfigError("params: ET must be a multiple of F");
    if (period % accel != 0) throw ConfigError("params: F must divide P");
    if (emission_time > period) throw ConfigError("params: ET must not exceed P");
    if (antennas < 0) throw ConfigError("params: antenna count must be >= 0");
}

void CapacityParams::validate_slotted() const {
    validate();
    if (ring_size % accel != 0)
        throw ConfigError("params: deterministic scheduling needs F | RS "
                          "(containers must keep their position across circulations)");
}

const RrhPlan& Assignment::plan_for(int rrh_id) const {
    for (const RrhPlan& p : rrhs) {
        if (p.rrh_id == rrh_id) return p;
    }
    throw ConfigError("assignment has no plan for rrh " + std::to_string(rrh_id));
}

std::vector<int> Assignment::used_rrh_positions() const {
    std::vector<int> pos;
    for (const RrhPlan& p : rrhs) {
        for (const EmissionSegment& s : p.segments) pos.push_back(s.position);
    }
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    return pos;
}

void Assignment::refresh_latency_bound() {
    latency_bound = 0;
    for (const RrhPlan& p : rrhs) {
        if (p.segments.size() > 1) latency_bound = 2;
    }
}

int max_antennas_zero_latency(const CapacityParams& p) {
    p.validate();
    if (p.period <= p.ring_size) return 0;
    return static_cast<int>((p.period - p.ring_size) / p.emission_time * (p.accel / 2));
}

int max_antennas_saturating(const CapacityParams& p) {
    p.validate();
    if (p.period <= p.ring_size) return 0;
    return static_cast<int>((p.period - p.ring_size) * p.accel / (2 * p.emission_time));
}

namespace {

struct Builder {
    const CapacityParams& p;
    const RingTopology& topo;
    std::map<int, RrhPlan> plans;

    Uot delay(int rrh) const { return topo.uplink_delay(rrh); }

    void add_segment(int rrh, Uot arrival_start, int count, int position) {
        EmissionSegment seg;
        seg.start = floor_mod(arrival_start - delay(rrh), p.period);
        seg.count = count;
        seg.position = position;
        auto [it, _] = plans.try_emplace(rrh, RrhPlan{rrh, {}});
        it->second.segments.push_back(seg);
    }

    /// Tight cascade of whole RRHs on one position: arrivals at the BBU
    /// node at base, base+ET, base+2ET, ...
    void cascade(const std::vector<int>& members, Uot arrival_base, int position) {
        Uot a = arrival_base;
        for (int rrh : members) {
            add_segment(rrh, a, p.packets_per_period(), position);
            a += p.emission_time;
        }
    }

    Assignment finish() {
        Assignment out;
        for (auto& [id, plan] : plans) out.rrhs.push_back(std::move(plan));
        out.refresh_latency_bound();
        return out;
    }
};

/// First arrival on `position` such that the first member starts emitting
/// inside the first slot of the period (offset in [0, F)).
Uot slot0_anchor(const RingTopology& topo, const CapacityParams& p, int rrh, int position) {
    Uot m = floor_mod(position - topo.uplink_delay(rrh), p.accel);
    return m + topo.uplink_delay(rrh);
}

void check_rrh_count(const CapacityParams& p, const RingTopology& topo) {
    if (p.antennas != topo.rrh_count())
        throw ConfigError("params.antennas must match the topology's RRH count");
}

}  // namespace

Assignment prop1_assign(const CapacityParams& p, const RingTopology& topo) {
    p.validate_slotted();
    check_rrh_count(p, topo);
    if (p.antennas * p.emission_time + p.ring_size > p.period)
        throw CapacityError("k*ET + RS > P: the RRHs do not fit on one position");
    Builder b{p, topo, {}};
    std::vector<int> order = topo.rrhs_in_cycle_order();
    if (!order.empty()) {
        // m_1 = 0: the shared position is wherever the first RRH's traffic
        // lands at the BBU node (the proof's "position zero")
        Uot d1 = topo.uplink_delay(order.front());
        b.cascade(order, d1, static_cast<int>(d1 % p.accel));
    }
    return b.finish();
}

Assignment naive_assign(const CapacityParams& p, const RingTopology& topo) {
    p.validate_slotted();
    check_rrh_count(p, topo);
    if (p.antennas > max_antennas_zero_latency(p))
        throw CapacityError("k > floor((P-RS)/ET) * F/2");
    Builder b{p, topo, {}};
    std::vector<int> order = topo.rrhs_in_cycle_order();
    int half = static_cast<int>(p.accel / 2);
    for (int g = 0; g < half; ++g) {
        std::vector<int> members;
        for (std::size_t i = g; i < order.size(); i += half) members.push_back(order[i]);
        if (members.empty()) continue;
        int position = 2 * g;
        b.cascade(members, slot0_anchor(topo, p, members.front(), position), position);
    }
    return b.finish();
}

Assignment compact_positions(const CapacityParams& p, const RingTopology& topo) {
    p.validate_slotted();
    check_rrh_count(p, topo);
    Uot cap = (p.period - p.ring_size) / p.emission_time;
    if (cap < 1) throw CapacityError("ET > P - RS: no position can hold a whole RRH");
    int x = static_cast<int>((p.antennas + cap - 1) / cap);
    if (x > p.accel / 2) throw CapacityError("RRHs need more positions than F/2");
    Builder b{p, topo, {}};
    std::vector<int> order = topo.rrhs_in_cycle_order();
    for (int g = 0; g < x; ++g) {
        std::vector<int> members(
            order.begin() + g * cap,
            order.begin() + std::min<std::size_t>((g + 1) * cap, order.size()));
        int position = 2 * g;
        b.cascade(members, slot0_anchor(topo, p, members.front(), position), position);
    }
    return b.finish();
}

Assignment balance_period(const Assignment& a, const CapacityParams& p,
                          const RingTopology& topo) {
    p.validate_slotted();
    for (const RrhPlan& plan : a.rrhs) {
        if (plan.segments.size() != 1)
            throw InfeasibleError("balance_period needs a zero-latency assignment");
    }
    const Uot P = p.period, RS = p.ring_size, ET = p.emission_time, F = p.accel;

    // cycle-order rank, to keep blocks in ring order inside each position
    std::vector<int> order = topo.rrhs_in_cycle_order();
    std::map<int, int> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);

    std::map<int, std::vector<const RrhPlan*>> by_position;
    for (const RrhPlan& plan : a.rrhs) by_position[plan.segments[0].position].push_back(&plan);

    Builder b{p, topo, {}};
    int x = static_cast<int>(by_position.size());
    int r = 0;
    for (auto& [position, group] : by_position) {
        std::sort(group.begin(), group.end(), [&](const RrhPlan* u, const RrhPlan* v) {
            return rank[u->rrh_id] < rank[v->rrh_id];
        });
        Uot j = static_cast<Uot>(group.size());
        Uot slack = P - j * ET;
        if (slack < RS) throw InfeasibleError("position overloaded: gaps cannot cover RS");

        // Split the blocks into runs separated by equalized gaps. A gap only
        // yields usable free containers beyond its first circulation, so
        // every gap must span at least 2RS; shorter gaps would block a full
        // reservation round and starve best effort instead of helping it.
        Uot n_gaps = std::min<Uot>(j, slack / (2 * RS));
        if (n_gaps < 1) n_gaps = 1;
        std::vector<Uot> gaps(n_gaps, 0);
        Uot slots = slack / F;
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            Uot base = slots / n_gaps, rem = slots % n_gaps;
            gaps[i] = (base + (static_cast<Uot>(i) < rem ? 1 : 0)) * F;
        }
        std::vector<Uot> run_size(n_gaps, j / n_gaps);
        for (Uot i = 0; i < j % n_gaps; ++i) ++run_size[i];

        Uot shift = F * ((static_cast<Uot>(r) * (P / F)) / x);  // stagger across positions
        Uot arrival = group[0]->segments[0].start + topo.uplink_delay(group[0]->rrh_id) + shift;
        std::size_t block = 0;
        for (std::size_t run = 0; run < run_size.size(); ++run) {
            for (Uot i = 0; i < run_size[run]; ++i, ++block) {
                b.add_segment(group[block]->rrh_id, arrival, group[block]->segments[0].count,
                              position);
                arrival += ET;
            }
            arrival += gaps[run];
        }
        ++r;
    }
    return b.finish();
}

Assignment balance_used_positions(const Assignment& a, int x, const CapacityParams& p,
                                  const RingTopology& topo) {
    (void)topo;
    p.validate_slotted();
    for (const RrhPlan& plan : a.rrhs) {
        if (plan.segments.size() != 1)
            throw InfeasibleError("balance_used_positions needs a zero-latency assignment");
    }
    std::vector<int> used = a.used_rrh_positions();
    if (static_cast<int>(used.size()) != x)
        throw ConfigError("x does not match the assignment's used positions");
    if (2 * x > p.accel) throw InfeasibleError("2x > F: pairs do not fit");

    // pair r moves to position floor(r*F/x); gaps between pairs differ by
    // at most one position
    std::map<int, int> new_position;
    for (int r = 0; r < x; ++r)
        new_position[used[r]] = static_cast<int>(static_cast<Uot>(r) * p.accel / x);

    Assignment out = a;
    for (RrhPlan& plan : out.rrhs) {
        EmissionSegment& seg = plan.segments[0];
        int target = new_position[seg.position];
        Uot delta = floor_mod(target - seg.position, p.accel);
        seg.start = floor_mod(seg.start + delta, p.period);
        seg.position = target;
    }
    out.refresh_latency_bound();
    return out;
}

Assignment saturate_positions(const CapacityParams& p, const RingTopology& topo) {
    p.validate_slotted();
    check_rrh_count(p, topo);
    const Uot P = p.period, RS = p.ring_size, ET = p.emission_time, F = p.accel;
    if (ET > P - RS)
        throw CapacityError("ET > P - RS: an RRH would need more than two positions");
    if (p.antennas > max_antennas_saturating(p))
        throw CapacityError("k > floor((P-RS)/ET * F/2)");

    Builder b{p, topo, {}};
    std::vector<int> order = topo.rrhs_in_cycle_order();
    if (order.empty()) return b.finish();

    Uot arrival = topo.uplink_delay(order.front());  // same anchor as prop1: m_1 = 0
    int position = static_cast<int>(arrival % F);
    Uot budget_end = arrival + (P - RS);  // RS wrap band stays free of fills

    for (int rrh : order) {
        int need = p.packets_per_period();
        int here = static_cast<int>((budget_end - arrival) / F);
        int n1 = std::min(need, here);
        if (n1 > 0) {
            b.add_segment(rrh, arrival, n1, position);
            arrival += static_cast<Uot>(n1) * F;
        }
        if (n1 < need) {
            // position exhausted: continue two UoT later on the next
            // same-parity position; the remaining packets wait exactly 2 UoT
            position = static_cast<int>((position + 2) % F);
            arrival = budget_end + 2;
            budget_end = arrival + (P - RS);
            b.add_segment(rrh, arrival, need - n1, position);
            arrival += static_cast<Uot>(need - n1) * F;
        }
    }
    return b.finish();
}

ValidityReport check_validity(const Assignment& a, const RingTopology& topo,
                              const CapacityParams& p) {
    ValidityReport report;
    auto reject = [&](const std::string& why) {
        report.valid = false;
        report.conflict = why;
        return report;
    };
    try {
        p.validate_slotted();
    } catch (const ConfigError& e) {
        return reject(e.what());
    }
    if (static_cast<int>(a.rrhs.size()) != topo.rrh_count())
        return reject("assignment/topology RRH count mismatch");
    for (const RrhPlan& plan : a.rrhs) {
        int total = 0;
        for (const EmissionSegment& seg : plan.segments) {
            if (seg.count <= 0) return reject("empty segment");
            if (seg.position < 0 || seg.position >= p.accel) return reject("position out of range");
            total += seg.count;
        }
        if (total != p.packets_per_period())
            return reject("rrh " + std::to_string(plan.rrh_id) + " does not emit ET/F packets");
        if (plan.segments.size() > 2) return reject("more than two segments");
    }

    SimOptions opt;
    opt.policy = PolicyKind::DeterministicReservation;
    opt.assignment = a;
    opt.be_enabled = false;
    opt.warmup_periods = 1;
    opt.horizon = 4 * p.period;  // one warm-up period, three checked
    opt.fault_on_refusal = false;
    opt.stop_on_conflict = true;
    opt.collect_stream_period_fills = true;

    Simulation sim(topo, p, opt);
    sim.run();
    SimResult res = sim.take_result();
    if (res.conflict) return reject(*res.conflict);
    if (res.reservation_violations > 0) return reject("reservation guarantee violated");

    for (TrafficClass cls : {TrafficClass::CranUp, TrafficClass::CranDown}) {
        const LatencyHistogram& h = res.metrics.histogram(cls);
        if (!h.empty() && h.max() > a.latency_bound)
            return reject(std::string(to_string(cls)) + " latency " + std::to_string(h.max()) +
                          " above the declared bound " + std::to_string(a.latency_bound));
    }

    // every stream must deliver its per-period packet count in each checked period
    std::vector<int> expected;
    for (const RrhPlan& plan : a.rrhs)
        for (const EmissionSegment& seg : plan.segments) expected.push_back(seg.count);
    std::vector<int> uplink_expected = expected;  // downlink streams mirror the uplink counts
    expected.insert(expected.end(), uplink_expected.begin(), uplink_expected.end());
    for (std::size_t s = 0; s < res.stream_period_fills.size(); ++s) {
        for (std::int64_t period = 1; period <= 3; ++period) {
            if (res.stream_period_fills[s][static_cast<std::size_t>(period)] != expected[s])
                return reject("stream " + std::to_string(s) + " missed packets in period " +
                              std::to_string(period));
        }
    }
    return report;
}

WasteReport measure_waste(const Assignment& a, const RingTopology& topo,
                          const CapacityParams& p) {
    SimOptions opt;
    opt.policy = PolicyKind::DeterministicReservation;
    opt.assignment = a;
    opt.be_enabled = false;
    opt.warmup_periods = 2;
    opt.horizon = 6 * p.period;  // 4 measured periods
    opt.measure_waste = true;

    Simulation sim(topo, p, opt);
    sim.run();
    return sim.take_result().waste;
}

Uot waste(const Assignment& a, const RingTopology& topo, const CapacityParams& p) {
    return static_cast<Uot>(std::llround(measure_waste(a, topo, p).total));
}

std::string assignment_to_json(const Assignment& a) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    std::vector<const RrhPlan*> plans;
    for (const RrhPlan& p : a.rrhs) plans.push_back(&p);
    std::sort(plans.begin(), plans.end(),
              [](const RrhPlan* u, const RrhPlan* v) { return u->rrh_id < v->rrh_id; });
    for (const RrhPlan* plan : plans) {
        nlohmann::ordered_json segs = nlohmann::ordered_json::array();
        for (const EmissionSegment& s : plan->segments)
            segs.push_back({{"start", s.start}, {"count", s.count}, {"position", s.position}});
        doc.push_back({{"rrh_id", plan->rrh_id}, {"segments", segs}});
    }
    return doc.dump(2) + "\n";
}

Assignment assignment_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    if (!doc.is_array()) throw ConfigError("assignment document must be a JSON array");
    Assignment a;
    for (const auto& item : doc) {
        RrhPlan plan;
        plan.rrh_id = item.at("rrh_id").get<int>();
        for (const auto& s : item.at("segments")) {
            plan.segments.push_back({s.at("start").get<Uot>(), s.at("count").get<int>(),
                                     s.at("position").get<int>()});
        }
        a.rrhs.push_back(std::move(plan));
    }
    a.refresh_latency_bound();
    return a;
}

}  // namespace cranring
