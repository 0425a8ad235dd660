#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "cranring/rng.hpp"
#include "cranring/types.hpp"

namespace cranring {

/// Periodic uplink source: one container-packet every F UoT during the
/// emission time ET of each period, the first at the offset.
struct RrhSpec {
    int rrh_id = 0;
    int node = 0;
    Uot offset = 0;         // m_i, in [0, P)
    Uot emission_time = 0;  // ET, multiple of F
    Uot accel = 1;          // F
    Uot period = 1;         // P

    int packets_per_period() const { return static_cast<int>(emission_time / accel); }

    /// True iff a packet reaches the insertion buffer at t.
    bool emits_at(Uot t) const {
        Uot phase = floor_mod(t - offset, period);
        return phase < emission_time && phase % accel == 0;
    }
};

/// The BBU answers each uplink packet one UoT after it reaches the BBU
/// node; computation time is taken as zero.
inline Uot bbu_reply_time(Uot uplink_arrival) { return uplink_arrival + 1; }

/// A packet waiting in a node's insertion buffer.
struct InsertionBufferEntry {
    TrafficClass cls = TrafficClass::BestEffort;
    Uot enqueue_time = 0;
    int source_id = 0;
};

/// Bimodal batch arrivals into a per-node contention buffer. Every UoT a
/// byte quantity is drawn (q_high with probability p_high, else q_low) and
/// appended; a packet of at most `capacity` bytes moves to the insertion
/// buffer when the buffered volume reaches the container capacity or the
/// oldest byte has waited t_max UoT. At most one packet per UoT.
struct BeArrivalSpec {
    double p_high = 0.05;
    std::int64_t q_high = 0;
    std::int64_t q_low = 0;
    std::int64_t capacity = 1;  // container size C in bytes
    Uot t_max = 100;

    /// Expected emitted-packet rate in containers per UoT, valid while the
    /// age trigger stays quiet (inflow fast enough to hit C within t_max).
    double expected_load() const {
        return (p_high * static_cast<double>(q_high) +
                (1.0 - p_high) * static_cast<double>(q_low)) /
               static_cast<double>(capacity);
    }
};

class BeGenerator {
public:
    BeGenerator(BeArrivalSpec spec, std::uint64_t seed) : spec_(spec), rng_(seed) {}

    /// Advance one UoT; returns the emitted packet size in bytes, if any.
    std::optional<std::int64_t> step(Uot t);

    std::int64_t bytes_drawn() const { return drawn_; }
    std::int64_t bytes_shipped() const { return shipped_; }
    std::int64_t bytes_buffered() const { return buffered_; }

private:
    struct Chunk {
        std::int64_t bytes;
        Uot arrival;
    };

    BeArrivalSpec spec_;
    Rng rng_;
    std::deque<Chunk> chunks_;
    std::int64_t buffered_ = 0;
    std::int64_t drawn_ = 0;
    std::int64_t shipped_ = 0;
};

}  // namespace cranring
