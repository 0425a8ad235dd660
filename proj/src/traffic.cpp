#include "cranring/traffic.hpp"

namespace cranring {

std::optional<std::int64_t> BeGenerator::step(Uot t) {
    std::int64_t q = rng_.bernoulli(spec_.p_high) ? spec_.q_high : spec_.q_low;
    if (q > 0) {
        drawn_ += q;
        buffered_ += q;
        chunks_.push_back({q, t});
    }
    bool full = buffered_ >= spec_.capacity;
    bool aged = !chunks_.empty() && t - chunks_.front().arrival >= spec_.t_max;
    if (!full && !aged) return std::nullopt;

    std::int64_t take = buffered_ < spec_.capacity ? buffered_ : spec_.capacity;
    std::int64_t remaining = take;
    while (remaining > 0) {
        Chunk& front = chunks_.front();
        if (front.bytes <= remaining) {
            remaining -= front.bytes;
            chunks_.pop_front();
        } else {
            front.bytes -= remaining;
            remaining = 0;
        }
    }
    buffered_ -= take;
    shipped_ += take;
    return take;
}

}  // namespace cranring
