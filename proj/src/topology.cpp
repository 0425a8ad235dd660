#include "cranring/topology.hpp"

#include <algorithm>
#include <numeric>

namespace cranring {

RingTopology::RingTopology(std::vector<Uot> arc_weights, std::vector<int> rrh_nodes, int bbu_node)
    : arc_(std::move(arc_weights)), rrh_node_(std::move(rrh_nodes)), bbu_(bbu_node) {
    if (arc_.empty()) throw ConfigError("topology: at least one node required");
    for (Uot w : arc_) {
        if (w <= 0) throw ConfigError("topology: arc weights must be positive");
    }
    rs_ = std::accumulate(arc_.begin(), arc_.end(), Uot{0});
    dist0_.resize(arc_.size());
    dist0_[0] = 0;
    for (std::size_t u = 1; u < arc_.size(); ++u) dist0_[u] = dist0_[u - 1] + arc_[u - 1];
    if (bbu_ < 0 || bbu_ >= node_count()) throw ConfigError("topology: bbu node out of range");
    for (int u : rrh_node_) {
        if (u < 0 || u >= node_count()) throw ConfigError("topology: rrh node out of range");
    }
}

RingTopology RingTopology::equidistant(int nodes, Uot rs, std::vector<int> rrh_nodes, int bbu_node) {
    if (nodes <= 0) throw ConfigError("topology: node count must be positive");
    if (rs % nodes != 0) throw ConfigError("topology: equidistant ring needs node count dividing RS");
    return RingTopology(std::vector<Uot>(nodes, rs / nodes), std::move(rrh_nodes), bbu_node);
}

std::vector<int> RingTopology::rrhs_in_cycle_order() const {
    std::vector<int> order(rrh_node_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    auto key = [&](int rrh) { return rrh_node_[rrh] == bbu_ ? Uot{0} : omega(bbu_, rrh_node_[rrh]); };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        Uot ka = key(a), kb = key(b);
        if (ka != kb) return ka < kb;
        return a < b;
    });
    return order;
}

}  // namespace cranring
