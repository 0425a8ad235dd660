#pragma once

#include <utility>
#include <vector>

#include "cranring/types.hpp"

namespace cranring {

/// Unidirectional ring: nodes 0..n-1, arc (u, u+1 mod n) has an integer
/// weight in UoT. The ring size RS is the sum of the arc weights and also
/// the number of containers circulating on the ring.
class RingTopology {
public:
    RingTopology(std::vector<Uot> arc_weights, std::vector<int> rrh_nodes, int bbu_node);

    /// n equidistant nodes; requires n | rs.
    static RingTopology equidistant(int nodes, Uot rs, std::vector<int> rrh_nodes, int bbu_node);

    int node_count() const { return static_cast<int>(arc_.size()); }
    Uot ring_size() const { return rs_; }

    /// Directed distance u -> v along the ring; omega(u, u) = RS.
    Uot omega(int u, int v) const {
        Uot d = dist0_[v] - dist0_[u];
        return u == v ? rs_ : floor_mod(d, rs_);
    }

    /// Distance from node 0, i.e. omega(0, u) (0 for node 0).
    Uot dist_from_origin(int u) const { return dist0_[u]; }

    int rrh_count() const { return static_cast<int>(rrh_node_.size()); }
    int rrh_node(int rrh_id) const { return rrh_node_[rrh_id]; }
    const std::vector<int>& rrh_nodes() const { return rrh_node_; }
    int bbu_node() const { return bbu_; }

    /// Uplink propagation delay from the RRH's node to the BBU node.
    Uot uplink_delay(int rrh_id) const { return omega(rrh_node_[rrh_id], bbu_); }

    /// RRH ids sorted in ring order starting at the BBU node: ascending
    /// omega(bbu, node), the BBU node's own RRHs first. Equivalently by
    /// non-increasing uplink delay (omega(u,u) = RS, the largest delay).
    std::vector<int> rrhs_in_cycle_order() const;

private:
    std::vector<Uot> arc_;
    std::vector<Uot> dist0_;
    std::vector<int> rrh_node_;
    int bbu_ = 0;
    Uot rs_ = 0;
};

}  // namespace cranring
