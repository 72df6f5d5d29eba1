#pragma once

#include <optional>
#include <stdexcept>

#include "mlcsim/geometry.hpp"
#include "mlcsim/lru_cache.hpp"

namespace mlc {

/// Receiver id used for the sink in ledger records and parent links.
inline constexpr int sink_id = -1;

enum class Role { regular, cluster_head, dead };

/// Destination node id -> discovered minimum reachability power level.
using MrpCache = LruCache<int, int>;

struct Node {
    int id = 0;
    Point pos;
    double energy = 0.0;
    Role role = Role::regular;
    int ch_level = 0;  // >= 1 while role == cluster_head

    // PAMC state, persistent across rounds (positions are static, so entries
    // only ever leave the cache by eviction).
    MrpCache mrp_cache;
    std::optional<int> sink_mrp;  // discovered once per network lifetime

    bool alive() const { return role != Role::dead; }
};

/// Subtract cost from the node's energy. Hitting zero or below kills the node:
/// energy clamps to 0 and the role becomes dead, permanently.
inline void debit(Node& n, double cost) {
    if (!n.alive()) throw std::logic_error("debit: node is already dead");
    n.energy -= cost;
    if (n.energy <= 0.0) {
        n.energy = 0.0;
        n.role = Role::dead;
        n.ch_level = 0;
    }
}

}  // namespace mlc
