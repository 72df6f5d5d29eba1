#pragma once

#include <vector>

#include "mlcsim/node.hpp"

namespace mlc {

/// No parent assigned (node was dead for the whole setup phase).
inline constexpr int no_parent = -2;

/// One round's clustering outcome: a forest rooted at the sink. Cluster heads
/// parent to the head of the cluster they were elected in (level-1 heads to
/// the sink); regular nodes parent to the head they are attached to; orphans
/// parent straight to the sink.
struct Topology {
    std::vector<int> parent;            // node id -> node id, sink_id, or no_parent
    std::vector<int> level;             // node id -> depth (sink is 0); 0 if unassigned
    std::vector<std::vector<int>> ch_ids_by_level;  // [j] = level-(j+1) head ids, id-sorted
    std::vector<bool> is_ch;
    std::vector<bool> orphan;           // heard no advertisement; sends straight to sink
    std::vector<int> cluster_card;      // per head id: member count when its cluster formed

    explicit Topology(std::size_t n = 0)
        : parent(n, no_parent), level(n, 0), is_ch(n, false), orphan(n, false),
          cluster_card(n, 0) {}

    int max_ch_level() const { return static_cast<int>(ch_ids_by_level.size()); }

    const std::vector<int>& chs_at(int lvl) const {
        static const std::vector<int> empty;
        if (lvl < 1 || lvl > max_ch_level()) return empty;
        return ch_ids_by_level[static_cast<std::size_t>(lvl - 1)];
    }
};

}  // namespace mlc
