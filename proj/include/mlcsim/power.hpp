#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "mlcsim/ledger.hpp"
#include "mlcsim/world.hpp"

namespace mlc {

/// Discrete transmission power levels 1..L with strictly ascending ranges.
/// Built once per run from the deployment-time network radius, so the top
/// level always reaches the sink from anywhere.
struct PowerTable {
    std::vector<double> ranges;  // ranges[i] covers level i+1

    int levels() const { return static_cast<int>(ranges.size()); }
    double range_of(int level) const {
        if (level < 1 || level > levels())
            throw std::invalid_argument("PowerTable: level out of range");
        return ranges[static_cast<std::size_t>(level - 1)];
    }
    double max_range() const { return ranges.back(); }
};

/// Linear partition: R_i = r_max * i / levels.
inline PowerTable build_power_table(double r_max, int levels) {
    if (levels < 2) throw std::invalid_argument("build_power_table: need at least 2 levels");
    if (r_max <= 0.0) throw std::invalid_argument("build_power_table: r_max must be positive");
    PowerTable t;
    t.ranges.reserve(static_cast<std::size_t>(levels));
    // The top range is r_max itself, not r_max*levels/levels: the rounded
    // quotient can land one ulp short and strand the farthest node.
    for (int i = 1; i < levels; ++i)
        t.ranges.push_back(r_max * static_cast<double>(i) / static_cast<double>(levels));
    t.ranges.push_back(r_max);
    return t;
}

/// Smallest level whose range covers d.
inline int min_level_for_distance(const PowerTable& t, double d) {
    if (d < 0.0) throw std::invalid_argument("min_level_for_distance: negative distance");
    for (int i = 1; i <= t.levels(); ++i)
        if (t.range_of(i) >= d) return i;
    throw std::out_of_range("min_level_for_distance: destination unreachable");
}

/// Total reciprocal minimum reachability power over a node set, with the
/// ordinal level index standing in for the power value.
inline double trmrp(const std::vector<int>& levels) {
    double sum = 0.0;
    for (int l : levels) {
        if (l < 1) throw std::invalid_argument("trmrp: levels start at 1");
        sum += 1.0 / static_cast<double>(l);
    }
    return sum;
}

/// What a probe descent is aimed at: a node (alive or not) or the sink.
struct ProbeTarget {
    int id = sink_id;  // sink_id for the base station
    Point pos;
    bool alive = true;  // the sink is always alive
};

struct MrpDiscovery {
    int level = 0;
    int probes = 0;
    int acks = 0;
};

/// Minimum reachability power from src to the target, by cached lookup or by
/// probe descent from the top level: probe at L, L-1, ... until the first
/// level that draws no acknowledgement (or level 1 acknowledges). Each probe
/// costs the prober a control transmission at that level's range; each ack
/// costs the target a control transmission back and the prober a reception.
/// A dead target never acknowledges, so probing one costs a single top-level
/// probe and yields level 0 ("no response"). A discovered positive level is
/// inserted into the cache (sink results are cached by the caller for the
/// whole lifetime instead). Returns nullopt only when the prober dies
/// mid-descent.
inline std::optional<MrpDiscovery> discover_mrp(World& w, int src_id, const ProbeTarget& dst,
                                                const PowerTable& table, MrpCache& cache,
                                                MessageLedger& ledger, const EnergyModel& m) {
    Node& src = w.node(src_id);
    if (!src.alive()) throw std::logic_error("discover_mrp: prober is dead");

    // A cached entry for a dead destination is stale; skip the lookup entirely
    // (no recency refresh) and let the entry age out of the LRU on its own.
    if (dst.id != sink_id && dst.alive) {
        if (auto hit = cache.lookup(dst.id)) return MrpDiscovery{*hit, 0, 0};
    }

    const double d = distance(src.pos, dst.pos);
    if (d > table.max_range())
        throw std::out_of_range("discover_mrp: destination unreachable at max level");

    MrpDiscovery out;
    int mrp = 0;
    bool responder_up = dst.alive;
    for (int level = table.levels(); level >= 1; --level) {
        const double r = table.range_of(level);
        ledger.post(w, {PacketKind::control, src_id, {}, m.ctrl_bits, r, 0}, m);
        ++out.probes;
        if (!src.alive()) return std::nullopt;  // died transmitting the probe
        if (r < d || !responder_up) break;      // no acknowledgement heard
        ledger.post(w, {PacketKind::control, dst.id, {src_id}, m.ctrl_bits, d, 0}, m);
        ++out.acks;
        mrp = level;
        if (!src.alive()) return std::nullopt;  // died receiving the ack
        if (dst.id != sink_id && !w.node(dst.id).alive())
            responder_up = false;  // responder spent itself acking; no further replies
    }
    out.level = mrp;
    if (dst.id != sink_id && mrp >= 1) cache.insert(dst.id, mrp);
    return out;
}

}  // namespace mlc
