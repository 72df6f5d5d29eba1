#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mlcsim/election.hpp"
#include "mlcsim/ledger.hpp"
#include "mlcsim/power.hpp"
#include "mlcsim/topology.hpp"
#include "mlcsim/world.hpp"

namespace mlc {

enum class Protocol { eemc, lamc, pamc };

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::eemc: return "eemc";
        case Protocol::lamc: return "lamc";
        case Protocol::pamc: return "pamc";
    }
    throw std::invalid_argument("protocol_name: bad protocol");
}

struct EngineParams {
    double phi = 0.8;
    int level_cap = 5;  // deepest cluster-head level that may form
};

/// One advertisement as remembered by a node that heard it. metric is meters
/// for EEMC/LAMC and the discovered power level for PAMC; lower is better,
/// ties go to the entry heard earlier.
struct CandidateCh {
    int ch_id = 0;
    int ch_level = 0;
    double metric = 0.0;
    int heard_order = 0;
};

struct SetupResult {
    Topology topo;
    MessageLedger control;
    double radius = 0.0;  // network radius used for ranges this round
    int n_ch1_opt = 0;
};

namespace detail {

/// One cluster set-up phase. The three protocols share the skeleton
///   [beacon] -> [sink-MRP discovery] -> reports -> command -> level-1
///   election -> per-level (advertise, join, elect deeper) -> [re-attach]
/// and differ in which bracketed steps run and which closeness metric the
/// joins and elections use. Every message goes through the ledger, in node-id
/// order within each phase, so a run is a pure function of (world, rng).
class SetupRun {
  public:
    SetupRun(World& w, Protocol proto, const EngineParams& par, const PowerTable& table,
             Rng& rng, const EnergyModel& m)
        : w_(w), proto_(proto), par_(par), table_(table), rng_(rng), m_(m),
          n_(static_cast<int>(w.nodes.size())), topo_(w.nodes.size()),
          snap_(w.nodes.size(), 0.0), member_head_(w.nodes.size(), no_parent),
          join_mrp_(w.nodes.size(), 0), heard_(w.nodes.size()), ancestors_(w.nodes.size()) {}

    SetupResult run() {
        if (w_.alive_count() == 0) throw std::invalid_argument("setup: no alive nodes");
        for (Node& nd : w_.nodes) {
            if (nd.alive()) {
                nd.role = Role::regular;
                nd.ch_level = 0;
            }
        }
        radius_ = network_radius(w_);

        if (proto_ != Protocol::eemc) sink_broadcast();  // start beacon
        if (proto_ == Protocol::pamc) discover_sink_mrp();
        send_reports();
        sink_broadcast();  // election command with the round's parameters
        elect_level1();

        for (int level = 1; level <= par_.level_cap; ++level) {
            if (topo_.chs_at(level).empty()) break;
            advertise(level);
            join_phase(level);
            if (level == par_.level_cap) break;
            elect_next(level);
        }
        if (proto_ != Protocol::eemc) finalize_attachment();
        finalize_topology();
        return {std::move(topo_), std::move(led_), radius_, n_opt_};
    }

  private:
    // The sink is mains-powered and in range of everyone: its broadcasts are
    // free to send and every alive node pays one control reception.
    void sink_broadcast() {
        led_.post(w_, {PacketKind::control, sink_id, w_.alive_ids(), m_.ctrl_bits, 0.0, 0}, m_);
    }

    void discover_sink_mrp() {
        const ProbeTarget sink_target{sink_id, w_.sink, true};
        for (int u = 0; u < n_; ++u) {
            Node& nd = w_.node(u);
            if (!nd.alive() || nd.sink_mrp) continue;
            auto disc = discover_mrp(w_, u, sink_target, table_, nd.mrp_cache, led_, m_);
            if (disc && disc->level >= 1) nd.sink_mrp = disc->level;
        }
    }

    // Each alive node unicasts its residual energy to the sink. The value in
    // the packet is the energy before paying for the transmission; elections
    // use these snapshots, which is what the sink actually knows.
    void send_reports() {
        for (int u = 0; u < n_; ++u) {
            Node& nd = w_.node(u);
            if (!nd.alive()) continue;
            snap_[u] = nd.energy;
            led_.post(w_, {PacketKind::control, u, {}, m_.ctrl_bits, distance(nd.pos, w_.sink), 0},
                      m_);
        }
    }

    double metric_level1(const Node& nd) const {
        if (proto_ == Protocol::pamc) return 1.0 / static_cast<double>(*nd.sink_mrp);
        return reciprocal_distance(distance(nd.pos, w_.sink));
    }

    void elect_level1() {
        std::vector<int> cand;
        for (const Node& nd : w_.nodes) {
            if (!nd.alive()) continue;
            if (proto_ == Protocol::pamc && !nd.sink_mrp) continue;
            cand.push_back(nd.id);
        }
        topo_.ch_ids_by_level.emplace_back();
        if (cand.empty()) return;
        n_opt_ = optimal_ch_count(static_cast<int>(cand.size()));

        ElectionTotals totals;
        for (int id : cand) {
            totals.total_energy += snap_[id];
            totals.total_reciprocal_metric += metric_level1(w_.node(id));
        }
        totals.member_count = static_cast<int>(cand.size());
        const ElectionParams ep{par_.phi, n_opt_};

        std::vector<int> winners;
        int fallback = cand.front();
        double fallback_p = -1.0;
        for (int id : cand) {
            const double p = level1_probability(snap_[id], metric_level1(w_.node(id)), totals, ep);
            if (p > fallback_p) {
                fallback_p = p;
                fallback = id;
            }
            if (elect(clamp_probability(p), rng_)) winners.push_back(id);
        }
        if (winners.empty()) winners.push_back(fallback);  // never a zero-head round
        for (int id : winners) make_ch(id, 1, sink_id, {});
    }

    void make_ch(int id, int level, int parent, std::vector<int> ancestor_cards) {
        Node& nd = w_.node(id);
        nd.role = Role::cluster_head;
        nd.ch_level = level;
        topo_.is_ch[static_cast<std::size_t>(id)] = true;
        topo_.level[static_cast<std::size_t>(id)] = level;
        topo_.parent[static_cast<std::size_t>(id)] = parent;
        topo_.cluster_card[static_cast<std::size_t>(id)] = 1;  // the head counts itself
        ancestors_[static_cast<std::size_t>(id)] = std::move(ancestor_cards);
        topo_.ch_ids_by_level[static_cast<std::size_t>(level - 1)].push_back(id);
        member_head_[static_cast<std::size_t>(id)] = no_parent;
    }

    // Heads broadcast their advertised coverage: the formula range over the
    // cluster sizes above the head's own cluster. Everyone alive strictly
    // inside pays a reception and regular hearers record the head as a
    // candidate. PAMC transmits at the cheapest discrete power level that
    // covers that range (the hearer set stays the advertised coverage) and a
    // hearer's closeness is the power level found by probing the advertiser.
    void advertise(int level) {
        for (int ch : topo_.chs_at(level)) {
            const Node& head = w_.node(ch);
            if (!head.alive()) continue;
            std::vector<int> above = ancestors_[static_cast<std::size_t>(ch)];
            if (!above.empty()) above.pop_back();
            const double r = broadcast_range(radius_, n_opt_, above);
            double tx_range = r;
            if (proto_ == Protocol::pamc)
                tx_range = table_.range_of(min_level_for_distance(table_, r));
            std::vector<int> rcv;
            for (const Node& nd : w_.nodes)
                if (nd.alive() && nd.id != ch && distance(nd.pos, head.pos) < r)
                    rcv.push_back(nd.id);
            led_.post(w_, {PacketKind::control, ch, rcv, m_.ctrl_bits, tx_range, 0}, m_);
            const int order = ad_counter_++;
            for (int u : rcv) {
                Node& nu = w_.node(u);
                if (!nu.alive() || nu.role != Role::regular) continue;
                double metric;
                if (proto_ == Protocol::pamc) {
                    auto disc = discover_mrp(w_, u, ProbeTarget{ch, head.pos, w_.node(ch).alive()},
                                             table_, nu.mrp_cache, led_, m_);
                    if (!disc || disc->level < 1) continue;  // died probing, or no answer
                    metric = static_cast<double>(disc->level);
                } else {
                    metric = distance(nu.pos, head.pos);
                }
                heard_[static_cast<std::size_t>(u)].push_back({ch, level, metric, order});
            }
        }
    }

    // A node joins one head per level: the best candidate among every head of
    // that level it heard, regardless of which cluster the head grew out of.
    // The join unicast carries the node's energy snapshot, which the head
    // uses in the next election. Joining moves membership, so repeated joins
    // leave a node attached to its deepest head.
    void join_phase(int level) {
        for (int u = 0; u < n_; ++u) {
            Node& nu = w_.node(u);
            if (!nu.alive() || nu.role != Role::regular) continue;
            const CandidateCh* best = nullptr;
            for (const CandidateCh& c : heard_[static_cast<std::size_t>(u)]) {
                if (c.ch_level != level) continue;
                if (!best || c.metric < best->metric) best = &c;
            }
            if (!best) continue;
            const Node& head = w_.node(best->ch_id);
            snap_[u] = nu.energy;
            std::vector<int> rcv;
            if (head.alive()) rcv.push_back(best->ch_id);
            led_.post(w_,
                      {PacketKind::control, u, std::move(rcv), m_.ctrl_bits,
                       distance(nu.pos, head.pos), 0},
                      m_);
            topo_.cluster_card[static_cast<std::size_t>(best->ch_id)] += 1;
            if (!nu.alive()) continue;  // the join went out, but the node is gone
            member_head_[static_cast<std::size_t>(u)] = best->ch_id;
            topo_.parent[static_cast<std::size_t>(u)] = best->ch_id;
            if (proto_ == Protocol::pamc) join_mrp_[u] = static_cast<int>(best->metric);
        }
    }

    double metric_in_cluster(const Node& nd, const Node& head) const {
        if (proto_ == Protocol::pamc) return 1.0 / static_cast<double>(join_mrp_[nd.id]);
        return reciprocal_distance(distance(nd.pos, head.pos));
    }

    // A cluster splits only while its head still has more than two regular
    // members: the head broadcasts a command and each member runs a
    // Bernoulli draw weighted by sqrt(cluster size).
    void elect_next(int level) {
        topo_.ch_ids_by_level.emplace_back();
        for (int c : topo_.chs_at(level)) {
            const Node& head = w_.node(c);
            if (!head.alive()) continue;
            if (topo_.cluster_card[static_cast<std::size_t>(c)] <= 3) continue;
            std::vector<int> members;
            for (int u = 0; u < n_; ++u) {
                const Node& nd = w_.node(u);
                if (member_head_[static_cast<std::size_t>(u)] == c && nd.alive() &&
                    nd.role == Role::regular)
                    members.push_back(u);
            }
            if (members.empty()) continue;
            double r = 0.0;
            for (int u : members) r = std::max(r, distance(w_.node(u).pos, head.pos));
            led_.post(w_, {PacketKind::control, c, members, m_.ctrl_bits, r, 0}, m_);

            std::vector<int> cand;
            for (int u : members) {
                if (!w_.node(u).alive()) continue;  // reception spent the member
                if (proto_ == Protocol::pamc && join_mrp_[u] < 1) continue;
                cand.push_back(u);
            }
            if (cand.empty()) continue;
            ElectionTotals totals;
            for (int u : cand) {
                totals.total_energy += snap_[u];
                totals.total_reciprocal_metric += metric_in_cluster(w_.node(u), head);
            }
            totals.member_count = topo_.cluster_card[static_cast<std::size_t>(c)];
            const ElectionParams ep{par_.phi, n_opt_};

            std::vector<int> winners;
            int fallback = cand.front();
            double fallback_p = -1.0;
            for (int u : cand) {
                const double p =
                    levelj_probability(snap_[u], metric_in_cluster(w_.node(u), head), totals, ep);
                if (p > fallback_p) {
                    fallback_p = p;
                    fallback = u;
                }
                if (elect(clamp_probability(p), rng_)) winners.push_back(u);
            }
            if (winners.empty()) winners.push_back(fallback);
            std::vector<int> anc = ancestors_[static_cast<std::size_t>(c)];
            anc.push_back(topo_.cluster_card[static_cast<std::size_t>(c)]);
            for (int u : winners) make_ch(u, level + 1, c, anc);
        }
        // Heads advertise in id order within a level regardless of which
        // cluster elected them.
        auto& next = topo_.ch_ids_by_level.back();
        std::sort(next.begin(), next.end());
    }

    // LAMC/PAMC re-attachment: the provisional joins above stand unless the
    // node heard a strictly better head anywhere in the hierarchy, in which
    // case it unicasts a join to the better head and a de-join to the old one.
    void finalize_attachment() {
        for (int u = 0; u < n_; ++u) {
            Node& nu = w_.node(u);
            if (!nu.alive() || nu.role != Role::regular) continue;
            const CandidateCh* best = nullptr;
            for (const CandidateCh& c : heard_[static_cast<std::size_t>(u)])
                if (!best || c.metric < best->metric) best = &c;
            if (!best) continue;
            const int old_head = member_head_[static_cast<std::size_t>(u)];
            if (old_head == best->ch_id) continue;

            const Node& head = w_.node(best->ch_id);
            std::vector<int> rcv;
            if (head.alive()) rcv.push_back(best->ch_id);
            led_.post(w_,
                      {PacketKind::control, u, std::move(rcv), m_.ctrl_bits,
                       distance(nu.pos, head.pos), 0},
                      m_);
            if (!nu.alive()) continue;
            if (old_head != no_parent) {
                const Node& prev = w_.node(old_head);
                std::vector<int> rcv2;
                if (prev.alive()) rcv2.push_back(old_head);
                led_.post(w_,
                          {PacketKind::control, u, std::move(rcv2), m_.ctrl_bits,
                           distance(nu.pos, prev.pos), 0},
                          m_);
                if (!nu.alive()) continue;
            }
            member_head_[static_cast<std::size_t>(u)] = best->ch_id;
            topo_.parent[static_cast<std::size_t>(u)] = best->ch_id;
        }
    }

    void finalize_topology() {
        for (int u = 0; u < n_; ++u) {
            const std::size_t i = static_cast<std::size_t>(u);
            if (!w_.node(u).alive() || topo_.is_ch[i]) continue;
            if (member_head_[i] != no_parent) {
                topo_.parent[i] = member_head_[i];
                topo_.level[i] = topo_.level[static_cast<std::size_t>(member_head_[i])] + 1;
            } else {
                topo_.orphan[i] = true;
                topo_.parent[i] = sink_id;
                topo_.level[i] = 1;
            }
        }
    }

    World& w_;
    Protocol proto_;
    const EngineParams& par_;
    const PowerTable& table_;
    Rng& rng_;
    const EnergyModel& m_;
    int n_;

    Topology topo_;
    MessageLedger led_;
    double radius_ = 0.0;
    int n_opt_ = 0;
    int ad_counter_ = 0;
    std::vector<double> snap_;        // energy value in each node's latest report/join
    std::vector<int> member_head_;    // current provisional attachment
    std::vector<int> join_mrp_;       // PAMC: power level written in the latest join
    std::vector<std::vector<CandidateCh>> heard_;
    std::vector<std::vector<int>> ancestors_;  // per head: cluster sizes above it
};

}  // namespace detail

inline SetupResult run_setup(World& w, Protocol proto, const EngineParams& par,
                             const PowerTable& table, Rng& rng, const EnergyModel& m) {
    return detail::SetupRun(w, proto, par, table, rng, m).run();
}

inline SetupResult setup_eemc(World& w, const EngineParams& par, const PowerTable& table, Rng& rng,
                              const EnergyModel& m) {
    return run_setup(w, Protocol::eemc, par, table, rng, m);
}

inline SetupResult setup_lamc(World& w, const EngineParams& par, const PowerTable& table, Rng& rng,
                              const EnergyModel& m) {
    return run_setup(w, Protocol::lamc, par, table, rng, m);
}

inline SetupResult setup_pamc(World& w, const EngineParams& par, const PowerTable& table, Rng& rng,
                              const EnergyModel& m) {
    return run_setup(w, Protocol::pamc, par, table, rng, m);
}

struct OperationReport {
    MessageLedger traffic;
    std::vector<int> hops;  // per originated packet: transmissions on its path
    int delivered = 0;      // packets whose aggregate reached the sink
};

/// Data phase. Regular nodes each unicast one data packet to their parent
/// (orphans straight to the sink); then heads drain deepest-first, each
/// aggregating everything it received plus its own reading into one upstream
/// packet. A packet's hop count grows by one per transmission it rides;
/// packets stranded at a dead relay keep the hops they accumulated.
inline OperationReport operate(World& w, const Topology& topo, const EnergyModel& m) {
    OperationReport rep;
    const int n = static_cast<int>(w.nodes.size());
    std::vector<std::vector<std::pair<int, int>>> inbox(static_cast<std::size_t>(n));

    auto forward = [&](int id, int parent, std::vector<std::pair<int, int>> carried,
                       int agg_signals) {
        const Node& nd = w.node(id);
        double d;
        bool parent_up;
        if (parent == sink_id) {
            d = distance(nd.pos, w.sink);
            parent_up = true;
        } else {
            d = distance(nd.pos, w.node(parent).pos);
            parent_up = w.node(parent).alive();
        }
        std::vector<int> rcv;
        if (parent != sink_id && parent_up) rcv.push_back(parent);
        rep.traffic.post(w, {PacketKind::data, id, std::move(rcv), m.data_bits, d, agg_signals},
                         m);
        if (parent == sink_id) {
            for (const auto& [src, h] : carried) {
                rep.hops.push_back(h);
                ++rep.delivered;
            }
        } else if (parent_up) {
            auto& box = inbox[static_cast<std::size_t>(parent)];
            box.insert(box.end(), carried.begin(), carried.end());
        } else {
            for (const auto& [src, h] : carried) rep.hops.push_back(h);  // lost here
        }
    };

    for (int u = 0; u < n; ++u) {
        const std::size_t i = static_cast<std::size_t>(u);
        if (!w.node(u).alive() || topo.is_ch[i]) continue;
        int parent = topo.parent[i];
        if (parent == no_parent) parent = sink_id;
        forward(u, parent, {{u, 1}}, 0);
    }
    for (int level = topo.max_ch_level(); level >= 1; --level) {
        for (int c : topo.chs_at(level)) {
            auto& box = inbox[static_cast<std::size_t>(c)];
            if (!w.node(c).alive()) {
                for (const auto& [src, h] : box) rep.hops.push_back(h);
                box.clear();
                continue;
            }
            std::vector<std::pair<int, int>> carried = std::move(box);
            const int received = static_cast<int>(carried.size());
            for (auto& [src, h] : carried) ++h;
            carried.emplace_back(c, 1);
            forward(c, topo.parent[static_cast<std::size_t>(c)], std::move(carried),
                    received + 1);
        }
    }
    return rep;
}

}  // namespace mlc
