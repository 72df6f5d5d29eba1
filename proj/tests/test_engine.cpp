#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "mlcsim/mlcsim.hpp"

#include "oracle_sim.hpp"

using namespace mlc;
using namespace otrace;

namespace {

void require_same_ledger(const std::vector<MessageRecord>& expect,
                         const std::vector<MessageRecord>& got) {
    const std::size_t n = std::min(expect.size(), got.size());
    for (std::size_t i = 0; i < n; ++i) {
        INFO("record " << i << "\n  expected: " << describe(expect[i])
                       << "\n  actual:   " << describe(got[i]));
        REQUIRE(expect[i] == got[i]);
    }
    REQUIRE(expect.size() == got.size());
}

void compare_round(const World& w, const SetupResult& s, const OperationReport& op,
                   const OracleSim& o) {
    require_same_ledger(o.setup_rec, s.control.records);
    require_same_ledger(o.data_rec, op.traffic.records);
    REQUIRE(s.radius == o.radius);
    REQUIRE(s.n_ch1_opt == o.nopt);
    for (int i = 0; i < o.n(); ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        INFO("node " << i);
        REQUIRE(w.node(i).energy == o.e[k]);
        REQUIRE(w.node(i).alive() == o.up(i));
        REQUIRE(w.node(i).ch_level == ((o.up(i) && o.is_ch[k]) ? o.lvl[k] : 0));
        REQUIRE(s.topo.parent[k] == o.parent[k]);
        REQUIRE(s.topo.level[k] == o.lvl[k]);
        REQUIRE(s.topo.is_ch[k] == o.is_ch[k]);
        REQUIRE(s.topo.orphan[k] == o.orphan[k]);
        REQUIRE(s.topo.cluster_card[k] == o.card[k]);
        REQUIRE(w.node(i).sink_mrp == o.sink_mrp[k]);
    }
    REQUIRE(strip_trailing_empty(s.topo.ch_ids_by_level) == strip_trailing_empty(o.chs));
    REQUIRE(op.hops == o.hops);
    REQUIRE(op.delivered == o.delivered);
}

}  // namespace

TEST_CASE("protocol rounds match an independent brute-force trace") {
    const std::vector<Point> pos = {{10, 50}, {90, 50}, {14, 47}, {12, 55}, {18, 53}};
    const Point sink{50, 50};
    const PowerTable table = build_power_table(40.0, 6);
    const EnergyModel em;
    const double phi = 0.8;
    const int level_cap = 5;

    struct Scenario {
        const char* name;
        std::vector<double> e0;
        int rounds;
        std::size_t cache_cap;
        std::uint64_t seed_lo, seed_hi;
    };
    const std::vector<Scenario> scenarios = {
        {"ample energy", {0.5, 0.5, 0.5, 0.5, 0.5}, 2, 10, 1, 12},
        {"starved nodes", {4e-6, 0.3, 2.2e-6, 0.3, 1.0e-6}, 2, 10, 1, 12},
        {"uncached", {0.5, 0.5, 0.5, 0.5, 0.5}, 3, 0, 5, 9},
    };

    bool saw_level2 = false, saw_death = false, saw_fallback = false, saw_orphan = false;
    for (const Protocol proto : {Protocol::eemc, Protocol::lamc, Protocol::pamc}) {
        for (const Scenario& sc : scenarios) {
            for (std::uint64_t seed = sc.seed_lo; seed <= sc.seed_hi; ++seed) {
                INFO("protocol " << protocol_name(proto) << ", scenario " << sc.name << ", seed "
                                 << seed);
                World w = make_scripted(pos, sc.e0, sink, sc.cache_cap);
                OracleSim o(pos, sc.e0, sink, table, phi, level_cap, sc.cache_cap);
                Rng engine_rng(mix_seed(seed));
                Rng oracle_rng(mix_seed(seed));
                const EngineParams par{phi, level_cap};
                for (int r = 0; r < sc.rounds; ++r) {
                    if (w.alive_count() == 0) break;
                    SetupResult s = run_setup(w, proto, par, table, engine_rng, em);
                    OperationReport op = operate(w, s.topo, em);
                    o.round(proto, oracle_rng);
                    compare_round(w, s, op, o);
                    saw_level2 = saw_level2 || strip_trailing_empty(o.chs).size() >= 2;
                    saw_death = saw_death || w.alive_count() < 5;
                    saw_orphan =
                        saw_orphan || std::any_of(o.orphan.begin(), o.orphan.end(),
                                                  [](bool b) { return b; });
                }
                saw_fallback = saw_fallback || o.fallbacks > 0;
            }
        }
    }
    CHECK(saw_level2);
    CHECK(saw_death);
    CHECK(saw_fallback);
    CHECK(saw_orphan);
}

namespace {

struct Ad {
    int ch = 0;
    int level = 0;
    double range = 0.0;
};

std::vector<Ad> reconstruct_ads(const SetupResult& s) {
    std::vector<Ad> ads;
    for (int level = 1; level <= s.topo.max_ch_level(); ++level) {
        for (int c : s.topo.chs_at(level)) {
            double denom = s.n_ch1_opt;
            const int par = s.topo.parent[static_cast<std::size_t>(c)];
            if (par != sink_id)
                for (int a = s.topo.parent[static_cast<std::size_t>(par)]; a != sink_id;
                     a = s.topo.parent[static_cast<std::size_t>(a)])
                    denom *= s.topo.cluster_card[static_cast<std::size_t>(a)];
            ads.push_back({c, level, s.radius / std::sqrt(denom)});
        }
    }
    return ads;
}

double ad_metric(Protocol proto, const World& w, int u, const Ad& ad, const PowerTable& table) {
    const double dd = distance(w.node(u).pos, w.node(ad.ch).pos);
    if (proto == Protocol::pamc) return static_cast<double>(min_level_for_distance(table, dd));
    return dd;
}

bool hears(const World& w, int u, const Ad& ad) {
    return distance(w.node(u).pos, w.node(ad.ch).pos) < ad.range;
}

// The provisional per-level joins: at each level pick the best advertiser
// heard among that level's heads, lowest metric first, earlier advertisement
// on ties. Levels where the node heard nothing are skipped.
std::vector<Ad> join_walk(Protocol proto, const World& w, int u, const std::vector<Ad>& ads,
                          const PowerTable& table, int level_limit) {
    std::vector<Ad> picks;
    for (int level = 1; level <= level_limit; ++level) {
        const Ad* best = nullptr;
        double best_m = 0.0;
        for (const Ad& ad : ads) {
            if (ad.level != level || ad.ch == u || !hears(w, u, ad)) continue;
            const double m = ad_metric(proto, w, u, ad, table);
            if (!best || m < best_m) {
                best = &ad;
                best_m = m;
            }
        }
        if (best) picks.push_back(*best);
    }
    return picks;
}

}  // namespace

TEST_CASE("round-one clustering obeys the attachment rules") {
    const Rect field{0, 0, 1000, 1000};
    const EnergyModel em;
    const EngineParams par;
    for (const Protocol proto : {Protocol::eemc, Protocol::lamc, Protocol::pamc}) {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            INFO("protocol " << protocol_name(proto) << ", seed " << seed);
            World w;
            w.nodes = deploy(30, field, seed, 5.0);
            w.sink = {500, 500};
            for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(10);
            const PowerTable table = build_power_table(network_radius(w), 6);
            Rng rng(mix_seed(seed));
            const SetupResult s = run_setup(w, proto, par, table, rng, em);
            const OperationReport op = operate(w, s.topo, em);
            REQUIRE(w.alive_count() == 30);
            REQUIRE(s.n_ch1_opt == optimal_ch_count(30));

            const std::vector<Ad> ads = reconstruct_ads(s);
            std::vector<int> joins(30, 0);
            for (int u = 0; u < 30; ++u) {
                INFO("node " << u);
                const std::size_t i = static_cast<std::size_t>(u);
                if (s.topo.is_ch[i]) {
                    const int lvl = s.topo.level[i];
                    REQUIRE(lvl >= 1);
                    const auto picks = join_walk(proto, w, u, ads, table, lvl - 1);
                    if (lvl == 1) {
                        REQUIRE(s.topo.parent[i] == sink_id);
                    } else {
                        REQUIRE_FALSE(picks.empty());
                        REQUIRE(picks.back().level == lvl - 1);
                        REQUIRE(s.topo.parent[i] == picks.back().ch);
                    }
                    for (const Ad& a : picks) ++joins[static_cast<std::size_t>(a.ch)];
                    continue;
                }
                const auto picks = join_walk(proto, w, u, ads, table, s.topo.max_ch_level());
                for (const Ad& a : picks) ++joins[static_cast<std::size_t>(a.ch)];
                if (proto == Protocol::eemc) {
                    if (picks.empty()) {
                        REQUIRE(s.topo.orphan[i]);
                        REQUIRE(s.topo.parent[i] == sink_id);
                        REQUIRE(s.topo.level[i] == 1);
                    } else {
                        REQUIRE(s.topo.parent[i] == picks.back().ch);
                        REQUIRE(s.topo.level[i] == picks.back().level + 1);
                    }
                } else {
                    const Ad* best = nullptr;
                    double best_m = 0.0;
                    for (const Ad& ad : ads) {
                        if (ad.ch == u || !hears(w, u, ad)) continue;
                        const double m = ad_metric(proto, w, u, ad, table);
                        if (!best || m < best_m) {
                            best = &ad;
                            best_m = m;
                        }
                    }
                    if (!best) {
                        REQUIRE(picks.empty());
                        REQUIRE(s.topo.orphan[i]);
                        REQUIRE(s.topo.parent[i] == sink_id);
                        REQUIRE(s.topo.level[i] == 1);
                    } else {
                        REQUIRE(s.topo.parent[i] == best->ch);
                        REQUIRE(s.topo.level[i] ==
                                s.topo.level[static_cast<std::size_t>(best->ch)] + 1);
                    }
                }
            }
            for (int c = 0; c < 30; ++c) {
                INFO("head " << c);
                const std::size_t i = static_cast<std::size_t>(c);
                if (s.topo.is_ch[i])
                    REQUIRE(s.topo.cluster_card[i] == joins[i] + 1);
                else
                    REQUIRE(s.topo.cluster_card[i] == 0);
            }

            REQUIRE(op.traffic.data_tx() == 30);
            REQUIRE(op.delivered == 30);
            REQUIRE(s.control.control_tx() > 0);
            std::vector<int> hops = op.hops;
            std::vector<int> levels;
            for (int u = 0; u < 30; ++u) levels.push_back(s.topo.level[static_cast<std::size_t>(u)]);
            std::sort(hops.begin(), hops.end());
            std::sort(levels.begin(), levels.end());
            REQUIRE(hops == levels);

            std::vector<bool> listed(30, false);
            bool ended = false;
            for (int lvl = 1; lvl <= s.topo.max_ch_level(); ++lvl) {
                const auto& ids = s.topo.chs_at(lvl);
                if (ids.empty()) {
                    ended = true;
                    continue;
                }
                REQUIRE_FALSE(ended);
                REQUIRE(std::is_sorted(ids.begin(), ids.end()));
                REQUIRE(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
                for (int c : ids) {
                    const std::size_t i = static_cast<std::size_t>(c);
                    REQUIRE(s.topo.is_ch[i]);
                    REQUIRE_FALSE(listed[i]);
                    listed[i] = true;
                    REQUIRE(s.topo.level[i] == lvl);
                }
            }
            for (int u = 0; u < 30; ++u)
                REQUIRE(listed[static_cast<std::size_t>(u)] ==
                        static_cast<bool>(s.topo.is_ch[static_cast<std::size_t>(u)]));
        }
    }
}

TEST_CASE("set-up and data-phase books balance under replay") {
    const Rect field{0, 0, 1000, 1000};
    const EnergyModel em;
    const EngineParams par;
    for (const Protocol proto : {Protocol::eemc, Protocol::lamc, Protocol::pamc}) {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            INFO("protocol " << protocol_name(proto) << ", seed " << seed);
            World w;
            w.nodes = deploy(40, field, seed, 0.0015);
            w.sink = {500, 500};
            for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(10);
            const PowerTable table = build_power_table(network_radius(w), 6);
            Rng rng(mix_seed(seed));
            for (int round = 0; round < 8 && w.alive_count() > 0; ++round) {
                INFO("round " << round + 1);
                World before = w;
                const int alive_before = w.alive_count();
                const SetupResult s = run_setup(w, proto, par, table, rng, em);
                const OperationReport op = operate(w, s.topo, em);
                replay(s.control, before, em);
                replay(op.traffic, before, em);
                for (int i = 0; i < 40; ++i) {
                    INFO("node " << i);
                    REQUIRE(before.node(i).energy == w.node(i).energy);
                    REQUIRE(before.node(i).alive() == w.node(i).alive());
                }
                REQUIRE(w.alive_count() <= alive_before);

                for (int u = 0; u < 40; ++u) {
                    INFO("node " << u);
                    const std::size_t i = static_cast<std::size_t>(u);
                    const bool relevant = s.topo.is_ch[i] || w.node(u).alive();
                    if (!relevant) continue;
                    if (s.topo.orphan[i]) {
                        REQUIRE(s.topo.parent[i] == sink_id);
                        REQUIRE(s.topo.level[i] == 1);
                        continue;
                    }
                    int cur = u;
                    int guard = 0;
                    while (s.topo.parent[static_cast<std::size_t>(cur)] != sink_id) {
                        REQUIRE(++guard <= 40);
                        const int p = s.topo.parent[static_cast<std::size_t>(cur)];
                        REQUIRE(p >= 0);
                        REQUIRE(s.topo.is_ch[static_cast<std::size_t>(p)]);
                        REQUIRE(s.topo.level[static_cast<std::size_t>(p)] ==
                                s.topo.level[static_cast<std::size_t>(cur)] - 1);
                        cur = p;
                    }
                    REQUIRE(s.topo.level[static_cast<std::size_t>(cur)] == 1);
                }
            }
        }
    }
}

TEST_CASE("a round is a pure function of the world and the seed") {
    const Rect field{0, 0, 1000, 1000};
    const EnergyModel em;
    const EngineParams par;
    for (const Protocol proto : {Protocol::eemc, Protocol::lamc, Protocol::pamc}) {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            INFO("protocol " << protocol_name(proto) << ", seed " << seed);
            auto build = [&] {
                World w;
                w.nodes = deploy(25, field, seed, 0.5);
                w.sink = {500, 500};
                for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(10);
                return w;
            };
            World a = build(), b = build();
            const PowerTable table = build_power_table(network_radius(a), 6);
            Rng ra(mix_seed(seed)), rb(mix_seed(seed));
            for (int round = 0; round < 2; ++round) {
                const SetupResult sa = run_setup(a, proto, par, table, ra, em);
                const SetupResult sb = run_setup(b, proto, par, table, rb, em);
                const OperationReport oa = operate(a, sa.topo, em);
                const OperationReport ob = operate(b, sb.topo, em);
                REQUIRE(sa.control.records == sb.control.records);
                REQUIRE(oa.traffic.records == ob.traffic.records);
                REQUIRE(sa.topo.parent == sb.topo.parent);
                REQUIRE(oa.hops == ob.hops);
                for (int i = 0; i < 25; ++i) REQUIRE(a.node(i).energy == b.node(i).energy);
            }
        }
    }
}

TEST_CASE("sink reachability is discovered once per lifetime") {
    const Rect field{0, 0, 1000, 1000};
    const EnergyModel em;
    const EngineParams par;
    World w;
    w.nodes = deploy(20, field, 3, 5.0);
    w.sink = {500, 500};
    for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(10);
    const PowerTable table = build_power_table(network_radius(w), 6);
    Rng rng(mix_seed(3));

    const SetupResult s1 = run_setup(w, Protocol::pamc, par, table, rng, em);
    operate(w, s1.topo, em);
    std::vector<int> first;
    for (const Node& nd : w.nodes) {
        REQUIRE(nd.alive());
        REQUIRE(nd.sink_mrp.has_value());
        REQUIRE(*nd.sink_mrp == min_level_for_distance(table, distance(nd.pos, w.sink)));
        first.push_back(*nd.sink_mrp);
    }
    const SetupResult s2 = run_setup(w, Protocol::pamc, par, table, rng, em);
    operate(w, s2.topo, em);
    for (int i = 0; i < 20; ++i) REQUIRE(*w.node(i).sink_mrp == first[static_cast<std::size_t>(i)]);
}

TEST_CASE("the reachability cache saves repeat discoveries") {
    const Rect field{0, 0, 1000, 1000};
    const EnergyModel em;
    const EngineParams par;
    auto build = [&](std::size_t cap) {
        World w;
        w.nodes = deploy(25, field, 7, 5.0);
        w.sink = {500, 500};
        for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(cap);
        return w;
    };
    World cached = build(10), uncached = build(0);
    const PowerTable table = build_power_table(network_radius(cached), 6);
    Rng rc(mix_seed(7)), ru(mix_seed(7));

    const SetupResult c1 = run_setup(cached, Protocol::pamc, par, table, rc, em);
    const SetupResult u1 = run_setup(uncached, Protocol::pamc, par, table, ru, em);
    const OperationReport oc1 = operate(cached, c1.topo, em);
    const OperationReport ou1 = operate(uncached, u1.topo, em);
    REQUIRE(c1.control.records == u1.control.records);
    REQUIRE(oc1.traffic.records == ou1.traffic.records);

    bool any_cached = false;
    for (const Node& nd : cached.nodes) {
        REQUIRE(nd.alive());
        any_cached = any_cached || nd.mrp_cache.size() > 0;
    }
    REQUIRE(any_cached);
    for (const Node& nd : uncached.nodes) REQUIRE(nd.mrp_cache.size() == 0);

    const SetupResult c2 = run_setup(cached, Protocol::pamc, par, table, rc, em);
    const SetupResult u2 = run_setup(uncached, Protocol::pamc, par, table, ru, em);
    operate(cached, c2.topo, em);
    operate(uncached, u2.topo, em);
    REQUIRE(c2.control.control_tx() <= u2.control.control_tx());
    for (int i = 0; i < 25; ++i)
        REQUIRE(cached.node(i).energy >= uncached.node(i).energy);
}
