#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "mlcsim/config.hpp"
#include "mlcsim/engine.hpp"

namespace mlc {

struct RoundReport {
    int round = 0;
    std::int64_t control_tx = 0;
    std::int64_t data_tx = 0;
    std::vector<int> hops;  // one entry per packet originated this round
    int deaths = 0;
    int alive = 0;
    double total_energy = 0.0;
};

/// Control transmissions per data transmission in one round; absent when no
/// data packet went out.
inline std::optional<double> overhead_ratio(const RoundReport& r) {
    if (r.data_tx == 0) return std::nullopt;
    return static_cast<double>(r.control_tx) / static_cast<double>(r.data_tx);
}

/// Mean transmissions ridden per packet originated this round; absent when
/// nothing was originated.
inline std::optional<double> average_hops(const RoundReport& r) {
    if (r.hops.empty()) return std::nullopt;
    double sum = 0.0;
    for (int h : r.hops) sum += h;
    return sum / static_cast<double>(r.hops.size());
}

struct RoundDetail {
    SetupResult setup;
    OperationReport operation;
    RoundReport report;
};

/// One full round: cluster set-up then the data phase. Advances the world's
/// round counter and reports both phases' tallies.
inline RoundDetail run_round_detailed(World& w, Protocol proto, const EngineParams& par,
                                      const PowerTable& table, Rng& rng, const EnergyModel& m) {
    const int alive_before = w.alive_count();
    RoundDetail d;
    d.setup = run_setup(w, proto, par, table, rng, m);
    d.operation = operate(w, d.setup.topo, m);
    w.round += 1;

    d.report.round = w.round;
    d.report.control_tx = d.setup.control.control_tx() + d.operation.traffic.control_tx();
    d.report.data_tx = d.setup.control.data_tx() + d.operation.traffic.data_tx();
    d.report.hops = d.operation.hops;
    d.report.alive = w.alive_count();
    d.report.deaths = alive_before - d.report.alive;
    d.report.total_energy = w.total_energy();
    return d;
}

inline RoundReport run_round(World& w, Protocol proto, const EngineParams& par,
                             const PowerTable& table, Rng& rng, const EnergyModel& m) {
    return run_round_detailed(w, proto, par, table, rng, m).report;
}

struct LifetimeResult {
    std::optional<int> fnd;  // first round ending with any node dead
    std::optional<int> hnd;  // first round ending with alive <= n/2
    bool censored = false;   // hit the round cap before half the nodes died
    std::vector<RoundReport> rounds;
    double mean_overhead = 0.0;  // unweighted means of the per-round values
    double mean_hops = 0.0;
};

/// Deterministic world construction for a config and seed: node placement is
/// a pure function of (n, field, seed), and the run's decision stream is
/// seeded independently of placement.
inline World make_world(const SimConfig& cfg, std::uint64_t seed) {
    World w;
    w.nodes = deploy(cfg.n, cfg.field, seed, cfg.initial_energy);
    w.sink = cfg.sink;
    for (Node& nd : w.nodes) nd.mrp_cache = MrpCache(static_cast<std::size_t>(cfg.cache_capacity));
    return w;
}

/// Rounds until half the nodes are dead (or the cap). The first-death round
/// is recorded and the run continues to the half-dead round, which ends it.
inline LifetimeResult run_lifetime(const SimConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    World w = make_world(cfg, seed);
    const PowerTable table = build_power_table(network_radius(w), cfg.power_levels);
    Rng rng(mix_seed(seed));
    const EngineParams par{cfg.phi, cfg.level_cap};

    LifetimeResult out;
    const int half = cfg.n / 2;
    double overhead_sum = 0.0, hops_sum = 0.0;
    int overhead_rounds = 0, hops_rounds = 0;
    for (int r = 1; r <= cfg.round_cap; ++r) {
        RoundReport rep = run_round(w, cfg.protocol, par, table, rng, cfg.energy);
        if (auto o = overhead_ratio(rep)) {
            overhead_sum += *o;
            ++overhead_rounds;
        }
        if (auto h = average_hops(rep)) {
            hops_sum += *h;
            ++hops_rounds;
        }
        const int alive = rep.alive;
        out.rounds.push_back(std::move(rep));
        if (!out.fnd && alive < cfg.n) out.fnd = r;
        if (alive <= half) {
            out.hnd = r;
            break;
        }
    }
    out.censored = !out.hnd.has_value();
    if (overhead_rounds > 0) out.mean_overhead = overhead_sum / overhead_rounds;
    if (hops_rounds > 0) out.mean_hops = hops_sum / hops_rounds;
    return out;
}

inline LifetimeResult run_lifetime(const SimConfig& cfg) { return run_lifetime(cfg, cfg.seed); }

}  // namespace mlc
