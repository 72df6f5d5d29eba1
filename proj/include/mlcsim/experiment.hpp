#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mlcsim/harness.hpp"
#include "mlcsim/stats.hpp"

namespace mlc {

/// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Per-round summary retained for emitted series (the raw per-packet hop
/// lists are folded into their round mean).
struct RoundSummary {
    int round = 0;
    std::int64_t control_tx = 0;
    std::int64_t data_tx = 0;
    int deaths = 0;
    int alive = 0;
    double total_energy = 0.0;
    std::optional<double> overhead;
    std::optional<double> avg_hops;
};

struct SeedOutcome {
    std::uint64_t seed = 0;
    std::optional<int> fnd;
    std::optional<int> hnd;
    bool censored = false;
    double overhead = 0.0;  // lifetime mean of per-round values
    double hops = 0.0;
    int rounds_run = 0;
    std::vector<RoundSummary> series;  // filled only when requested
};

struct ExperimentResult {
    SimConfig config;
    std::vector<SeedOutcome> outcomes;
    std::optional<double> mean_fnd, median_fnd;  // over uncensored runs
    std::optional<double> mean_hnd, median_hnd;
    double mean_overhead = 0.0, median_overhead = 0.0;
    double mean_hops = 0.0, median_hops = 0.0;
    int censored_runs = 0;
};

/// `seeds` lifetimes at seeds seed, seed+1, ... with per-seed outcomes and
/// mean/median aggregates. Censored runs are excluded from the fnd/hnd
/// aggregates and counted separately, never averaged in silently.
inline ExperimentResult run_experiment(const SimConfig& cfg, bool keep_series = false) {
    cfg.validate();
    ExperimentResult out;
    out.config = cfg;
    std::vector<double> fnds, hnds, overheads, hopses;
    for (int k = 0; k < cfg.seeds; ++k) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(k);
        LifetimeResult life = run_lifetime(cfg, seed);
        SeedOutcome o;
        o.seed = seed;
        o.fnd = life.fnd;
        o.hnd = life.hnd;
        o.censored = life.censored;
        o.overhead = life.mean_overhead;
        o.hops = life.mean_hops;
        o.rounds_run = static_cast<int>(life.rounds.size());
        if (keep_series) {
            o.series.reserve(life.rounds.size());
            for (const RoundReport& r : life.rounds)
                o.series.push_back({r.round, r.control_tx, r.data_tx, r.deaths, r.alive,
                                    r.total_energy, overhead_ratio(r), average_hops(r)});
        }
        if (o.fnd) fnds.push_back(static_cast<double>(*o.fnd));
        if (o.hnd) hnds.push_back(static_cast<double>(*o.hnd));
        if (o.censored) ++out.censored_runs;
        overheads.push_back(o.overhead);
        hopses.push_back(o.hops);
        out.outcomes.push_back(std::move(o));
    }
    if (!fnds.empty()) {
        out.mean_fnd = mean(fnds);
        out.median_fnd = median(fnds);
    }
    if (!hnds.empty()) {
        out.mean_hnd = mean(hnds);
        out.median_hnd = median(hnds);
    }
    out.mean_overhead = mean(overheads);
    out.median_overhead = median(overheads);
    out.mean_hops = mean(hopses);
    out.median_hops = median(hopses);
    return out;
}

/// A labeled row per sweep value. Every row runs the same seed set (the
/// sweep never touches `seed`/`seeds`), so rows support paired tests.
using SweepTable = std::vector<std::pair<std::string, ExperimentResult>>;

inline SweepTable sweep(const SimConfig& base, const SweepSpec& spec, bool keep_series = false) {
    spec.validate();
    SweepTable out;
    for (const std::string& value : spec.values) {
        SimConfig cfg = base;
        apply_key(cfg, spec.parameter, value, "sweep value '" + value + "'");
        cfg.validate();
        out.emplace_back(value, run_experiment(cfg, keep_series));
    }
    return out;
}

/// A single experiment presented as a one-row table, labeled by protocol.
inline SweepTable single_table(const ExperimentResult& result) {
    return {{protocol_name(result.config.protocol), result}};
}

namespace detail {
inline std::string csv_round_field(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("censored");
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF endings on every platform
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}
}  // namespace detail

inline void emit_csv(const SweepTable& table, const std::string& path) {
    std::ofstream out = detail::open_out(path);
    out << "param,seed,fnd,hnd,overhead_ratio,avg_hops\n";
    for (const auto& [label, result] : table) {
        for (const SeedOutcome& o : result.outcomes) {
            out << label << ',' << o.seed << ',' << detail::csv_round_field(o.fnd) << ','
                << detail::csv_round_field(o.hnd) << ',' << format_double(o.overhead) << ','
                << format_double(o.hops) << '\n';
        }
    }
    if (!out.flush()) throw std::runtime_error("cannot write '" + path + "'");
}

inline nlohmann::json config_to_json(const SimConfig& cfg) {
    return nlohmann::json{{"protocol", protocol_name(cfg.protocol)},
                          {"n", cfg.n},
                          {"field", {cfg.field.x0, cfg.field.y0, cfg.field.x1, cfg.field.y1}},
                          {"sink", {cfg.sink.x, cfg.sink.y}},
                          {"phi", cfg.phi},
                          {"power_levels", cfg.power_levels},
                          {"cache_capacity", cfg.cache_capacity},
                          {"seed", cfg.seed},
                          {"seeds", cfg.seeds},
                          {"initial_energy", cfg.initial_energy},
                          {"round_cap", cfg.round_cap},
                          {"level_cap", cfg.level_cap},
                          {"e_elec", cfg.energy.e_elec},
                          {"eps_amp", cfg.energy.eps_amp},
                          {"e_agg", cfg.energy.e_agg},
                          {"data_bits", cfg.energy.data_bits},
                          {"ctrl_bits", cfg.energy.ctrl_bits}};
}

/// Mirrors the CSV records, adds per-value summaries, and includes per-round
/// series when they were collected.
inline void emit_json(const SweepTable& table, const std::string& path) {
    nlohmann::json doc;
    doc["results"] = nlohmann::json::array();
    doc["summary"] = nlohmann::json::array();
    for (const auto& [label, result] : table) {
        for (const SeedOutcome& o : result.outcomes) {
            nlohmann::json row{{"param", label},
                               {"seed", o.seed},
                               {"overhead_ratio", o.overhead},
                               {"avg_hops", o.hops},
                               {"censored", o.censored},
                               {"rounds_run", o.rounds_run}};
            row["fnd"] = o.fnd ? nlohmann::json(*o.fnd) : nlohmann::json(nullptr);
            row["hnd"] = o.hnd ? nlohmann::json(*o.hnd) : nlohmann::json(nullptr);
            if (!o.series.empty()) {
                nlohmann::json series = nlohmann::json::array();
                for (const RoundSummary& r : o.series) {
                    nlohmann::json entry{{"round", r.round},         {"control_tx", r.control_tx},
                                         {"data_tx", r.data_tx},     {"deaths", r.deaths},
                                         {"alive", r.alive},         {"total_energy", r.total_energy}};
                    entry["overhead_ratio"] =
                        r.overhead ? nlohmann::json(*r.overhead) : nlohmann::json(nullptr);
                    entry["avg_hops"] =
                        r.avg_hops ? nlohmann::json(*r.avg_hops) : nlohmann::json(nullptr);
                    series.push_back(std::move(entry));
                }
                row["series"] = std::move(series);
            }
            doc["results"].push_back(std::move(row));
        }
        nlohmann::json s{{"param", label},
                         {"mean_overhead", result.mean_overhead},
                         {"median_overhead", result.median_overhead},
                         {"mean_hops", result.mean_hops},
                         {"median_hops", result.median_hops},
                         {"censored_runs", result.censored_runs},
                         {"config", config_to_json(result.config)}};
        s["mean_fnd"] = result.mean_fnd ? nlohmann::json(*result.mean_fnd) : nlohmann::json(nullptr);
        s["median_fnd"] =
            result.median_fnd ? nlohmann::json(*result.median_fnd) : nlohmann::json(nullptr);
        s["mean_hnd"] = result.mean_hnd ? nlohmann::json(*result.mean_hnd) : nlohmann::json(nullptr);
        s["median_hnd"] =
            result.median_hnd ? nlohmann::json(*result.median_hnd) : nlohmann::json(nullptr);
        doc["summary"].push_back(std::move(s));
    }
    std::ofstream out = detail::open_out(path);
    out << doc.dump(2) << '\n';
    if (!out.flush()) throw std::runtime_error("cannot write '" + path + "'");
}

}  // namespace mlc
