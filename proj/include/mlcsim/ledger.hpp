#pragma once

#include <cstdint>
#include <vector>

#include "mlcsim/energy.hpp"
#include "mlcsim/world.hpp"

namespace mlc {

enum class PacketKind { control, data };

/// One transmission. receivers lists exactly the parties that paid rx for it
/// (sink_id entries pay nothing). agg_signals > 0 means the sender also paid
/// aggregation over that many signals as part of this transmission.
struct MessageRecord {
    PacketKind kind = PacketKind::control;
    int sender = sink_id;
    std::vector<int> receivers;
    int bits = 0;
    double range = 0.0;  // broadcast radius, or unicast distance
    int agg_signals = 0;

    friend bool operator==(const MessageRecord& a, const MessageRecord& b) {
        return a.kind == b.kind && a.sender == b.sender && a.receivers == b.receivers &&
               a.bits == b.bits && a.range == b.range && a.agg_signals == b.agg_signals;
    }
};

/// Apply one record's debits to the world: sender pays tx (plus aggregation,
/// if any), every non-sink receiver pays rx. The sink pays nothing on either
/// side. All engine debits go through here, so replaying a ledger against a
/// copy of the starting world reproduces end-of-phase energies exactly.
inline void apply_record(World& w, const MessageRecord& rec, const EnergyModel& m) {
    if (rec.sender != sink_id) {
        double cost = tx_cost(rec.bits, rec.range, m);
        if (rec.agg_signals > 0) cost += aggregation_cost(rec.bits, rec.agg_signals, m);
        debit(w.node(rec.sender), cost);
    }
    for (int r : rec.receivers) {
        if (r != sink_id) debit(w.node(r), rx_cost(rec.bits, m));
    }
}

/// Ordered transcript of every transmission in a phase.
struct MessageLedger {
    std::vector<MessageRecord> records;

    std::int64_t control_tx() const {
        std::int64_t n = 0;
        for (const auto& r : records) n += r.kind == PacketKind::control;
        return n;
    }

    std::int64_t data_tx() const {
        std::int64_t n = 0;
        for (const auto& r : records) n += r.kind == PacketKind::data;
        return n;
    }

    /// Record the message and debit the world in one step.
    void post(World& w, MessageRecord rec, const EnergyModel& m) {
        apply_record(w, rec, m);
        records.push_back(std::move(rec));
    }

    void append(const MessageLedger& other) {
        records.insert(records.end(), other.records.begin(), other.records.end());
    }
};

/// Re-run a ledger against a world snapshot (for balance checks).
inline void replay(const MessageLedger& ledger, World& w, const EnergyModel& m) {
    for (const auto& rec : ledger.records) apply_record(w, rec, m);
}

}  // namespace mlc
