#pragma once

#include <stdexcept>

namespace mlc {

/// First-order radio energy model. Transmitting k bits over distance d costs
/// e_elec*k + eps_amp*k*d^2; receiving costs e_elec*k regardless of distance.
/// Aggregating n signals of k bits costs e_agg*k*n.
struct EnergyModel {
    double e_elec = 50e-9;    // J/bit, transceiver electronics
    double eps_amp = 10e-12;  // J/bit/m^2, transmit amplifier
    double e_agg = 5e-9;      // J/bit/signal, aggregation at cluster heads
    int data_bits = 500;
    int ctrl_bits = 10;

    void validate() const {
        if (e_elec <= 0.0 || eps_amp <= 0.0 || e_agg <= 0.0)
            throw std::invalid_argument("EnergyModel: energy constants must be positive");
        if (data_bits <= 0 || ctrl_bits <= 0)
            throw std::invalid_argument("EnergyModel: packet sizes must be positive");
    }
};

/// Transmission cost of k bits over d meters.
inline double tx_cost(int k, double d, const EnergyModel& m) {
    if (k <= 0) throw std::invalid_argument("tx_cost: k must be positive");
    if (d < 0.0) throw std::invalid_argument("tx_cost: negative distance");
    return m.e_elec * k + m.eps_amp * k * d * d;
}

/// Reception cost of k bits.
inline double rx_cost(int k, const EnergyModel& m) {
    if (k <= 0) throw std::invalid_argument("rx_cost: k must be positive");
    return m.e_elec * k;
}

/// Aggregation cost of n_signals signals of k bits each.
inline double aggregation_cost(int k, int n_signals, const EnergyModel& m) {
    if (k <= 0) throw std::invalid_argument("aggregation_cost: k must be positive");
    if (n_signals < 1) throw std::invalid_argument("aggregation_cost: need at least one signal");
    return m.e_agg * static_cast<double>(k) * static_cast<double>(n_signals);
}

}  // namespace mlc
