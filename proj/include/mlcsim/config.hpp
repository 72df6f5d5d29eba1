#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlcsim/energy.hpp"
#include "mlcsim/engine.hpp"
#include "mlcsim/geometry.hpp"

namespace mlc {

/// Anything wrong with user-supplied configuration (bad key, bad value,
/// failed validation). The CLI maps this to its config-error exit code.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One simulation's parameters. Defaults are the common benchmark setup:
/// 100 nodes on a 1000x1000 m field, sink at the center, 0.1 J per node,
/// 500-bit data and 10-bit control packets, phi 0.8, 6 power levels, a
/// 10-entry MRP cache, and 20 seeds for multi-run comparisons.
struct SimConfig {
    Protocol protocol = Protocol::eemc;
    int n = 100;
    Rect field{0.0, 0.0, 1000.0, 1000.0};
    Point sink{500.0, 500.0};
    double phi = 0.8;
    int power_levels = 6;
    int cache_capacity = 10;
    std::uint64_t seed = 1;
    int seeds = 20;
    double initial_energy = 0.1;
    int round_cap = 10000;
    int level_cap = 5;
    EnergyModel energy;

    void validate() const {
        if (n < 1) throw ConfigError("n must be at least 1");
        if (field.empty()) throw ConfigError("field must have positive width and height");
        if (phi < 0.0 || phi > 1.0) throw ConfigError("phi must be in [0, 1]");
        if (power_levels < 2) throw ConfigError("power_levels must be at least 2");
        if (cache_capacity < 0) throw ConfigError("cache_capacity must be non-negative");
        if (seeds < 1) throw ConfigError("seeds must be at least 1");
        if (initial_energy <= 0.0) throw ConfigError("initial_energy must be positive");
        if (round_cap < 1) throw ConfigError("round_cap must be at least 1");
        if (level_cap < 1) throw ConfigError("level_cap must be at least 1");
        try {
            energy.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
inline T parse_number(const std::string& value, const std::string& where);

template <>
inline double parse_number<double>(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    }
}

template <>
inline long long parse_number<long long>(const std::string& value, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    }
}

template <>
inline std::uint64_t parse_number<std::uint64_t>(const std::string& value,
                                                 const std::string& where) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(value, &used);
        if (used != value.size() || value.find('-') != std::string::npos)
            throw std::invalid_argument("not a non-negative integer");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(where + ": expected a non-negative integer, got '" + value + "'");
    }
}

inline int parse_bounded_int(const std::string& value, const std::string& where, long long lo,
                             long long hi) {
    const long long v = parse_number<long long>(value, where);
    if (v < lo || v > hi)
        throw ConfigError(where + ": value " + value + " outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    return static_cast<int>(v);
}

inline std::vector<double> parse_doubles(const std::string& value, std::size_t count,
                                         const std::string& where) {
    std::istringstream in(value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number<double>(tok, where));
    if (out.size() != count)
        throw ConfigError(where + ": expected " + std::to_string(count) + " numbers, got " +
                          std::to_string(out.size()));
    return out;
}

}  // namespace detail

inline Protocol parse_protocol(const std::string& value, const std::string& where) {
    if (value == "eemc") return Protocol::eemc;
    if (value == "lamc") return Protocol::lamc;
    if (value == "pamc") return Protocol::pamc;
    throw ConfigError(where + ": unknown protocol '" + value + "' (eemc, lamc, pamc)");
}

/// Set one configuration key from its text value. `where` names the source
/// ("line 3", "--set phi=0.4") for error messages. Unknown keys are errors.
inline void apply_key(SimConfig& cfg, const std::string& key, const std::string& value,
                      const std::string& where) {
    using detail::parse_bounded_int;
    using detail::parse_doubles;
    using detail::parse_number;
    if (key == "protocol") {
        cfg.protocol = parse_protocol(value, where);
    } else if (key == "n") {
        cfg.n = parse_bounded_int(value, where, 1, 1000000);
    } else if (key == "field") {
        const auto v = parse_doubles(value, 4, where);
        cfg.field = Rect{v[0], v[1], v[2], v[3]};
    } else if (key == "sink") {
        const auto v = parse_doubles(value, 2, where);
        cfg.sink = Point{v[0], v[1]};
    } else if (key == "phi") {
        cfg.phi = parse_number<double>(value, where);
        if (cfg.phi < 0.0 || cfg.phi > 1.0)
            throw ConfigError(where + ": phi must be in [0, 1], got " + value);
    } else if (key == "power_levels") {
        cfg.power_levels = parse_bounded_int(value, where, 2, 1000);
    } else if (key == "cache_capacity") {
        cfg.cache_capacity = parse_bounded_int(value, where, 0, 1000000);
    } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(value, where);
    } else if (key == "seeds") {
        cfg.seeds = parse_bounded_int(value, where, 1, 100000);
    } else if (key == "initial_energy") {
        cfg.initial_energy = parse_number<double>(value, where);
        if (cfg.initial_energy <= 0.0)
            throw ConfigError(where + ": initial_energy must be positive, got " + value);
    } else if (key == "round_cap") {
        cfg.round_cap = parse_bounded_int(value, where, 1, 100000000);
    } else if (key == "level_cap") {
        cfg.level_cap = parse_bounded_int(value, where, 1, 64);
    } else if (key == "e_agg") {
        cfg.energy.e_agg = parse_number<double>(value, where);
        if (cfg.energy.e_agg <= 0.0)
            throw ConfigError(where + ": e_agg must be positive, got " + value);
    } else if (key == "data_bits") {
        cfg.energy.data_bits = parse_bounded_int(value, where, 1, 1000000000);
    } else if (key == "ctrl_bits") {
        cfg.energy.ctrl_bits = parse_bounded_int(value, where, 1, 1000000000);
    } else {
        throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

struct ParsedConfig {
    SimConfig config;
    std::vector<std::string> keys_seen;  // in file order, for warning logic
};

/// Fields that only PAMC consults; setting them under another protocol is
/// legal but almost certainly a mistake, so it warns.
inline std::vector<std::string> config_warnings(const SimConfig& cfg,
                                                const std::vector<std::string>& keys_seen) {
    std::vector<std::string> out;
    if (cfg.protocol == Protocol::pamc) return out;
    for (const std::string& key : keys_seen)
        if (key == "cache_capacity" || key == "power_levels")
            out.push_back("'" + key + "' only affects pamc; protocol is " +
                          protocol_name(cfg.protocol));
    return out;
}

/// Line-oriented `key = value` text, '#' starts a comment, blank lines are
/// skipped. An empty file yields the defaults. Every error names its line.
inline ParsedConfig parse_config(const std::string& text) {
    ParsedConfig out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": missing key");
        if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
        apply_key(out.config, key, value, where);
        out.keys_seen.push_back(key);
    }
    out.config.validate();
    return out;
}

/// What a sweep varies and the values it takes, every value run over the
/// same seed set so rows are pairwise comparable.
struct SweepSpec {
    std::string parameter;            // phi | cache_capacity | n | protocol
    std::vector<std::string> values;  // textual, applied via apply_key

    void validate() const {
        if (parameter != "phi" && parameter != "cache_capacity" && parameter != "n" &&
            parameter != "protocol")
            throw ConfigError("sweep parameter must be phi, cache_capacity, n, or protocol");
        if (values.empty()) throw ConfigError("sweep needs at least one value");
    }
};

}  // namespace mlc
