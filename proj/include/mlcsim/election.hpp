#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlcsim/rng.hpp"

namespace mlc {

/// Aggregates a cluster head election runs over: total residual energy,
/// total reciprocal closeness metric (1/distance or 1/power-level), and the
/// number of members those sums cover.
struct ElectionTotals {
    double total_energy = 0.0;
    double total_reciprocal_metric = 0.0;
    int member_count = 0;
};

struct ElectionParams {
    double phi = 0.8;   // weight of residual energy vs closeness, in [0,1]
    int n_ch1_opt = 1;  // target number of level-1 cluster heads
};

/// Target level-1 cluster head count: round(sqrt(n)), at least 1.
inline int optimal_ch_count(int n) {
    if (n < 1) throw std::invalid_argument("optimal_ch_count: n must be positive");
    const int c = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return c < 1 ? 1 : c;
}

namespace detail {
inline void check_totals(const ElectionTotals& t, const char* who) {
    if (t.total_energy <= 0.0 || t.total_reciprocal_metric <= 0.0 || t.member_count < 1)
        throw std::invalid_argument(std::string(who) + ": degenerate totals");
}
}  // namespace detail

/// Raw (unclamped) probability of becoming a level-1 cluster head:
///   n_ch1_opt * [phi * e_u / sum(E) + (1-phi) * metric_u / sum(metric)]
/// where metric_u is the node's reciprocal closeness to the sink.
/// Summed over the active set this is exactly n_ch1_opt.
inline double level1_probability(double e_u, double metric_u, const ElectionTotals& totals,
                                 const ElectionParams& params) {
    detail::check_totals(totals, "level1_probability");
    return params.n_ch1_opt * (params.phi * e_u / totals.total_energy +
                               (1.0 - params.phi) * metric_u / totals.total_reciprocal_metric);
}

/// Raw probability of becoming a level-j cluster head inside one cluster:
///   sqrt(N_{j-1}) * [phi * e_u / sum(E) + (1-phi) * metric_u / sum(metric)]
/// with sums over the parent cluster's member set. Summed over the members
/// this is exactly sqrt(N_{j-1}).
inline double levelj_probability(double e_u, double metric_u, const ElectionTotals& cluster_totals,
                                 const ElectionParams& params) {
    detail::check_totals(cluster_totals, "levelj_probability");
    return std::sqrt(static_cast<double>(cluster_totals.member_count)) *
           (params.phi * e_u / cluster_totals.total_energy +
            (1.0 - params.phi) * metric_u / cluster_totals.total_reciprocal_metric);
}

/// The formulas can exceed 1 (or round to -0); pin to [0,1] before drawing.
inline double clamp_probability(double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return p;
}

/// One Bernoulli draw from the run's stream.
inline bool elect(double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("elect: p outside [0,1]");
    return rng.uniform01() < p;
}

/// Advertisement radius of a cluster head:
///   R / sqrt(n_ch1_opt * product(ancestor cluster cardinalities))
/// ancestor_sizes lists N_1..N_{j-2} along the head's chain from level 1 and
/// is empty for a level-1 head.
inline double broadcast_range(double R, int n_ch1_opt, const std::vector<int>& ancestor_sizes) {
    if (R <= 0.0) throw std::invalid_argument("broadcast_range: R must be positive");
    if (n_ch1_opt < 1) throw std::invalid_argument("broadcast_range: n_ch1_opt must be positive");
    double denom = static_cast<double>(n_ch1_opt);
    for (int s : ancestor_sizes) {
        if (s < 1) throw std::invalid_argument("broadcast_range: ancestor size must be positive");
        denom *= static_cast<double>(s);
    }
    return R / std::sqrt(denom);
}

/// Distances are floored at 1 m before taking reciprocals so that a node
/// co-located with its reference point cannot produce an infinite metric.
inline double reciprocal_distance(double d) {
    return 1.0 / (d < 1.0 ? 1.0 : d);
}

}  // namespace mlc
