#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mlcsim/node.hpp"
#include "mlcsim/rng.hpp"

namespace mlc {

/// Drop n nodes uniformly at random over the field. Pure function of
/// (n, field, seed): the same arguments always produce the same node sequence.
/// Every node starts with the given energy and a regular role.
inline std::vector<Node> deploy(int n, const Rect& field, std::uint64_t seed,
                                double initial_energy = 0.1) {
    if (n < 1) throw std::invalid_argument("deploy: need at least one node");
    if (field.empty()) throw std::invalid_argument("deploy: empty field");
    if (initial_energy <= 0.0) throw std::invalid_argument("deploy: energy must be positive");
    Rng rng(seed);
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Node node;
        node.id = i;
        node.pos.x = rng.uniform(field.x0, field.x1);
        node.pos.y = rng.uniform(field.y0, field.y1);
        node.energy = initial_energy;
        nodes.push_back(std::move(node));
    }
    return nodes;
}

/// All mutable simulation state: the node population plus the sink. The sink
/// is mains-powered and never dies; it is not a Node.
struct World {
    std::vector<Node> nodes;  // nodes[i].id == i
    Point sink;
    int round = 0;

    Node& node(int id) { return nodes.at(static_cast<std::size_t>(id)); }
    const Node& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }

    int alive_count() const {
        return static_cast<int>(std::count_if(nodes.begin(), nodes.end(),
                                              [](const Node& n) { return n.alive(); }));
    }

    std::vector<int> alive_ids() const {
        std::vector<int> ids;
        for (const Node& n : nodes)
            if (n.alive()) ids.push_back(n.id);
        return ids;
    }

    double total_energy() const {
        double sum = 0.0;
        for (const Node& n : nodes) sum += n.energy;
        return sum;
    }
};

/// Farthest alive node from the sink; the R fed into advertisement ranges.
inline double network_radius(const World& w) {
    double r = -1.0;
    for (const Node& n : w.nodes)
        if (n.alive()) r = std::max(r, distance(n.pos, w.sink));
    if (r < 0.0) throw std::invalid_argument("network_radius: no alive nodes");
    return r;
}

}  // namespace mlc
