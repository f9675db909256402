#pragma once

// Helpers shared by the three nibble drivers.

#include <algorithm>
#include <cmath>
#include <vector>

#include "rnm/graph.hpp"

namespace rnm::detail {

inline std::size_t horizon(double eta, double delta) {
    if (!(delta > 0.0) || !(eta > 0.0)) return 0;
    return static_cast<std::size_t>(std::floor(eta / delta + 1e-9));
}

// Integer target for a real size bound; ceil so the bound itself is met.
inline std::size_t size_target(double x) {
    if (!(x > 0.0)) return 0;
    return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

// Deletes the lowest-id alive edges of `edges` until `keep` remain. Returns the number deleted.
inline std::size_t truncate_lowest(EdgeColoredGraph& g, std::vector<EdgeId> edges, std::size_t keep) {
    if (edges.size() <= keep) return 0;
    std::size_t drop = edges.size() - keep;
    std::nth_element(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(drop - 1), edges.end());
    std::sort(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(drop));
    for (std::size_t i = 0; i < drop; ++i) g.delete_edge(edges[i]);
    return drop;
}

// 1 - (1 - frac)^m, computed in log space.
inline double hit_probability(double frac, double m) {
    if (frac <= 0.0) return 0.0;
    if (frac >= 1.0) return 1.0;
    return -std::expm1(m * std::log1p(-frac));
}

}  // namespace rnm::detail
