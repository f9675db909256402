#pragma once

// Hand-rolled generators for property tests.

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "rnm/graph.hpp"

namespace gen {

struct Prng {
    std::mt19937_64 eng;
    explicit Prng(std::uint64_t seed) : eng(seed * 0x9E3779B97F4A7C15ull + 17) {}
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(eng); }
};

// Simple graph with up to max_edges edges on n vertices, colors below k.
inline rnm::EdgeColoredGraph small_graph(Prng& r, std::size_t n, std::size_t max_edges, std::size_t k) {
    std::set<std::pair<unsigned, unsigned>> seen;
    std::vector<rnm::Edge> es;
    const std::size_t want = r.below(max_edges + 1);
    for (std::size_t tries = 0; es.size() < want && tries < 50 * (want + 1); ++tries) {
        auto u = static_cast<unsigned>(r.below(n)), v = static_cast<unsigned>(r.below(n));
        if (u == v) continue;
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
        es.push_back({u, v, static_cast<unsigned>(r.below(k))});
    }
    return rnm::EdgeColoredGraph::build(n, es, k);
}

// Properly colored random graph: each color a random matching of the given size.
inline rnm::EdgeColoredGraph proper_graph(Prng& r, std::size_t n, std::size_t colors, std::size_t per_color) {
    std::set<std::pair<unsigned, unsigned>> seen;
    std::vector<rnm::Edge> es;
    for (unsigned c = 0; c < colors; ++c) {
        std::vector<char> busy(n, 0);
        std::size_t have = 0;
        for (std::size_t tries = 0; have < per_color && tries < 1000 * per_color; ++tries) {
            auto u = static_cast<unsigned>(r.below(n)), v = static_cast<unsigned>(r.below(n));
            if (u == v || busy[u] || busy[v]) continue;
            if (!seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
            busy[u] = busy[v] = 1;
            es.push_back({u, v, c});
            ++have;
        }
    }
    return rnm::EdgeColoredGraph::build(n, es, colors);
}

// Random subset of edge ids as a candidate matching (not necessarily valid).
inline rnm::RainbowMatching random_entries(Prng& r, const rnm::EdgeColoredGraph& g, std::size_t max_size) {
    rnm::RainbowMatching m;
    if (g.num_edges() == 0) return m;
    const std::size_t k = r.below(max_size + 1);
    for (std::size_t i = 0; i < k; ++i) {
        auto e = static_cast<rnm::EdgeId>(r.below(g.num_edges()));
        m.add(e, g.edge(e).c);
    }
    return m;
}

}  // namespace gen
