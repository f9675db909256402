#pragma once

// Brute-force reference answers for small graphs. Shares nothing with the library
// beyond reading the edge list.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <set>
#include <vector>

#include "rnm/graph.hpp"

namespace ref {

struct SmallEdge {
    unsigned u, v, c;
};

inline std::vector<SmallEdge> alive_edges(const rnm::EdgeColoredGraph& g) {
    std::vector<SmallEdge> es;
    for (rnm::EdgeId e = 0; e < g.num_edges(); ++e)
        if (g.edge_alive(e)) es.push_back({g.edge(e).u, g.edge(e).v, g.edge(e).c});
    return es;
}

// Every subset checked directly: no pruning, no ordering tricks.
inline std::size_t max_matching_by_subsets(const std::vector<SmallEdge>& es, bool rainbow) {
    const std::size_t m = es.size();
    std::size_t best = 0;
    for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
        std::set<unsigned> vs, cs;
        bool ok = true;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (!(mask & (1ul << i))) continue;
            ++cnt;
            ok = vs.insert(es[i].u).second && vs.insert(es[i].v).second;
            if (rainbow) ok = ok && cs.insert(es[i].c).second;
        }
        if (ok) best = std::max(best, cnt);
    }
    return best;
}

inline std::size_t max_rainbow(const rnm::EdgeColoredGraph& g) { return max_matching_by_subsets(alive_edges(g), true); }
inline std::size_t max_matching(const rnm::EdgeColoredGraph& g) { return max_matching_by_subsets(alive_edges(g), false); }

// Largest set of cells, distinct rows/cols/symbols, by trying every column permutation
// and every subset of rows along it.
inline std::size_t max_partial_transversal(const std::vector<std::vector<std::size_t>>& L) {
    const std::size_t n = L.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        // along a fixed permutation the best subset keeps one cell per distinct symbol
        std::set<std::size_t> syms;
        for (std::size_t i = 0; i < n; ++i) syms.insert(L[i][perm[i]]);
        best = std::max(best, syms.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Pairwise check of the rainbow-matching contract.
inline bool is_rainbow_matching(const rnm::EdgeColoredGraph& g, const rnm::RainbowMatching& m) {
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const auto& a = g.edge(m.entries[i].edge);
        if (a.c != m.entries[i].color) return false;
        for (std::size_t j = i + 1; j < m.entries.size(); ++j) {
            const auto& b = g.edge(m.entries[j].edge);
            if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v || a.c == b.c) return false;
        }
    }
    return true;
}

}  // namespace ref
