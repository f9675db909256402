#include "rnm/oracle.hpp"

#include <algorithm>
#include <string>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

struct Search {
    const EdgeColoredGraph& g;
    std::vector<std::vector<EdgeId>> classes;  // non-empty alive classes, ascending color
    std::vector<char> used;
    std::vector<EdgeId> current;
    std::vector<EdgeId> best;
    std::size_t nodes = 0;
    std::size_t budget;
    std::size_t stop_at;  // early exit once best reaches this
    bool out_of_budget = false;

    Search(const EdgeColoredGraph& graph, std::size_t node_budget, std::size_t stop)
        : g(graph), used(graph.num_vertices(), 0), budget(node_budget), stop_at(stop) {
        for (ColorId c = 0; c < g.num_colors(); ++c) {
            if (!g.color_alive(c) || g.class_size(c) == 0) continue;
            std::vector<EdgeId> es(g.class_edges(c).begin(), g.class_edges(c).end());
            std::sort(es.begin(), es.end());
            classes.push_back(std::move(es));
        }
    }

    bool done() const { return out_of_budget || best.size() >= stop_at; }

    void run(std::size_t i) {
        if (++nodes > budget) {
            out_of_budget = true;
            return;
        }
        if (current.size() > best.size()) best = current;
        if (done() || i == classes.size()) return;
        if (current.size() + (classes.size() - i) <= best.size()) return;
        for (EdgeId e : classes[i]) {
            const Edge& ed = g.edge(e);
            if (used[ed.u] || used[ed.v]) continue;
            used[ed.u] = used[ed.v] = 1;
            current.push_back(e);
            run(i + 1);
            current.pop_back();
            used[ed.u] = used[ed.v] = 0;
            if (done()) return;
        }
        run(i + 1);
    }
};

}  // namespace

OracleResult max_rainbow_matching(const EdgeColoredGraph& g, std::size_t node_budget) {
    Search s(g, node_budget, static_cast<std::size_t>(-1));
    s.run(0);
    OracleResult r;
    r.max_size = s.best.size();
    for (EdgeId e : s.best) r.witness.add(e, g.edge(e).c);
    r.explored_nodes = std::min(s.nodes, node_budget);
    r.exact = !s.out_of_budget;
    return r;
}

bool exists_rainbow_matching(const EdgeColoredGraph& g, std::size_t k, std::size_t node_budget) {
    if (k == 0) return true;
    Search s(g, node_budget, k);
    s.run(0);
    if (s.best.size() >= k) return true;
    if (s.out_of_budget) throw Error(ErrorCode::BudgetExceeded, "undecided after " + std::to_string(node_budget) + " nodes");
    return false;
}

std::size_t max_partial_transversal(const std::vector<std::vector<std::size_t>>& latin, std::size_t node_budget) {
    const std::size_t n = latin.size();
    if (n == 0) throw Error(ErrorCode::NotLatin, "empty square");
    for (std::size_t i = 0; i < n; ++i) {
        if (latin[i].size() != n) throw Error(ErrorCode::NotLatin, "row " + std::to_string(i) + " has wrong length");
        std::vector<char> row(n, 0), col(n, 0);
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t r = latin[i][j], c = latin[j].size() == n ? latin[j][i] : n;
            if (r >= n || row[r]) throw Error(ErrorCode::NotLatin, "row " + std::to_string(i) + " is not a permutation");
            if (c >= n || col[c]) throw Error(ErrorCode::NotLatin, "column " + std::to_string(i) + " is not a permutation");
            row[r] = col[c] = 1;
        }
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(n + j), static_cast<ColorId>(latin[i][j])});
    OracleResult r = max_rainbow_matching(EdgeColoredGraph::build(2 * n, edges, n), node_budget);
    if (!r.exact) throw Error(ErrorCode::BudgetExceeded, "transversal search ran out of budget");
    return r.max_size;
}

namespace {

// Branch on the lowest unresolved vertex: leave it unmatched or match it to a free neighbour.
std::size_t matching_dfs(const EdgeColoredGraph& g, std::vector<char>& state, VertexId v, std::size_t current, std::size_t best) {
    const auto n = static_cast<VertexId>(g.num_vertices());
    while (v < n && (state[v] || !g.vertex_alive(v))) ++v;
    if (v == n) return std::max(best, current);
    std::size_t free_left = 0;
    for (VertexId w = v; w < n; ++w) free_left += (!state[w] && g.vertex_alive(w)) ? 1 : 0;
    if (current + free_left / 2 <= best) return best;
    state[v] = 1;
    for (EdgeId e : g.incident(v)) {
        VertexId w = g.edge(e).u == v ? g.edge(e).v : g.edge(e).u;
        if (state[w]) continue;
        state[w] = 1;
        best = matching_dfs(g, state, v + 1, current + 1, best);
        state[w] = 0;
    }
    best = matching_dfs(g, state, v + 1, current, best);
    state[v] = 0;
    return best;
}

}  // namespace

std::size_t max_matching_size(const EdgeColoredGraph& g) {
    std::vector<char> state(g.num_vertices(), 0);
    return matching_dfs(g, state, 0, 0, 0);
}

}  // namespace rnm
