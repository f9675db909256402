#include "rnm/completion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "rnm/errors.hpp"
#include "rnm/rng.hpp"

namespace rnm {

bool PartitionedConflictInstance::conflict(EdgeId a, EdgeId b) const {
    if (a == b) return false;
    const Edge& x = graph->edge(a);
    const Edge& y = graph->edge(b);
    return x.u == y.u || x.u == y.v || x.v == y.u || x.v == y.v;
}

std::size_t PartitionedConflictInstance::conflict_degree(EdgeId e) const {
    // Only edges whose color is one of the parts count.
    std::set<ColorId> member(colors.begin(), colors.end());
    const Edge& ed = graph->edge(e);
    std::size_t k = 0;
    for (VertexId w : {ed.u, ed.v})
        for (EdgeId f : graph->incident(w))
            if (f != e && member.count(graph->edge(f).c)) ++k;
    return k;
}

std::size_t PartitionedConflictInstance::max_conflict_degree() const {
    std::vector<std::size_t> deg(graph->num_vertices(), 0);
    for (const auto& part : parts)
        for (EdgeId e : part) {
            ++deg[graph->edge(e).u];
            ++deg[graph->edge(e).v];
        }
    std::size_t best = 0;
    for (const auto& part : parts)
        for (EdgeId e : part) best = std::max(best, deg[graph->edge(e).u] + deg[graph->edge(e).v] - 2);
    return best;
}

PartitionedConflictInstance build_conflict_instance(const EdgeColoredGraph& g, const std::vector<ColorId>& colors) {
    PartitionedConflictInstance inst;
    inst.graph = &g;
    inst.colors = colors;
    for (ColorId c : colors) {
        if (c >= g.num_colors() || !g.color_alive(c) || g.class_size(c) == 0)
            throw Error(ErrorCode::EmptyColor, "color " + std::to_string(c) + " has no alive edge");
        std::vector<EdgeId> part(g.class_edges(c).begin(), g.class_edges(c).end());
        std::sort(part.begin(), part.end());
        inst.parts.push_back(std::move(part));
    }
    return inst;
}

TransversalResult independent_transversal(const PartitionedConflictInstance& inst, std::uint64_t seed, std::size_t resample_budget) {
    const EdgeColoredGraph& g = *inst.graph;
    const std::size_t r = inst.num_parts();
    if (resample_budget == 0) resample_budget = 1000 * std::max<std::size_t>(r, 1);
    for (const auto& p : inst.parts)
        if (p.empty()) throw Error(ErrorCode::EmptyColor, "empty part");

    Rng rng(seed, Purpose::Resampling);
    TransversalResult res;
    res.choice.assign(r, 0);
    std::vector<std::vector<std::uint32_t>> occ(g.num_vertices());
    std::set<VertexId> hot;  // vertices covered by two or more chosen edges

    auto place = [&](std::size_t i) {
        EdgeId e = inst.parts[i][rng.index(inst.parts[i].size())];
        res.choice[i] = e;
        for (VertexId w : {g.edge(e).u, g.edge(e).v}) {
            occ[w].push_back(static_cast<std::uint32_t>(i));
            if (occ[w].size() == 2) hot.insert(w);
        }
    };
    auto lift = [&](std::size_t i) {
        EdgeId e = res.choice[i];
        for (VertexId w : {g.edge(e).u, g.edge(e).v}) {
            auto& o = occ[w];
            o.erase(std::find(o.begin(), o.end(), static_cast<std::uint32_t>(i)));
            if (o.size() == 1) hot.erase(w);
        }
    };

    for (std::size_t i = 0; i < r; ++i) place(i);
    while (!hot.empty()) {
        if (res.resamples >= resample_budget) break;
        VertexId v = *hot.begin();
        auto& o = occ[v];
        std::partial_sort(o.begin(), o.begin() + 2, o.end());
        std::size_t i = o[0], j = o[1];
        lift(i);
        lift(j);
        place(i);
        place(j);
        ++res.resamples;
    }
    for (VertexId v : hot) res.conflicts += occ[v].size() * (occ[v].size() - 1) / 2;
    res.success = hot.empty();
    return res;
}

CompletionResult complete_rainbow_matching(const EdgeColoredGraph& g, const std::vector<ColorId>& colors, std::uint64_t seed,
                                           std::size_t resample_budget) {
    CompletionResult out;
    if (colors.empty()) return out;
    PartitionedConflictInstance inst;
    try {
        inst = build_conflict_instance(g, colors);
    } catch (const Error& e) {
        throw Error(ErrorCode::CompletionFailed, e.what());
    }
    std::vector<std::size_t> deg(g.num_vertices(), 0);
    std::size_t min_part = inst.parts.front().size();
    for (const auto& part : inst.parts) {
        min_part = std::min(min_part, part.size());
        for (EdgeId e : part) {
            ++deg[g.edge(e).u];
            ++deg[g.edge(e).v];
        }
    }
    std::size_t maxdeg = *std::max_element(deg.begin(), deg.end());
    double need = 4.0 * std::numbers::e * static_cast<double>(maxdeg);
    if (static_cast<double>(min_part) < need) {
        out.hypothesis_met = false;
        out.warnings.push_back("completion: smallest class " + std::to_string(min_part) + " < 4e*maxdeg = " + std::to_string(need));
    }
    TransversalResult tr = independent_transversal(inst, seed, resample_budget);
    out.resamples = tr.resamples;
    if (!tr.success)
        throw Error(ErrorCode::CompletionFailed, "BudgetExceeded after " + std::to_string(tr.resamples) + " resamples, " +
                                                     std::to_string(tr.conflicts) + " conflicts left");
    for (std::size_t i = 0; i < tr.choice.size(); ++i) out.matching.add(tr.choice[i], inst.colors[i]);
    return out;
}

namespace {

struct UsedSets {
    std::vector<char> vertex, color;
    UsedSets(const EdgeColoredGraph& g, const RainbowMatching& partial) : vertex(g.num_vertices(), 0), color(g.num_colors(), 0) {
        for (const auto& en : partial.entries) {
            const Edge& e = g.edge(en.edge);
            vertex[e.u] = vertex[e.v] = 1;
            color[e.c] = 1;
        }
    }
    bool free(const Edge& e) const { return !vertex[e.u] && !vertex[e.v] && !color[e.c]; }
    void take(const Edge& e) {
        vertex[e.u] = vertex[e.v] = 1;
        color[e.c] = 1;
    }
};

}  // namespace

RainbowMatching greedy_complete_vertices(const EdgeColoredGraph& g, const RainbowMatching& partial, const std::vector<VertexId>& targets) {
    RainbowMatching out = partial;
    UsedSets used(g, partial);
    for (VertexId v : targets) {
        if (used.vertex[v]) continue;
        EdgeId pick = 0;
        bool found = false;
        for (EdgeId e : g.incident(v))
            if (used.free(g.edge(e)) && (!found || e < pick)) {
                pick = e;
                found = true;
            }
        if (!found) throw Error(ErrorCode::GreedyStuck, "no free edge at target vertex " + std::to_string(v));
        used.take(g.edge(pick));
        out.add(pick, g.edge(pick).c);
    }
    return out;
}

RainbowMatching greedy_complete_colors(const EdgeColoredGraph& g, const RainbowMatching& partial, std::size_t count) {
    RainbowMatching out = partial;
    UsedSets used(g, partial);
    std::vector<EdgeId> order(g.alive_edges().begin(), g.alive_edges().end());
    std::sort(order.begin(), order.end());
    std::size_t added = 0;
    for (EdgeId e : order) {
        if (added == count) break;
        if (!used.free(g.edge(e))) continue;
        used.take(g.edge(e));
        out.add(e, g.edge(e).c);
        ++added;
    }
    if (added < count) throw Error(ErrorCode::GreedyStuck, "no free edge for color target " + std::to_string(added + 1) + " of " + std::to_string(count));
    return out;
}

}  // namespace rnm
