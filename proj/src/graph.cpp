#include "rnm/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

std::uint64_t pair_key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

auto find_color(std::vector<std::pair<ColorId, std::uint32_t>>& counts, ColorId c) {
    return std::lower_bound(counts.begin(), counts.end(), c,
                            [](const auto& p, ColorId key) { return p.first < key; });
}

}  // namespace

EdgeColoredGraph EdgeColoredGraph::build(std::size_t n, const std::vector<Edge>& edges, std::size_t num_colors) {
    EdgeColoredGraph g;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (e.u >= n || e.v >= n)
            throw Error(ErrorCode::VertexOutOfRange, "edge " + std::to_string(i) + " has an endpoint >= " + std::to_string(n));
        if (e.u == e.v) throw Error(ErrorCode::LoopEdge, "edge " + std::to_string(i) + " is a loop at " + std::to_string(e.u));
        if (!seen.insert(pair_key(e.u, e.v)).second)
            throw Error(ErrorCode::ParallelEdge, "edge " + std::to_string(i) + " repeats pair (" + std::to_string(e.u) + "," +
                                                     std::to_string(e.v) + ")");
        num_colors = std::max<std::size_t>(num_colors, std::size_t{e.c} + 1);
    }

    g.edges_ = edges;
    g.vertex_alive_.assign(n, 1);
    g.edge_alive_.assign(edges.size(), 1);
    g.color_alive_.assign(num_colors, 1);
    g.inc_.assign(n, {});
    g.cls_.assign(num_colors, {});
    g.cdeg_.assign(n, {});
    g.pos_u_.resize(edges.size());
    g.pos_v_.resize(edges.size());
    g.pos_c_.resize(edges.size());
    g.pos_all_.resize(edges.size());
    g.all_.resize(edges.size());
    for (EdgeId e = 0; e < edges.size(); ++e) {
        const Edge& ed = edges[e];
        g.pos_u_[e] = static_cast<std::uint32_t>(g.inc_[ed.u].size());
        g.inc_[ed.u].push_back(e);
        g.pos_v_[e] = static_cast<std::uint32_t>(g.inc_[ed.v].size());
        g.inc_[ed.v].push_back(e);
        g.pos_c_[e] = static_cast<std::uint32_t>(g.cls_[ed.c].size());
        g.cls_[ed.c].push_back(e);
        g.pos_all_[e] = e;
        g.all_[e] = e;
    }
    for (VertexId v = 0; v < n; ++v) {
        auto& counts = g.cdeg_[v];
        for (EdgeId e : g.inc_[v]) counts.emplace_back(edges[e].c, 1);
        std::sort(counts.begin(), counts.end());
        std::size_t out = 0;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            if (out > 0 && counts[out - 1].first == counts[i].first)
                counts[out - 1].second += 1;
            else
                counts[out++] = counts[i];
        }
        counts.resize(out);
    }
    g.alive_vertices_ = n;
    g.alive_colors_ = num_colors;
    return g;
}

std::size_t EdgeColoredGraph::color_degree(VertexId v, ColorId c) const {
    const auto& counts = cdeg_[v];
    auto it = std::lower_bound(counts.begin(), counts.end(), c, [](const auto& p, ColorId key) { return p.first < key; });
    return (it != counts.end() && it->first == c) ? it->second : 0;
}

void EdgeColoredGraph::swap_remove(std::vector<EdgeId>& list, std::vector<std::uint32_t>& pos, EdgeId e) {
    std::uint32_t i = pos[e];
    EdgeId last = list.back();
    list[i] = last;
    pos[last] = i;
    list.pop_back();
}

void EdgeColoredGraph::kill_edge(EdgeId e) {
    const Edge& ed = edges_[e];
    edge_alive_[e] = 0;
    // inc_ lists share two position arrays; fix whichever slot the moved edge uses.
    for (VertexId w : {ed.u, ed.v}) {
        auto& list = inc_[w];
        std::uint32_t i = (w == ed.u) ? pos_u_[e] : pos_v_[e];
        EdgeId last = list.back();
        list[i] = last;
        if (edges_[last].u == w)
            pos_u_[last] = i;
        else
            pos_v_[last] = i;
        list.pop_back();
        auto it = find_color(cdeg_[w], ed.c);
        it->second -= 1;
    }
    swap_remove(cls_[ed.c], pos_c_, e);
    swap_remove(all_, pos_all_, e);
}

void EdgeColoredGraph::delete_vertex(VertexId v) {
    if (v >= num_vertices()) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
    if (!vertex_alive_[v]) throw Error(ErrorCode::AlreadyDead, "vertex " + std::to_string(v));
    while (!inc_[v].empty()) kill_edge(inc_[v].back());
    vertex_alive_[v] = 0;
    --alive_vertices_;
}

void EdgeColoredGraph::delete_color_class(ColorId c) {
    if (c >= num_colors()) throw Error(ErrorCode::UnknownEdge, "color " + std::to_string(c) + " out of range");
    if (!color_alive_[c]) throw Error(ErrorCode::AlreadyDead, "color " + std::to_string(c));
    while (!cls_[c].empty()) kill_edge(cls_[c].back());
    color_alive_[c] = 0;
    --alive_colors_;
}

void EdgeColoredGraph::delete_edge(EdgeId e) {
    if (e >= num_edges()) throw Error(ErrorCode::UnknownEdge, "edge " + std::to_string(e));
    if (!edge_alive_[e]) throw Error(ErrorCode::AlreadyDead, "edge " + std::to_string(e));
    kill_edge(e);
}

void EdgeColoredGraph::set_part_a(const std::vector<VertexId>& a) {
    part_a_flag_.assign(num_vertices(), 0);
    part_a_.clear();
    for (VertexId v : a) {
        if (v >= num_vertices()) throw Error(ErrorCode::VertexOutOfRange, "part A vertex " + std::to_string(v));
        if (!part_a_flag_[v]) part_a_.push_back(v);
        part_a_flag_[v] = 1;
    }
}

void EdgeColoredGraph::check_invariants() const {
    auto fail = [](const std::string& msg) { throw std::logic_error("graph invariant: " + msg); };
    std::vector<std::size_t> deg(num_vertices(), 0);
    std::vector<std::size_t> csize(num_colors(), 0);
    std::vector<std::map<ColorId, std::size_t>> cd(num_vertices());
    std::size_t alive = 0;
    for (EdgeId e = 0; e < num_edges(); ++e) {
        if (!edge_alive_[e]) continue;
        const Edge& ed = edges_[e];
        if (!vertex_alive_[ed.u] || !vertex_alive_[ed.v]) fail("alive edge at dead vertex");
        if (!color_alive_[ed.c]) fail("alive edge of dead color");
        ++deg[ed.u];
        ++deg[ed.v];
        ++csize[ed.c];
        ++cd[ed.u][ed.c];
        ++cd[ed.v][ed.c];
        ++alive;
        if (inc_[ed.u][pos_u_[e]] != e || inc_[ed.v][pos_v_[e]] != e) fail("incidence position");
        if (cls_[ed.c][pos_c_[e]] != e || all_[pos_all_[e]] != e) fail("class position");
    }
    if (alive != all_.size()) fail("alive edge count");
    for (VertexId v = 0; v < num_vertices(); ++v) {
        if (deg[v] != inc_[v].size()) fail("degree of " + std::to_string(v));
        std::size_t sum = 0;
        for (const auto& [c, k] : cdeg_[v]) {
            auto it = cd[v].find(c);
            std::size_t expect = it == cd[v].end() ? 0 : it->second;
            if (k != expect) fail("color degree of " + std::to_string(v));
            sum += k;
        }
        if (sum != deg[v]) fail("color degree sum of " + std::to_string(v));
    }
    for (ColorId c = 0; c < num_colors(); ++c)
        if (csize[c] != cls_[c].size()) fail("class size of " + std::to_string(c));
    std::size_t av = static_cast<std::size_t>(std::count(vertex_alive_.begin(), vertex_alive_.end(), 1));
    std::size_t ac = static_cast<std::size_t>(std::count(color_alive_.begin(), color_alive_.end(), 1));
    if (av != alive_vertices_ || ac != alive_colors_) fail("alive counters");
}

GraphStats snapshot_stats(const EdgeColoredGraph& g) {
    GraphStats s;
    s.alive_vertices = g.alive_vertex_count();
    s.alive_edges = g.alive_edge_count();
    s.alive_colors = g.alive_color_count();
    bool first = true;
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c)) continue;
        std::size_t k = g.class_size(c);
        s.min_class = first ? k : std::min(s.min_class, k);
        s.max_class = std::max(s.max_class, k);
        first = false;
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!g.vertex_alive(v)) continue;
        s.max_degree = std::max(s.max_degree, g.degree(v));
        for (const auto& [c, k] : g.color_counts(v)) s.max_color_degree = std::max<std::size_t>(s.max_color_degree, k);
    }
    return s;
}

EdgeColoredGraph alive_subgraph(const EdgeColoredGraph& g, const std::function<bool(EdgeId)>& keep,
                                const std::function<ColorId(ColorId)>& recolor, std::size_t num_colors,
                                std::vector<EdgeId>& to_parent) {
    std::vector<Edge> edges;
    to_parent.clear();
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
        if (!g.edge_alive(e) || !keep(e)) continue;
        Edge ed = g.edge(e);
        ed.c = recolor(ed.c);
        edges.push_back(ed);
        to_parent.push_back(e);
    }
    EdgeColoredGraph sub = EdgeColoredGraph::build(g.num_vertices(), edges, num_colors);
    if (!g.part_a().empty()) sub.set_part_a(g.part_a());
    return sub;
}

VerifyResult verify_rainbow_matching(const EdgeColoredGraph& g, const RainbowMatching& m) {
    VerifyResult r;
    for (std::size_t i = 0; i < m.entries.size(); ++i)
        if (m.entries[i].edge >= g.num_edges())
            throw Error(ErrorCode::UnknownEdge, "matching entry " + std::to_string(i) + " names edge " +
                                                    std::to_string(m.entries[i].edge));
    std::map<VertexId, std::vector<std::size_t>> by_vertex;
    std::map<ColorId, std::vector<std::size_t>> by_color;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        const Edge& ed = g.edge(m.entries[i].edge);
        by_vertex[ed.u].push_back(i);
        by_vertex[ed.v].push_back(i);
        by_color[ed.c].push_back(i);
        if (ed.c != m.entries[i].color) r.violations.push_back({ViolationKind::ColorMismatch, i, i, m.entries[i].color});
    }
    // A pair of entries can share two vertices (duplicate edge); report it once.
    std::set<std::pair<std::size_t, std::size_t>> incident_pairs;
    for (const auto& [v, list] : by_vertex)
        for (std::size_t a = 0; a < list.size(); ++a)
            for (std::size_t b = a + 1; b < list.size(); ++b)
                if (incident_pairs.insert({list[a], list[b]}).second)
                    r.violations.push_back({ViolationKind::Incidence, list[a], list[b], v});
    for (const auto& [c, list] : by_color)
        for (std::size_t a = 0; a < list.size(); ++a)
            for (std::size_t b = a + 1; b < list.size(); ++b) r.violations.push_back({ViolationKind::Color, list[a], list[b], c});
    r.ok = r.violations.empty();
    return r;
}

}  // namespace rnm
