#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rnm {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using ColorId = std::uint32_t;

struct Edge {
    VertexId u;
    VertexId v;
    ColorId c;
    bool operator==(const Edge&) const = default;
};

struct GraphStats {
    std::size_t alive_vertices = 0;
    std::size_t alive_edges = 0;
    std::size_t alive_colors = 0;
    std::size_t min_class = 0;  // over alive colors, empty classes included
    std::size_t max_class = 0;
    std::size_t max_degree = 0;
    std::size_t max_color_degree = 0;
};

// Simple edge-colored graph with flag deletion. The original edge list is never
// modified, so matchings can always be verified against it.
class EdgeColoredGraph {
public:
    EdgeColoredGraph() = default;

    // num_colors is raised to max color + 1 if smaller.
    static EdgeColoredGraph build(std::size_t n, const std::vector<Edge>& edges, std::size_t num_colors = 0);

    std::size_t num_vertices() const { return vertex_alive_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_colors() const { return color_alive_.size(); }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool vertex_alive(VertexId v) const { return vertex_alive_[v] != 0; }
    bool edge_alive(EdgeId e) const { return edge_alive_[e] != 0; }
    bool color_alive(ColorId c) const { return color_alive_[c] != 0; }

    std::size_t degree(VertexId v) const { return inc_[v].size(); }
    std::size_t color_degree(VertexId v, ColorId c) const;
    std::size_t class_size(ColorId c) const { return cls_[c].size(); }

    // Alive edges only; order changes under deletion (swap-remove).
    std::span<const EdgeId> incident(VertexId v) const { return inc_[v]; }
    std::span<const EdgeId> class_edges(ColorId c) const { return cls_[c]; }
    std::span<const EdgeId> alive_edges() const { return all_; }

    // (color, count) pairs for v; entries may have count 0.
    std::span<const std::pair<ColorId, std::uint32_t>> color_counts(VertexId v) const { return cdeg_[v]; }

    std::size_t alive_vertex_count() const { return alive_vertices_; }
    std::size_t alive_edge_count() const { return all_.size(); }
    std::size_t alive_color_count() const { return alive_colors_; }

    void delete_vertex(VertexId v);
    void delete_color_class(ColorId c);
    void delete_edge(EdgeId e);

    // Optional bipartition marking (side A of the saturating algorithm).
    void set_part_a(const std::vector<VertexId>& a);
    bool in_part_a(VertexId v) const { return !part_a_flag_.empty() && part_a_flag_[v] != 0; }
    const std::vector<VertexId>& part_a() const { return part_a_; }

    // Recomputes all indexes from scratch and throws std::logic_error on mismatch.
    void check_invariants() const;

private:
    void kill_edge(EdgeId e);
    static void swap_remove(std::vector<EdgeId>& list, std::vector<std::uint32_t>& pos, EdgeId e);

    std::vector<Edge> edges_;
    std::vector<char> vertex_alive_;
    std::vector<char> edge_alive_;
    std::vector<char> color_alive_;
    std::vector<std::vector<EdgeId>> inc_;
    std::vector<std::vector<EdgeId>> cls_;
    std::vector<EdgeId> all_;
    // positions of each edge in inc_[u], inc_[v], cls_[c], all_
    std::vector<std::uint32_t> pos_u_, pos_v_, pos_c_, pos_all_;
    std::vector<std::vector<std::pair<ColorId, std::uint32_t>>> cdeg_;  // sorted by color
    std::size_t alive_vertices_ = 0;
    std::size_t alive_colors_ = 0;
    std::vector<VertexId> part_a_;
    std::vector<char> part_a_flag_;
};

GraphStats snapshot_stats(const EdgeColoredGraph& g);

// New graph holding the alive edges of g accepted by keep, recolored by recolor.
// Vertex ids are preserved; to_parent maps new edge ids to ids in g.
EdgeColoredGraph alive_subgraph(const EdgeColoredGraph& g, const std::function<bool(EdgeId)>& keep,
                                const std::function<ColorId(ColorId)>& recolor, std::size_t num_colors,
                                std::vector<EdgeId>& to_parent);

struct MatchEntry {
    EdgeId edge;
    ColorId color;
    bool operator==(const MatchEntry&) const = default;
};

struct RainbowMatching {
    std::vector<MatchEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    void add(EdgeId e, ColorId c) { entries.push_back({e, c}); }
    bool operator==(const RainbowMatching&) const = default;
};

enum class ViolationKind { Incidence, Color, ColorMismatch };

struct Violation {
    ViolationKind kind;
    std::size_t first;   // entry index
    std::size_t second;  // entry index (same as first for ColorMismatch)
    std::uint32_t at;    // shared vertex, shared color, or claimed color
};

struct VerifyResult {
    bool ok = true;
    std::vector<Violation> violations;
};

// Checks against the original edge list, so dead edges are fine.
VerifyResult verify_rainbow_matching(const EdgeColoredGraph& g, const RainbowMatching& m);

}  // namespace rnm
