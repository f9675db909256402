#include "rnm/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "rnm/errors.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/rng.hpp"

namespace rnm {

namespace {

constexpr int kGenerationRetries = 100;

std::uint64_t pair_key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct Failed {};

std::size_t target_class_size(const InstanceSpec& spec) {
    double eps = spec.eps;
    if (spec.kind == InstanceKind::RandomThm1 && eps <= 0.0) eps = default_params(spec.q, spec.delta_max).eps;
    return ceil_count((1.0 + eps) * static_cast<double>(spec.q));
}

// Color classes built edge by edge; each class needs `size` edges with color degree
// at most dmax, overall degree at most cap, and no repeated vertex pair.
EdgeColoredGraph gen_thm1(const InstanceSpec& spec, Rng& rng) {
    const std::size_t q = spec.q;
    const std::size_t size = target_class_size(spec);
    const std::size_t m = spec.colors ? spec.colors : q;
    const std::size_t dmax = std::max<std::size_t>(spec.delta_max, 1);
    std::size_t n = spec.vertices;
    if (n == 0) n = std::max<std::size_t>(ceil_count(2.0 * static_cast<double>(m * size) / (0.375 * static_cast<double>(q))), 2 * size / dmax + 2);

    std::vector<std::size_t> deg(n, 0);
    std::vector<std::size_t> cdeg(n, 0);
    std::vector<VertexId> open(n);
    std::iota(open.begin(), open.end(), 0);
    std::vector<std::size_t> open_pos(n);
    std::iota(open_pos.begin(), open_pos.end(), 0);
    auto close = [&](VertexId v) {
        std::size_t i = open_pos[v];
        VertexId last = open.back();
        open[i] = last;
        open_pos[last] = i;
        open.pop_back();
    };
    std::unordered_set<std::uint64_t> used;
    std::vector<Edge> edges;
    edges.reserve(m * size);
    for (ColorId c = 0; c < m; ++c) {
        std::vector<VertexId> touched;
        std::size_t have = 0, tries = 0;
        while (have < size) {
            if (open.size() < 2 || ++tries > 400 * size) throw Failed{};
            VertexId u = open[rng.index(open.size())];
            VertexId v = open[rng.index(open.size())];
            if (u == v || cdeg[u] >= dmax || cdeg[v] >= dmax) continue;
            if (!used.insert(pair_key(u, v)).second) continue;
            edges.push_back({u, v, c});
            ++have;
            for (VertexId w : {u, v}) {
                if (cdeg[w]++ == 0) touched.push_back(w);
                if (++deg[w] == q) close(w);
            }
        }
        for (VertexId w : touched) cdeg[w] = 0;
    }
    return EdgeColoredGraph::build(n, edges, m);
}

// Bipartite: A = 0..q-1 each joined to d random B vertices, proper coloring drawn
// uniformly from the colors still free at both ends.
EdgeColoredGraph gen_thm3(const InstanceSpec& spec, Rng& rng) {
    const std::size_t q = spec.q;
    const std::size_t d = ceil_count((1.0 + spec.eps) * static_cast<double>(q));
    const std::size_t nb = spec.vertices ? spec.vertices : 2 * d;
    const std::size_t palette = spec.colors ? spec.colors : 2 * d;
    if (nb < d) throw Error(ErrorCode::ConfigInvalid, "random-thm3 needs at least (1+eps)q vertices in B");
    const std::size_t n = q + nb;
    std::vector<std::vector<char>> used_at(n, std::vector<char>(palette, 0));
    std::vector<Edge> edges;
    edges.reserve(q * d);
    std::vector<VertexId> bs(nb);
    std::iota(bs.begin(), bs.end(), static_cast<VertexId>(q));
    std::vector<ColorId> free_colors;
    for (VertexId a = 0; a < q; ++a) {
        // partial Fisher-Yates: first d entries become a's neighbours
        for (std::size_t i = 0; i < d; ++i) std::swap(bs[i], bs[i + rng.index(nb - i)]);
        for (std::size_t i = 0; i < d; ++i) {
            VertexId b = bs[i];
            ColorId c = 0;
            bool found = false;
            for (int k = 0; k < 64 && !found; ++k) {
                c = static_cast<ColorId>(rng.index(palette));
                found = !used_at[a][c] && !used_at[b][c];
            }
            if (!found) {
                free_colors.clear();
                for (ColorId x = 0; x < palette; ++x)
                    if (!used_at[a][x] && !used_at[b][x]) free_colors.push_back(x);
                if (free_colors.empty()) throw Failed{};
                c = free_colors[rng.index(free_colors.size())];
            }
            used_at[a][c] = used_at[b][c] = 1;
            edges.push_back({a, b, c});
        }
    }
    std::vector<VertexId> part_a(q);
    std::iota(part_a.begin(), part_a.end(), 0);
    EdgeColoredGraph g = EdgeColoredGraph::build(n, edges, palette);
    g.set_part_a(part_a);
    return g;
}

// ceil(2(1+eps)q) colors, each a random matching of exactly q edges.
EdgeColoredGraph gen_thmq(const InstanceSpec& spec, Rng& rng) {
    const std::size_t q = spec.q;
    const std::size_t k = spec.colors ? spec.colors : ceil_count(2.0 * (1.0 + spec.eps) * static_cast<double>(q));
    const std::size_t n = spec.vertices ? spec.vertices : 8 * q;
    if (n < 2 * q) throw Error(ErrorCode::ConfigInvalid, "random-thmq needs at least 2q vertices");
    std::unordered_set<std::uint64_t> used;
    std::vector<Edge> edges;
    edges.reserve(k * q);
    std::vector<char> busy(n, 0);
    for (ColorId c = 0; c < k; ++c) {
        std::vector<VertexId> touched;
        std::size_t have = 0, tries = 0;
        while (have < q) {
            if (++tries > 400 * q) throw Failed{};
            auto u = static_cast<VertexId>(rng.index(n));
            auto v = static_cast<VertexId>(rng.index(n));
            if (u == v || busy[u] || busy[v]) continue;
            if (!used.insert(pair_key(u, v)).second) continue;
            busy[u] = busy[v] = 1;
            touched.push_back(u);
            touched.push_back(v);
            edges.push_back({u, v, c});
            ++have;
        }
        for (VertexId w : touched) busy[w] = 0;
    }
    return EdgeColoredGraph::build(n, edges, k);
}

}  // namespace

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::CyclicLatin: return "cyclic-latin";
        case InstanceKind::Prop2Counterexample: return "prop2-counterexample";
        case InstanceKind::StarForest: return "star-forest";
        case InstanceKind::K2qm1Tight: return "k2qm1-tight";
        case InstanceKind::RandomThm1: return "random-thm1";
        case InstanceKind::RandomThm3: return "random-thm3";
        case InstanceKind::RandomThmq: return "random-thmq";
    }
    return "unknown";
}

InstanceKind parse_instance_kind(const std::string& name) {
    for (auto k : {InstanceKind::CyclicLatin, InstanceKind::Prop2Counterexample, InstanceKind::StarForest, InstanceKind::K2qm1Tight,
                   InstanceKind::RandomThm1, InstanceKind::RandomThm3, InstanceKind::RandomThmq})
        if (to_string(k) == name) return k;
    throw Error(ErrorCode::ConfigInvalid, "unknown instance kind '" + name + "'");
}

std::size_t ceil_count(double x) {
    if (x <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

EdgeColoredGraph cyclic_latin_coloring(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::ConfigInvalid, "cyclic-latin needs n >= 1");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(n + j), static_cast<ColorId>((i + j) % n)});
    EdgeColoredGraph g = EdgeColoredGraph::build(2 * n, edges, n);
    std::vector<VertexId> a(n);
    std::iota(a.begin(), a.end(), 0);
    g.set_part_a(a);
    return g;
}

EdgeColoredGraph latin_slab(std::size_t q, double eps) {
    const std::size_t m = ceil_count((1.0 + eps) * static_cast<double>(q));
    if (q == 0 || m < q) throw Error(ErrorCode::ConfigInvalid, "latin slab needs q >= 1 and eps >= 0");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < m; ++j)
            edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(q + j), static_cast<ColorId>((i + j) % m)});
    EdgeColoredGraph g = EdgeColoredGraph::build(q + m, edges, m);
    std::vector<VertexId> a(q);
    std::iota(a.begin(), a.end(), 0);
    g.set_part_a(a);
    return g;
}

EdgeColoredGraph prop2_counterexample(std::size_t t) {
    if (t % 2 != 0) throw Error(ErrorCode::OddT, "t=" + std::to_string(t) + " must be even");
    if (t < 2) throw Error(ErrorCode::ConfigInvalid, "t must be at least 2");
    // a_i = i, b_i = t + i
    std::vector<Edge> edges;
    for (std::size_t j = 0; j < t; ++j)
        for (std::size_t a = 0; a < t; ++a)
            edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(t + (a + j) % t), static_cast<ColorId>(j)});
    for (std::size_t i = 0; i < t; i += 2) edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1), static_cast<ColorId>(t)});
    for (std::size_t i = 0; i < t; i += 2)
        edges.push_back({static_cast<VertexId>(t + i), static_cast<VertexId>(t + i + 1), static_cast<ColorId>(t)});
    EdgeColoredGraph g = EdgeColoredGraph::build(2 * t, edges, t + 1);
    std::vector<VertexId> a(t);
    std::iota(a.begin(), a.end(), 0);
    g.set_part_a(a);
    return g;
}

EdgeColoredGraph star_forest(std::size_t q, std::size_t n) {
    if (q < 2 || n < 1) throw Error(ErrorCode::ConfigInvalid, "star forest needs q >= 2 and n >= 1");
    std::vector<Edge> edges;
    for (std::size_t s = 0; s + 1 < q; ++s) {
        auto center = static_cast<VertexId>(s * (n + 1));
        for (std::size_t i = 0; i < n; ++i) edges.push_back({center, static_cast<VertexId>(center + 1 + i), static_cast<ColorId>(i)});
    }
    return EdgeColoredGraph::build((q - 1) * (n + 1), edges, n);
}

EdgeColoredGraph k2qm1_tight(std::size_t q) {
    if (q < 2) throw Error(ErrorCode::ConfigInvalid, "k2qm1 needs q >= 2");
    // Circle method on K_{2q}: vertex 2q-2 is fixed, the other 2q-2 vertices and a
    // phantom rotate. Whoever meets the phantom sits the round out.
    const std::size_t N = 2 * q - 1;
    const auto fixed = static_cast<VertexId>(N - 1);
    const std::size_t phantom = N - 1;  // slot index holding the phantom
    auto slot_vertex = [&](std::size_t s) { return static_cast<VertexId>(s); };
    std::vector<std::vector<std::pair<VertexId, VertexId>>> rounds(N);
    for (std::size_t r = 0; r < N; ++r) {
        if (r != phantom) rounds[r].emplace_back(std::min(fixed, slot_vertex(r)), std::max(fixed, slot_vertex(r)));
        for (std::size_t i = 1; i < q; ++i) {
            std::size_t a = (r + i) % N, b = (r + N - i) % N;
            if (a == phantom || b == phantom) continue;
            VertexId x = slot_vertex(a), y = slot_vertex(b);
            rounds[r].emplace_back(std::min(x, y), std::max(x, y));
        }
    }
    const std::size_t colors = 2 * q - 3;
    std::vector<Edge> edges;
    for (std::size_t r = 0; r < colors; ++r)
        for (auto [x, y] : rounds[r]) edges.push_back({x, y, static_cast<ColorId>(r)});
    std::size_t next = 0;
    for (std::size_t r = colors; r < N; ++r)
        for (auto [x, y] : rounds[r]) {
            if (next < colors) edges.push_back({x, y, static_cast<ColorId>(next)});
            ++next;  // the last leftover edge is dropped
        }
    return EdgeColoredGraph::build(N, edges, colors);
}

EdgeColoredGraph random_instance(const InstanceSpec& spec) {
    if (spec.kind != InstanceKind::RandomThm1 && spec.kind != InstanceKind::RandomThm3 && spec.kind != InstanceKind::RandomThmq)
        throw Error(ErrorCode::ConfigInvalid, "random_instance needs a random-* kind");
    if (spec.q < 1) throw Error(ErrorCode::ConfigInvalid, "q must be positive");
    if (spec.kind != InstanceKind::RandomThm1 && spec.eps <= 0.0) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
    for (int attempt = 0; attempt < kGenerationRetries; ++attempt) {
        Rng rng(spec.seed, Purpose::Generation, static_cast<std::uint64_t>(attempt));
        try {
            EdgeColoredGraph g;
            switch (spec.kind) {
                case InstanceKind::RandomThm1: g = gen_thm1(spec, rng); break;
                case InstanceKind::RandomThm3: g = gen_thm3(spec, rng); break;
                default: g = gen_thmq(spec, rng); break;
            }
            if (check_hypotheses(g, spec).ok) return g;
        } catch (const Failed&) {
        }
    }
    throw Error(ErrorCode::GenerationBudgetExceeded, to_string(spec.kind) + " after " + std::to_string(kGenerationRetries) + " attempts");
}

EdgeColoredGraph make_instance(const InstanceSpec& spec) {
    switch (spec.kind) {
        case InstanceKind::CyclicLatin: return cyclic_latin_coloring(spec.n);
        case InstanceKind::Prop2Counterexample: return prop2_counterexample(spec.t);
        case InstanceKind::StarForest: return star_forest(spec.q, spec.n);
        case InstanceKind::K2qm1Tight: return k2qm1_tight(spec.q);
        default: return random_instance(spec);
    }
}

HypothesisReport check_hypotheses(const EdgeColoredGraph& g, const InstanceSpec& spec) {
    HypothesisReport r;
    auto fail = [&](const std::string& msg) {
        r.ok = false;
        if (!r.detail.empty()) r.detail += "; ";
        r.detail += msg;
    };
    GraphStats st = snapshot_stats(g);
    switch (spec.kind) {
        case InstanceKind::RandomThm1: {
            if (st.max_degree > spec.q) fail("max degree " + std::to_string(st.max_degree) + " > q");
            if (st.min_class < target_class_size(spec)) fail("class smaller than (1+eps)q");
            if (st.max_color_degree > spec.delta_max) fail("color degree above Delta");
            break;
        }
        case InstanceKind::RandomThm3: {
            if (g.part_a().size() != spec.q) fail("|A| != q");
            const std::size_t d = ceil_count((1.0 + spec.eps) * static_cast<double>(spec.q));
            for (VertexId a : g.part_a())
                if (g.degree(a) < d) {
                    fail("A-degree below (1+eps)q at " + std::to_string(a));
                    break;
                }
            for (const Edge& e : g.edges())
                if (g.in_part_a(e.u) == g.in_part_a(e.v)) {
                    fail("edge inside one side");
                    break;
                }
            if (st.max_color_degree > 1) fail("coloring not proper");
            break;
        }
        case InstanceKind::RandomThmq: {
            const std::size_t k = spec.colors ? spec.colors : ceil_count(2.0 * (1.0 + spec.eps) * static_cast<double>(spec.q));
            if (st.alive_colors != k) fail("wrong number of colors");
            if (st.min_class < spec.q) fail("class smaller than q");
            if (st.max_color_degree > 1) fail("coloring not proper");
            break;
        }
        default: break;
    }
    return r;
}

}  // namespace rnm
