#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nibble_common.hpp"
#include "rnm/completion.hpp"
#include "rnm/errors.hpp"
#include "rnm/nibble_color_target.hpp"
#include "rnm/nibble_saturating.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/rng.hpp"

namespace rnm {

namespace {

struct Builder {
    const EdgeColoredGraph& g;
    std::vector<char> used_v, used_c;
    RainbowMatching m;

    explicit Builder(const EdgeColoredGraph& graph)
        : g(graph), used_v(graph.num_vertices(), 0), used_c(graph.num_colors(), 0) {}

    bool fits(EdgeId e) const {
        const Edge& ed = g.edge(e);
        return !used_v[ed.u] && !used_v[ed.v] && !used_c[ed.c];
    }
    void take(EdgeId e) {
        const Edge& ed = g.edge(e);
        used_v[ed.u] = used_v[ed.v] = used_c[ed.c] = 1;
        m.add(e, ed.c);
    }
    // Lowest-id alive edge at v that fits.
    bool add_at(VertexId v) {
        if (!g.vertex_alive(v) || used_v[v]) return false;
        EdgeId best = 0;
        bool found = false;
        for (EdgeId e : g.incident(v))
            if (fits(e) && (!found || e < best)) {
                best = e;
                found = true;
            }
        if (found) take(best);
        return found;
    }
    void fill_any(std::size_t q) {
        std::vector<EdgeId> es(g.alive_edges().begin(), g.alive_edges().end());
        std::sort(es.begin(), es.end());
        for (EdgeId e : es) {
            if (m.size() >= q) break;
            if (fits(e)) take(e);
        }
    }
};

std::vector<ColorId> nonempty_colors(const EdgeColoredGraph& g) {
    std::vector<ColorId> cs;
    for (ColorId c = 0; c < g.num_colors(); ++c)
        if (g.color_alive(c) && g.class_size(c) > 0) cs.push_back(c);
    return cs;
}

void trim(RainbowMatching& m, std::size_t q) {
    if (m.size() > q) m.entries.resize(q);
}

// Greedy plus the exchange at a matching edge with three doubled colors.
RainbowMatching augment(const EdgeColoredGraph& g, std::size_t q) {
    std::vector<ColorId> colors = nonempty_colors(g);
    std::vector<std::vector<EdgeId>> cls(g.num_colors());
    for (ColorId c : colors) {
        cls[c].assign(g.class_edges(c).begin(), g.class_edges(c).end());
        std::sort(cls[c].begin(), cls[c].end());
    }
    Builder b(g);
    while (b.m.size() < q) {
        bool grown = false;
        for (ColorId c : colors) {
            if (b.used_c[c]) continue;
            for (EdgeId e : cls[c])
                if (b.fits(e)) {
                    b.take(e);
                    grown = true;
                    break;
                }
            if (grown) break;
        }
        if (grown) continue;

        for (std::size_t idx = 0; idx < b.m.size() && !grown; ++idx) {
            const Edge me = g.edge(b.m.entries[idx].edge);
            auto free_end = [&](EdgeId e, VertexId at) {
                const Edge& ed = g.edge(e);
                VertexId w = ed.u == at ? ed.v : ed.u;
                return !b.used_v[w] && !b.used_c[ed.c];
            };
            std::map<ColorId, EdgeId> at_x;
            for (EdgeId e : g.incident(me.u))
                if (free_end(e, me.u)) at_x[g.edge(e).c] = e;
            std::map<ColorId, EdgeId> at_y;
            for (EdgeId e : g.incident(me.v))
                if (free_end(e, me.v) && at_x.count(g.edge(e).c)) at_y[g.edge(e).c] = e;
            if (at_y.size() < 3) continue;
            std::vector<EdgeId> six;
            for (auto it = at_y.begin(); six.size() < 6; ++it) {
                six.push_back(at_x[it->first]);
                six.push_back(it->second);
            }
            for (std::size_t i = 0; i < 6 && !grown; ++i)
                for (std::size_t j = i + 1; j < 6 && !grown; ++j) {
                    const Edge& a = g.edge(six[i]);
                    const Edge& c = g.edge(six[j]);
                    if (a.c == c.c || a.u == c.u || a.u == c.v || a.v == c.u || a.v == c.v) continue;
                    b.used_c[me.c] = 0;
                    b.m.entries.erase(b.m.entries.begin() + static_cast<std::ptrdiff_t>(idx));
                    b.take(six[i]);
                    b.take(six[j]);
                    grown = true;
                }
        }
        if (!grown)
            throw Error(ErrorCode::AugmentStuck, "no free edge and no exchange at size " + std::to_string(b.m.size()));
    }
    return b.m;
}

EdgeColoredGraph without_vertices(const EdgeColoredGraph& g, const std::vector<VertexId>& vs) {
    EdgeColoredGraph r = g;
    for (VertexId v : vs)
        if (r.vertex_alive(v)) r.delete_vertex(v);
    return r;
}

// Re-adds the removed top vertices from the lowest degree upwards, then fills up.
RainbowMatching finish_with_top(const EdgeColoredGraph& g, const RainbowMatching& inner, const std::vector<VertexId>& top,
                                std::size_t q) {
    Builder b(g);
    for (const auto& en : inner.entries) b.take(en.edge);
    for (auto it = top.rbegin(); it != top.rend() && b.m.size() < q; ++it) b.add_at(*it);
    if (b.m.size() < q) b.fill_any(q);
    if (b.m.size() < q)
        throw Error(ErrorCode::AugmentStuck, "greedy re-add reached only " + std::to_string(b.m.size()) + " of " + std::to_string(q));
    trim(b.m, q);
    return b.m;
}

}  // namespace

RainbowMatching weaker_bound_solver(const EdgeColoredGraph& g, std::size_t q, std::uint64_t seed, std::vector<std::string>* log) {
    auto note = [&](const std::string& s) {
        if (log) log->push_back(s);
    };
    if (q == 0) return {};
    if (snapshot_stats(g).max_color_degree > 1) throw Error(ErrorCode::AugmentStuck, "coloring is not proper");
    const std::size_t k_colors = nonempty_colors(g).size();
    if (k_colors >= 2 * q * q) {
        note("weaker-bound: augmentation branch, " + std::to_string(k_colors) + " colors");
        RainbowMatching m = augment(g, q);
        trim(m, q);
        return m;
    }
    if (k_colors < 4 * q)
        throw Error(ErrorCode::AugmentStuck, std::to_string(k_colors) + " colors, need at least 4q=" + std::to_string(4 * q));

    std::vector<VertexId> order;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (g.vertex_alive(v)) order.push_back(v);
    std::stable_sort(order.begin(), order.end(), [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });

    // 1-based rank k with d_k <= 3(q-k)
    std::size_t k = 0;
    for (std::size_t i = 1; i <= order.size() && i < q; ++i)
        if (g.degree(order[i - 1]) <= 3 * (q - i)) {
            k = i;
            break;
        }
    const auto q_inner = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(q))));
    const std::size_t r = q > q_inner ? q - q_inner : 0;

    if (k == 0 || k > r) {
        note("weaker-bound: case 1, k=" + std::to_string(k) + ", inner q'=" + std::to_string(q_inner));
        std::vector<VertexId> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(r, order.size())));
        EdgeColoredGraph residue = without_vertices(g, top);
        RainbowMatching inner = augment(residue, q - r);
        return finish_with_top(g, inner, top, q);
    }

    note("weaker-bound: case 2, k=" + std::to_string(k));
    std::vector<VertexId> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    EdgeColoredGraph residue = without_vertices(g, top);
    std::vector<ColorId> colors = nonempty_colors(residue);
    const std::size_t groups = colors.size() / 4;
    std::vector<ColorId> group_of(g.num_colors(), static_cast<ColorId>(-1));
    for (std::size_t i = 0; i < groups * 4; ++i) group_of[colors[i]] = static_cast<ColorId>(i / 4);
    std::vector<EdgeId> to_parent;
    EdgeColoredGraph merged = alive_subgraph(
        residue, [&](EdgeId e) { return group_of[residue.edge(e).c] != static_cast<ColorId>(-1); },
        [&](ColorId c) { return group_of[c]; }, groups, to_parent);

    GraphStats ms = snapshot_stats(merged);
    const double qn = static_cast<double>(std::max<std::size_t>(ms.max_degree, 1));
    const double eps_n = static_cast<double>(ms.min_class) / qn - 1.0;
    if (!(eps_n > 0.0))
        throw Error(ErrorCode::AugmentStuck, "merged classes (" + std::to_string(ms.min_class) + ") not larger than max degree " +
                                                 std::to_string(ms.max_degree));
    UniformParams up;
    up.q = qn;
    up.Delta = 4;
    up.eps = eps_n;
    up.delta = 0.05;
    up.eta = 0.6;
    up.retries = 20;
    up.seed = seed;
    up.envelope.kind = EnvelopeKind::Zero;
    up.finalize();
    RunReport inner_rep = run_uniform(merged, up);
    note("weaker-bound: merged nibble " + std::string(to_string(inner_rep.outcome)) + " with " +
         std::to_string(inner_rep.matching.size()) + " edges");
    RainbowMatching inner;
    for (const auto& en : inner_rep.matching.entries) {
        EdgeId pe = to_parent[en.edge];
        inner.add(pe, g.edge(pe).c);
    }
    return finish_with_top(g, inner, top, q);
}

Preprocessed preprocess(const EdgeColoredGraph& g, const ColorTargetParams& p) {
    Preprocessed out;
    const double bound = 2.0 * (1.0 + p.theta) * p.q;
    std::vector<VertexId> heavy;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (g.vertex_alive(v) && static_cast<double>(g.degree(v)) > bound) heavy.push_back(v);
    const double cap = (1.0 - p.theta) * p.q;
    if (static_cast<double>(heavy.size()) <= cap) {
        out.heavy = heavy;
        out.log.push_back("preprocess: " + std::to_string(heavy.size()) + " heavy vertices, pass-through");
        return out;
    }

    std::stable_sort(heavy.begin(), heavy.end(), [&](VertexId a, VertexId b) { return g.degree(a) > g.degree(b); });
    const std::size_t q = detail::size_target(p.q);
    const std::size_t a_size = std::min(detail::size_target(cap), q);
    std::vector<VertexId> A(heavy.begin(), heavy.begin() + static_cast<std::ptrdiff_t>(a_size));
    std::sort(A.begin(), A.end());
    out.heavy = A;
    out.log.push_back("preprocess: " + std::to_string(heavy.size()) + " heavy vertices, reduction with |A|=" + std::to_string(a_size));

    RainbowMatching T;
    try {
        EdgeColoredGraph residue = without_vertices(g, A);
        T = weaker_bound_solver(residue, q - a_size, derive_seed(p.seed, Purpose::Solver, 1), &out.log);
    } catch (const Error& e) {
        throw Error(ErrorCode::ReductionFailed, std::string("weaker-bound solver: ") + e.what());
    }

    EdgeColoredGraph rest = g;
    for (const auto& en : T.entries) {
        const Edge& ed = g.edge(en.edge);
        if (rest.vertex_alive(ed.u)) rest.delete_vertex(ed.u);
        if (rest.vertex_alive(ed.v)) rest.delete_vertex(ed.v);
        if (rest.color_alive(ed.c)) rest.delete_color_class(ed.c);
    }
    std::vector<char> in_a(g.num_vertices(), 0);
    for (VertexId v : A) in_a[v] = 1;
    std::vector<EdgeId> to_parent;
    EdgeColoredGraph bip = alive_subgraph(
        rest, [&](EdgeId e) { return in_a[rest.edge(e).u] != in_a[rest.edge(e).v]; }, [](ColorId c) { return c; },
        g.num_colors(), to_parent);
    bip.set_part_a(A);

    std::size_t min_deg = SIZE_MAX;
    for (VertexId v : A) min_deg = std::min(min_deg, bip.degree(v));
    const double eps_s = std::min(p.eps, static_cast<double>(min_deg) / static_cast<double>(a_size) - 1.0);
    if (!(eps_s > 0.0))
        throw Error(ErrorCode::ReductionFailed, "saturating step: A-degree " + std::to_string(min_deg) + " not above |A|");
    SaturatingParams sp;
    sp.q = static_cast<double>(a_size);
    sp.eps = eps_s;
    sp.eta = 1.0 - eps_s * eps_s * eps_s;
    sp.delta = a_size > 3 ? 1.0 / std::log(static_cast<double>(a_size)) : 0.5;
    sp.seed = derive_seed(p.seed, Purpose::Solver, 2);
    sp.envelope = p.envelope;
    try {
        sp.finalize();
    } catch (const Error& e) {
        throw Error(ErrorCode::ReductionFailed, std::string("saturating step: ") + e.what());
    }
    RunReport sr = run_saturating(bip, sp);
    out.log.push_back("preprocess: saturating step " + std::string(to_string(sr.outcome)) + " " +
                      std::to_string(sr.matching.size()) + "/" + std::to_string(a_size));
    if (sr.outcome != Outcome::Full)
        throw Error(ErrorCode::ReductionFailed, "saturating step covered " + std::to_string(sr.matching.size()) + " of " +
                                                    std::to_string(a_size) + (sr.error_message.empty() ? "" : ": " + sr.error_message));

    RainbowMatching m = T;
    for (const auto& en : sr.matching.entries) {
        EdgeId pe = to_parent[en.edge];
        m.add(pe, g.edge(pe).c);
    }
    if (m.size() > q) m.entries.resize(q);
    if (!verify_rainbow_matching(g, m).ok) throw Error(ErrorCode::ReductionFailed, "combined matching failed verification");
    out.direct = m;
    return out;
}

}  // namespace rnm
