#include "rnm/nibble_saturating.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nibble_common.hpp"
#include "rnm/completion.hpp"
#include "rnm/errors.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/rng.hpp"

namespace rnm {

std::size_t SaturatingParams::iterations() const { return detail::horizon(eta, delta); }

std::size_t SaturatingParams::draws() const { return detail::size_target(delta * q); }

void SaturatingParams::finalize() {
    gamma = 1.0 / (1.0 + eps);
    warnings.clear();
    if (!(eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
    if (!(delta > 0.0) || delta >= 1.0) throw Error(ErrorCode::ConfigInvalid, "delta must lie in (0,1)");
    if (!(eta > 0.0) || eta >= 1.0) throw Error(ErrorCode::ConfigInvalid, "eta must lie in (0,1)");
    if (eps >= 0.1) warnings.push_back("eps >= 1/10 is outside the proven range");
}

ScheduleInputs SaturatingParams::schedule_inputs() const { return {CurveParams::thm3(eps, eta), q, delta, 1.0}; }

SaturatingParams default_saturating_params(double q, double eps) {
    SaturatingParams p;
    p.q = q;
    p.eps = eps;
    p.eta = 1.0 - eps * eps * eps;
    p.delta = q > 3.0 ? 1.0 / std::log(q) : 0.5;
    p.finalize();
    return p;
}

double saturating_deletion_prob(std::size_t t, const SaturatingParams& p, double alpha) {
    CurvePoint c = ideal_unchecked(CurveParams::thm3(p.eps, p.eta), static_cast<double>(t) * p.delta);
    return p.gamma * p.delta * c.g * (1.0 + alpha) / (c.s * (1.0 - alpha));
}

namespace {

void set_targets(SaturatingState& st, const SaturatingParams& p, std::size_t t) {
    IdealValues iv = ideal_values(p.schedule_inputs(), t);
    st.s_t = detail::size_target((1.0 - st.schedule.alpha[t]) * iv.s);
    st.d_t = (1.0 + st.schedule.alpha[t]) * iv.d;
}

void truncate_a(SaturatingState& st) {
    EdgeColoredGraph& g = st.graph;
    for (VertexId a : g.part_a()) {
        if (!g.vertex_alive(a) || g.degree(a) <= st.s_t) continue;
        std::vector<EdgeId> es(g.incident(a).begin(), g.incident(a).end());
        detail::truncate_lowest(g, std::move(es), st.s_t);
    }
}

void fill_record(TrajectoryRecord& r, const SaturatingState& st, const SaturatingParams& p, std::size_t t) {
    const EdgeColoredGraph& g = st.graph;
    IdealValues iv = ideal_values(p.schedule_inputs(), t);
    r.t = t;
    r.x = static_cast<double>(t) * p.delta;
    bool first = true;
    std::size_t below = 0;
    for (VertexId a : g.part_a()) {
        if (!g.vertex_alive(a)) continue;
        auto d = static_cast<double>(g.degree(a));
        r.size_min = first ? d : std::min(r.size_min, d);
        r.size_max = first ? d : std::max(r.size_max, d);
        first = false;
        if (g.degree(a) < st.s_t) ++below;
    }
    std::size_t above = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!g.vertex_alive(v) || g.in_part_a(v)) continue;
        r.degree_max = std::max(r.degree_max, static_cast<double>(g.degree(v)));
        if (static_cast<double>(g.degree(v)) > st.d_t + 1e-9) ++above;
    }
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c)) continue;
        r.degree2_max = std::max(r.degree2_max, static_cast<double>(g.class_size(c)));
        if (static_cast<double>(g.class_size(c)) > st.d_t + 1e-9) ++above;
    }
    r.matched = st.partial.size();
    r.alive_colors = g.alive_color_count();
    r.alive_vertices = g.alive_vertex_count();
    r.s_tilde = iv.s;
    r.d_tilde = iv.d;
    r.size_target = static_cast<double>(st.s_t);
    r.alpha = r.beta = st.schedule.alpha[t];
    r.a = r.alpha < 1.0 ? saturating_deletion_prob(t, p, r.alpha) : 1.0;
    r.size_violations = below;
    r.degree_violations = above;
    r.attempts = 1;
}

}  // namespace

SaturatingState init_saturating_state(const EdgeColoredGraph& g, const SaturatingParams& p) {
    if (g.part_a().empty()) throw Error(ErrorCode::ConfigInvalid, "saturating solver needs side A marked");
    SaturatingState st;
    st.graph = g;
    st.schedule = envelope_schedule(p.schedule_inputs(), p.iterations(), p.envelope);
    const std::size_t d0 = detail::size_target((1.0 + p.eps) * p.q);
    for (VertexId a : st.graph.part_a()) {
        if (st.graph.degree(a) <= d0) continue;
        std::vector<EdgeId> es(st.graph.incident(a).begin(), st.graph.incident(a).end());
        std::sort(es.begin(), es.end(), std::greater<>());
        for (std::size_t i = 0; i < es.size() - d0; ++i) st.graph.delete_edge(es[i]);
    }
    set_targets(st, p, 0);
    truncate_a(st);
    TrajectoryRecord r;
    fill_record(r, st, p, 0);
    st.trajectory.push_back(r);
    return st;
}

void iterate(SaturatingState& st, const SaturatingParams& p) {
    EdgeColoredGraph& g = st.graph;
    const std::size_t t = st.t;
    const double alpha = st.schedule.alpha[t];
    if (!(alpha < 1.0)) throw Error(ErrorCode::DenominatorNonpositive, "alpha_t >= 1 at t=" + std::to_string(t));
    const double a = saturating_deletion_prob(t, p, alpha);
    Rng draw(p.seed, Purpose::EdgeDraw, t);
    Rng res(p.seed, Purpose::Residual, t);
    Rng cres(p.seed, Purpose::Colors, t);
    const auto m = static_cast<double>(p.draws());

    // Step 1
    std::vector<EdgeId> picked;
    const std::size_t E = g.alive_edge_count();
    if (E > 0)
        for (std::size_t i = 0; i < p.draws(); ++i) picked.push_back(g.alive_edges()[draw.index(E)]);

    const std::size_t n = g.num_vertices();
    std::vector<double> pv(n, 0.0), pc(g.num_colors(), 0.0);
    if (E > 0) {
        for (VertexId v = 0; v < n; ++v)
            if (g.vertex_alive(v) && !g.in_part_a(v))
                pv[v] = detail::hit_probability(static_cast<double>(g.degree(v)) / static_cast<double>(E), m);
        for (ColorId c = 0; c < g.num_colors(); ++c)
            if (g.color_alive(c)) pc[c] = detail::hit_probability(static_cast<double>(g.class_size(c)) / static_cast<double>(E), m);
    }

    // Step 2: any earlier draw blocks, added or not
    std::vector<char> seen_v(n, 0), seen_c(g.num_colors(), 0);
    std::vector<EdgeId> added;
    for (EdgeId e : picked) {
        const Edge& ed = g.edge(e);
        if (!seen_v[ed.u] && !seen_v[ed.v] && !seen_c[ed.c]) added.push_back(e);
        seen_v[ed.u] = seen_v[ed.v] = 1;
        seen_c[ed.c] = 1;
    }

    // Step 3
    for (EdgeId e : added) {
        const Edge& ed = g.edge(e);
        st.partial.add(e, ed.c);
        VertexId av = g.in_part_a(ed.u) ? ed.u : ed.v;
        g.delete_vertex(av);
    }
    std::vector<char> hit(n, 0);
    for (EdgeId e : picked) {
        const Edge& ed = g.edge(e);
        VertexId bv = g.in_part_a(ed.u) ? ed.v : ed.u;
        hit[bv] = 1;
        if (g.vertex_alive(bv)) g.delete_vertex(bv);
    }

    // Step 4
    std::size_t clamps = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!g.vertex_alive(v) || g.in_part_a(v) || hit[v]) continue;
        bool clamped = false;
        double pr = step_residual_prob(pv[v], a, &clamped);
        clamps += clamped ? 1 : 0;
        if (res.bernoulli(pr)) g.delete_vertex(v);
    }

    // Steps 5-6
    std::vector<char> chit(g.num_colors(), 0);
    for (EdgeId e : picked) {
        ColorId c = g.edge(e).c;
        chit[c] = 1;
        if (g.color_alive(c)) g.delete_color_class(c);
    }
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c) || chit[c]) continue;
        bool clamped = false;
        double pr = step_residual_prob(pc[c], a, &clamped);
        clamps += clamped ? 1 : 0;
        if (cres.bernoulli(pr)) g.delete_color_class(c);
    }

    // Step 7
    st.t = t + 1;
    set_targets(st, p, st.t);
    truncate_a(st);

    std::vector<char> matched(n, 0);
    for (const auto& en : st.partial.entries) {
        const Edge& ed = g.edge(en.edge);
        matched[ed.u] = matched[ed.v] = 1;
    }
    for (VertexId av : g.part_a())
        if (!g.vertex_alive(av) && !matched[av])
            throw Error(ErrorCode::ADeadUnmatched, "A-vertex " + std::to_string(av) + " died unmatched at t=" + std::to_string(st.t));

    TrajectoryRecord r;
    fill_record(r, st, p, st.t);
    r.discards = picked.size() - added.size();
    r.clamps = clamps;
    st.clamps += clamps;
    st.discards += r.discards;
    st.trajectory.push_back(r);
}

RunReport run_saturating(const EdgeColoredGraph& g, const SaturatingParams& p) {
    RunReport rep;
    rep.algorithm = "thm3";
    rep.seed = p.seed;
    rep.curve = CurveParams::thm3(p.eps, p.eta);
    rep.params = {{"q", p.q},     {"eps", p.eps}, {"delta", p.delta}, {"eta", p.eta}, {"draws", static_cast<double>(p.draws())},
                  {"iterations", static_cast<double>(p.iterations())}};
    Diagnostics& diag = rep.diagnostics;
    diag.path = "nibble";
    diag.warnings = p.warnings;
    diag.discard_bound = 3.0 * p.delta * p.q * std::log(1.0 / (1.0 - p.eta));
    rep.target = g.part_a().size();
    if (static_cast<double>(g.part_a().size()) != p.q) diag.warnings.push_back("|A| differs from q");
    const std::size_t d0 = detail::size_target((1.0 + p.eps) * p.q);
    for (VertexId a : g.part_a())
        if (g.degree(a) < d0) {
            diag.warnings.push_back("hypothesis: some A-vertex has degree below (1+eps)q");
            break;
        }
    if (snapshot_stats(g).max_color_degree > 1) diag.warnings.push_back("hypothesis: coloring is not proper");

    SaturatingState st = init_saturating_state(g, p);
    const std::size_t T = p.iterations();
    try {
        while (st.t < T) iterate(st, p);
    } catch (const Error& e) {
        rep.error = e.code();
        rep.error_message = e.what();
    }
    diag.clamps = st.clamps;
    diag.discards = st.discards;
    for (const auto& r : st.trajectory) {
        diag.size_violations += r.size_violations;
        diag.degree_violations += r.degree_violations;
    }
    rep.trajectory = st.trajectory;
    rep.matching = st.partial;
    if (rep.error && *rep.error == ErrorCode::ADeadUnmatched) {
        rep.outcome = Outcome::Failure;
        rep.verified = verify_rainbow_matching(g, rep.matching).ok;
        return rep;
    }

    if (!rep.error) {
        std::vector<VertexId> rest;
        for (VertexId a : st.graph.part_a())
            if (st.graph.vertex_alive(a)) rest.push_back(a);
        std::stable_sort(rest.begin(), rest.end(),
                         [&](VertexId x, VertexId y) { return st.graph.degree(x) < st.graph.degree(y); });
        diag.path = "nibble+greedy";
        // Greedy one vertex at a time so a stuck vertex still leaves the rest attempted.
        RainbowMatching m = st.partial;
        std::size_t stuck = 0;
        VertexId first_stuck = 0;
        for (VertexId a : rest) {
            try {
                m = greedy_complete_vertices(st.graph, m, {a});
            } catch (const Error&) {
                if (stuck++ == 0) first_stuck = a;
            }
        }
        rep.matching = m;
        if (stuck > 0) {
            rep.error = ErrorCode::GreedyStuck;
            rep.error_message = "GreedyStuck: " + std::to_string(stuck) + " A-vertices blocked, first " + std::to_string(first_stuck);
        }
    }

    VerifyResult vr = verify_rainbow_matching(g, rep.matching);
    rep.verified = vr.ok;
    if (!vr.ok) {
        rep.outcome = Outcome::Failure;
        rep.error = ErrorCode::InvariantViolation;
        rep.error_message = "internal: produced matching failed verification";
        return rep;
    }
    rep.outcome = rep.matching.size() == rep.target ? Outcome::Full : (rep.matching.empty() ? Outcome::Failure : Outcome::Partial);
    return rep;
}

}  // namespace rnm
