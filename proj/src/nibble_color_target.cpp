#include "rnm/nibble_color_target.hpp"

#include <algorithm>
#include <cmath>

#include "nibble_common.hpp"
#include "rnm/errors.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/rng.hpp"

namespace rnm {

std::size_t ColorTargetParams::iterations() const { return detail::horizon(eta, delta); }

std::size_t ColorTargetParams::draws() const { return detail::size_target(2.0 * delta * (1.0 + eps) * q); }

void ColorTargetParams::finalize() {
    warnings.clear();
    if (!(eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "eps must be positive");
    if (!(q >= 1.0)) throw Error(ErrorCode::ConfigInvalid, "q must be at least 1");
    if (!(delta > 0.0) || delta >= 1.0) throw Error(ErrorCode::ConfigInvalid, "delta must lie in (0,1)");
    theta = eps / 2.0;
    gamma = (1.0 + theta) / (1.0 + eps);
    M = ((1.0 - theta) + (1.0 + theta) * gamma) / gamma;
    if (!(M > 2.0)) throw Error(ErrorCode::ConfigInvalid, "M must exceed 2");
    const double lo = 1.0 / (2.0 * (1.0 + eps));
    const double hi = lo / (1.0 - theta + theta * gamma);
    if (!(eta > lo) || !(eta < hi))
        throw Error(ErrorCode::ConfigInvalid, "eta must lie in (" + std::to_string(lo) + ", " + std::to_string(hi) + ")");
    if (eps >= 0.1) warnings.push_back("eps >= 1/10 is outside the proven range");
}

ScheduleInputs ColorTargetParams::schedule_inputs() const { return {CurveParams::thmq(eps, eta), q, delta, 1.0}; }

ColorTargetParams default_color_target_params(double q, double eps) {
    ColorTargetParams p;
    p.q = q;
    p.eps = eps;
    p.eta = CurveParams::thmq_default_eta(eps);
    p.delta = q > 3.0 ? 1.0 / std::log(q) : 0.5;
    p.finalize();
    return p;
}

DeletionProbs deletion_probs(std::size_t t, const ColorTargetParams& p, double alpha, double beta) {
    CurvePoint c = ideal_unchecked(CurveParams::thmq(p.eps, p.eta), static_cast<double>(t) * p.delta);
    const double common = p.delta * c.g * (1.0 + beta) / (c.s * (1.0 - alpha));
    return {2.0 * (1.0 + p.eps) * common, 2.0 * (1.0 + p.theta) * common};
}

double max_a_fraction(const EdgeColoredGraph& g, std::size_t* violations, double bound) {
    double worst = 0.0;
    std::size_t bad = 0;
    std::vector<std::uint32_t> stamp(g.num_vertices(), UINT32_MAX);
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c) || g.class_size(c) == 0) continue;
        std::size_t all = 0, in_a = 0;
        for (EdgeId e : g.class_edges(c))
            for (VertexId w : {g.edge(e).u, g.edge(e).v})
                if (stamp[w] != c) {
                    stamp[w] = c;
                    ++all;
                    in_a += g.in_part_a(w) ? 1 : 0;
                }
        double f = static_cast<double>(in_a) / static_cast<double>(all);
        worst = std::max(worst, f);
        if (f > bound + 1e-12) ++bad;
    }
    if (violations) *violations = bad;
    return worst;
}

namespace {

void set_targets(ColorTargetState& st, const ColorTargetParams& p, std::size_t t) {
    IdealValues iv = ideal_values(p.schedule_inputs(), t);
    st.s_t = detail::size_target((1.0 - st.schedule.alpha[t]) * iv.s);
    st.d_t = (1.0 + st.schedule.beta[t]) * iv.d;
    st.d2_t = (1.0 + st.schedule.beta[t]) * iv.d2;
}

// A-incident edges go first, then the rest, lowest id first within each group.
void truncate_classes(ColorTargetState& st) {
    EdgeColoredGraph& g = st.graph;
    std::vector<EdgeId> with_a, rest;
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c) || g.class_size(c) <= st.s_t) continue;
        std::size_t drop = g.class_size(c) - st.s_t;
        with_a.clear();
        rest.clear();
        for (EdgeId e : g.class_edges(c)) {
            const Edge& ed = g.edge(e);
            (g.in_part_a(ed.u) || g.in_part_a(ed.v) ? with_a : rest).push_back(e);
        }
        std::sort(with_a.begin(), with_a.end());
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < with_a.size() && drop > 0; ++i, --drop) g.delete_edge(with_a[i]);
        for (std::size_t i = 0; i < rest.size() && drop > 0; ++i, --drop) g.delete_edge(rest[i]);
    }
}

void fill_record(TrajectoryRecord& r, const ColorTargetState& st, const ColorTargetParams& p, std::size_t t) {
    const EdgeColoredGraph& g = st.graph;
    IdealValues iv = ideal_values(p.schedule_inputs(), t);
    r.t = t;
    r.x = static_cast<double>(t) * p.delta;
    bool first = true;
    std::size_t below = 0;
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c)) continue;
        auto s = static_cast<double>(g.class_size(c));
        r.size_min = first ? s : std::min(r.size_min, s);
        r.size_max = first ? s : std::max(r.size_max, s);
        first = false;
        if (g.class_size(c) < st.s_t) ++below;
    }
    std::size_t above = 0;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!g.vertex_alive(v)) continue;
        auto d = static_cast<double>(g.degree(v));
        if (g.in_part_a(v)) {
            r.degree_max = std::max(r.degree_max, d);
            if (d > st.d_t + 1e-9) ++above;
        } else {
            r.degree2_max = std::max(r.degree2_max, d);
            if (d > st.d2_t + 1e-9) ++above;
        }
    }
    std::size_t frac_bad = 0;
    r.a_fraction_max = max_a_fraction(g, &frac_bad, (1.0 - p.theta) / 2.0);
    r.matched = st.partial.size();
    r.alive_colors = g.alive_color_count();
    r.alive_vertices = g.alive_vertex_count();
    r.s_tilde = iv.s;
    r.d_tilde = iv.d;
    r.d2_tilde = iv.d2;
    r.size_target = static_cast<double>(st.s_t);
    r.alpha = st.schedule.alpha[t];
    r.beta = st.schedule.beta[t];
    if (r.alpha < 1.0) {
        DeletionProbs dp = deletion_probs(t, p, r.alpha, r.beta);
        r.a = dp.a;
        r.b = dp.b;
    }
    r.theta = p.theta;
    r.size_violations = below;
    r.degree_violations = above;
    r.a_fraction_violations = frac_bad;
}

void iterate_with_retry(ColorTargetState& st, const ColorTargetParams& p, Diagnostics& diag) {
    const std::size_t attempts = std::max<std::size_t>(p.retries, 1);
    ColorTargetState best;
    std::size_t best_bad = 0;
    bool have_best = false;
    for (std::size_t k = 0; k < attempts; ++k) {
        ColorTargetState trial = st;
        iterate(trial, p, k);
        TrajectoryRecord& r = trial.trajectory.back();
        std::size_t bad = r.size_violations + r.degree_violations + r.a_fraction_violations;
        r.attempts = k + 1;
        if (bad == 0 && p.retries > 0) {
            diag.retries += k;
            st = std::move(trial);
            return;
        }
        if (!have_best || bad < best_bad) {
            best = std::move(trial);
            best_bad = bad;
            have_best = true;
        }
    }
    diag.retries += attempts - 1;
    ++diag.degraded_iterations;
    best.trajectory.back().degraded = true;
    best.trajectory.back().attempts = attempts;
    st = std::move(best);
}

}  // namespace

ColorTargetState init_color_target_state(const EdgeColoredGraph& g, const std::vector<VertexId>& heavy,
                                         const ColorTargetParams& p) {
    ColorTargetState st;
    st.graph = g;
    st.graph.set_part_a(heavy);
    st.schedule = envelope_schedule(p.schedule_inputs(), p.iterations(), p.envelope);
    set_targets(st, p, 0);
    truncate_classes(st);
    TrajectoryRecord r;
    fill_record(r, st, p, 0);
    r.attempts = 1;
    st.trajectory.push_back(r);
    return st;
}

void iterate(ColorTargetState& st, const ColorTargetParams& p, std::uint64_t attempt) {
    EdgeColoredGraph& g = st.graph;
    const std::size_t t = st.t;
    const double alpha = st.schedule.alpha[t], beta = st.schedule.beta[t];
    if (!(alpha < 1.0)) throw Error(ErrorCode::DenominatorNonpositive, "alpha_t >= 1 at t=" + std::to_string(t));
    const DeletionProbs dp = deletion_probs(t, p, alpha, beta);
    Rng draw(p.seed, Purpose::EdgeDraw, t, attempt);
    Rng res(p.seed, Purpose::Residual, t, attempt);
    const std::size_t m = p.draws();

    // Step 1
    std::vector<EdgeId> picked;
    const std::size_t E = g.alive_edge_count();
    if (E > 0)
        for (std::size_t i = 0; i < m; ++i) picked.push_back(g.alive_edges()[draw.index(E)]);

    const std::size_t n = g.num_vertices();
    std::vector<double> p_prime(n, 0.0);
    if (E > 0)
        for (VertexId v = 0; v < n; ++v)
            if (g.vertex_alive(v))
                p_prime[v] = detail::hit_probability(static_cast<double>(g.degree(v)) / static_cast<double>(E), static_cast<double>(m));

    // Step 2
    for (EdgeId e : picked)
        for (VertexId w : {g.edge(e).u, g.edge(e).v})
            if (g.vertex_alive(w)) g.delete_vertex(w);

    // Step 3
    std::size_t clamps = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!g.vertex_alive(v)) continue;
        bool clamped = false;
        double pr = step_residual_prob(p_prime[v], g.in_part_a(v) ? dp.a : dp.b, &clamped);
        clamps += clamped ? 1 : 0;
        if (res.bernoulli(pr)) g.delete_vertex(v);
    }

    // Steps 4-5: any earlier draw blocks
    std::vector<char> seen_v(n, 0), seen_c(g.num_colors(), 0);
    std::size_t added = 0;
    for (EdgeId e : picked) {
        const Edge& ed = g.edge(e);
        if (!seen_v[ed.u] && !seen_v[ed.v] && !seen_c[ed.c]) {
            st.partial.add(e, ed.c);
            if (g.color_alive(ed.c)) g.delete_color_class(ed.c);
            ++added;
        }
        seen_v[ed.u] = seen_v[ed.v] = 1;
        seen_c[ed.c] = 1;
    }

    // Step 6
    st.t = t + 1;
    set_targets(st, p, st.t);
    truncate_classes(st);

    TrajectoryRecord r;
    fill_record(r, st, p, st.t);
    r.discards = picked.size() - added;
    r.clamps = clamps;
    st.clamps += clamps;
    st.discards += r.discards;
    st.trajectory.push_back(r);
}

RunReport run_color_target(const EdgeColoredGraph& g, const ColorTargetParams& p) {
    RunReport rep;
    rep.algorithm = "thmq";
    rep.seed = p.seed;
    rep.curve = CurveParams::thmq(p.eps, p.eta);
    rep.params = {{"q", p.q},
                  {"eps", p.eps},
                  {"theta", p.theta},
                  {"delta", p.delta},
                  {"eta", p.eta},
                  {"draws", static_cast<double>(p.draws())},
                  {"retries", static_cast<double>(p.retries)},
                  {"iterations", static_cast<double>(p.iterations())}};
    Diagnostics& diag = rep.diagnostics;
    diag.warnings = p.warnings;
    {
        const double x = 2.0 * (1.0 + p.eps) * (1.0 - p.theta + p.theta * p.gamma) * p.eta;
        diag.discard_bound = x < 1.0 ? 8.0 * p.delta * p.q * std::log(1.0 / (1.0 - x)) : INFINITY;
    }
    const std::size_t q = detail::size_target(p.q);
    rep.target = q;

    std::size_t big = 0;
    for (ColorId c = 0; c < g.num_colors(); ++c)
        if (g.class_size(c) >= q) ++big;
    if (static_cast<double>(big) < 2.0 * (1.0 + p.eps) * p.q - 1e-9)
        diag.warnings.push_back("hypothesis: fewer than 2(1+eps)q colors with at least q edges");
    if (snapshot_stats(g).max_color_degree > 1) diag.warnings.push_back("hypothesis: coloring is not proper");

    auto finish = [&]() {
        VerifyResult vr = verify_rainbow_matching(g, rep.matching);
        rep.verified = vr.ok;
        if (!vr.ok) {
            rep.outcome = Outcome::Failure;
            rep.error = ErrorCode::InvariantViolation;
            rep.error_message = "internal: produced matching failed verification";
            return;
        }
        rep.outcome = rep.matching.size() >= q ? Outcome::Full : (rep.matching.empty() ? Outcome::Failure : Outcome::Partial);
    };

    Preprocessed pre;
    try {
        pre = preprocess(g, p);
    } catch (const Error& e) {
        rep.error = e.code();
        rep.error_message = e.what();
        diag.path = "direct-reduction";
        finish();
        return rep;
    }
    for (auto& l : pre.log) diag.warnings.push_back(l);
    if (pre.direct) {
        diag.path = "direct-reduction";
        rep.matching = *pre.direct;
        finish();
        return rep;
    }

    diag.path = "nibble";
    ColorTargetState st = init_color_target_state(g, pre.heavy, p);
    const std::size_t T = p.iterations();
    try {
        while (st.t < T && st.partial.size() < q) iterate_with_retry(st, p, diag);
    } catch (const Error& e) {
        rep.error = e.code();
        rep.error_message = e.what();
    }
    diag.clamps = st.clamps;
    diag.discards = st.discards;
    for (const auto& r : st.trajectory) {
        diag.size_violations += r.size_violations;
        diag.degree_violations += r.degree_violations;
        diag.a_fraction_violations += r.a_fraction_violations;
    }
    rep.trajectory = st.trajectory;
    rep.matching = st.partial;
    if (rep.matching.size() > q) rep.matching.entries.resize(q);
    if (!rep.error && rep.matching.size() < q) {
        rep.error = ErrorCode::TargetMissed;
        rep.error_message = "TargetMissed: " + std::to_string(rep.matching.size()) + " of " + std::to_string(q) + " colors";
    }
    finish();
    return rep;
}

}  // namespace rnm
