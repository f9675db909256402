#include "rnm/nibble_uniform.hpp"

#include <algorithm>
#include <cmath>

#include "nibble_common.hpp"
#include "rnm/completion.hpp"
#include "rnm/errors.hpp"
#include "rnm/rng.hpp"

namespace rnm {

std::size_t UniformParams::iterations() const { return detail::horizon(eta, delta); }

void UniformParams::finalize() {
    gamma = 1.0 / (1.0 + eps);
    valid = true;
    invalid_reason.clear();
    auto bad = [&](const std::string& why) {
        valid = false;
        if (!invalid_reason.empty()) invalid_reason += "; ";
        invalid_reason += why;
    };
    if (!(eps > 0.0) || eps >= 1.0) bad("eps outside (0,1)");
    if (!(eta > 0.0) || eta >= 1.0) bad("eta outside (0,1)");
    if (!(delta > 0.0) || delta >= 1.0) bad("delta outside (0,1)");
    if (Delta < 1.0) bad("Delta < 1");
}

ScheduleInputs UniformParams::schedule_inputs() const { return {CurveParams::thm1(eps, eta), q, delta, Delta}; }

UniformParams default_params(double q, double Delta) {
    UniformParams p;
    p.q = q;
    p.Delta = Delta;
    double r = Delta * Delta / q;
    double lq = std::log(q);
    p.eps = std::pow(r, 1.0 / 6.0) * lq * lq;
    p.eta = 1.0 - std::pow(r, 1.0 / 6.0) * lq;
    p.delta = 2.0 * std::pow(r, 1.0 / 3.0);
    p.finalize();
    return p;
}

double activation_prob(std::size_t t, double delta) {
    double denom = 1.0 - (static_cast<double>(t) - 1.0) * delta;
    if (!(denom > 0.0)) throw Error(ErrorCode::DenominatorNonpositive, "1-(t-1)delta = " + std::to_string(denom));
    return delta / denom;
}

double deletion_prob_a(std::size_t t, const UniformParams& p, double alpha, double beta) {
    CurvePoint c = ideal_unchecked(CurveParams::thm1(p.eps, p.eta), static_cast<double>(t) * p.delta);
    return p.gamma * p.delta * c.g * (1.0 + beta) / (c.s * (1.0 - alpha));
}

double step_residual_prob(double p_prime, double a, bool* clamped) {
    double raw = p_prime >= 1.0 ? 0.0 : (a - p_prime) / (1.0 - p_prime);
    double v = std::clamp(raw, 0.0, 1.0);
    if (clamped) *clamped = v != raw;
    return v;
}

namespace {

void fill_record(TrajectoryRecord& r, const UniformState& st, const UniformParams& p, std::size_t t) {
    const EdgeColoredGraph& g = st.graph;
    ScheduleInputs in = p.schedule_inputs();
    IdealValues iv = ideal_values(in, t);
    GraphStats gs = snapshot_stats(g);
    r.t = t;
    r.x = static_cast<double>(t) * p.delta;
    r.size_min = static_cast<double>(gs.min_class);
    r.size_max = static_cast<double>(gs.max_class);
    r.degree_max = static_cast<double>(gs.max_degree);
    r.matched = st.partial.size();
    r.alive_colors = gs.alive_colors;
    r.alive_vertices = gs.alive_vertices;
    r.s_tilde = iv.s;
    r.d_tilde = iv.d;
    r.alpha = st.schedule.alpha[t];
    r.beta = st.schedule.beta[t];
    r.size_target = static_cast<double>(st.s_t);
    r.a = st.schedule.alpha[t] < 1.0 ? deletion_prob_a(t, p, r.alpha, r.beta) : 1.0;
    double denom = 1.0 - static_cast<double>(t) * p.delta;
    r.theta = denom > 0.0 ? p.delta / denom : 1.0;
    std::size_t below = 0, above = 0;
    for (ColorId c = 0; c < g.num_colors(); ++c)
        if (g.color_alive(c) && g.class_size(c) < st.s_t) ++below;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (g.vertex_alive(v) && static_cast<double>(g.degree(v)) > st.d_t + 1e-9) ++above;
    r.size_violations = below;
    r.degree_violations = above;
}

void set_targets(UniformState& st, const UniformParams& p, std::size_t t) {
    IdealValues iv = ideal_values(p.schedule_inputs(), t);
    st.s_t = detail::size_target((1.0 - st.schedule.alpha[t]) * iv.s);
    st.d_t = (1.0 + st.schedule.beta[t]) * iv.d;
}

void truncate_classes(UniformState& st) {
    EdgeColoredGraph& g = st.graph;
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c) || g.class_size(c) <= st.s_t) continue;
        std::vector<EdgeId> es(g.class_edges(c).begin(), g.class_edges(c).end());
        detail::truncate_lowest(g, std::move(es), st.s_t);
    }
}

}  // namespace

UniformState init_uniform_state(const EdgeColoredGraph& g, const UniformParams& p) {
    UniformState st;
    st.graph = g;
    st.schedule = envelope_schedule(p.schedule_inputs(), p.iterations(), p.envelope);
    set_targets(st, p, 0);
    truncate_classes(st);
    TrajectoryRecord r;
    fill_record(r, st, p, 0);
    r.attempts = 1;
    st.trajectory.push_back(r);
    return st;
}

void iterate(UniformState& st, const UniformParams& p, std::uint64_t attempt) {
    EdgeColoredGraph& g = st.graph;
    const std::size_t t = st.t;
    const double theta = activation_prob(t + 1, p.delta);
    const double alpha = st.schedule.alpha[t], beta = st.schedule.beta[t];
    if (!(alpha < 1.0)) throw Error(ErrorCode::DenominatorNonpositive, "alpha_t >= 1 at t=" + std::to_string(t));
    const double a = deletion_prob_a(t, p, alpha, beta);
    Rng act(p.seed, Purpose::Activation, t, attempt);
    Rng draw(p.seed, Purpose::EdgeDraw, t, attempt);
    Rng res(p.seed, Purpose::Residual, t, attempt);

    // Steps 1-2
    std::vector<EdgeId> picked;
    for (ColorId c = 0; c < g.num_colors(); ++c) {
        if (!g.color_alive(c) || g.class_size(c) == 0) continue;
        if (!act.bernoulli(theta)) continue;
        auto cls = g.class_edges(c);
        picked.push_back(cls[draw.index(cls.size())]);
    }

    // p'_v from the pre-deletion state; class sizes are the actual ones
    const std::size_t n = g.num_vertices();
    std::vector<double> p_prime(n, 0.0);
    for (VertexId v = 0; v < n; ++v) {
        if (!g.vertex_alive(v)) continue;
        double log_keep = 0.0;
        for (const auto& [c, k] : g.color_counts(v)) {
            if (k == 0) continue;
            double x = static_cast<double>(k) * theta / static_cast<double>(g.class_size(c));
            if (x >= 1.0) {
                log_keep = -INFINITY;
                break;
            }
            log_keep += std::log1p(-x);
        }
        p_prime[v] = -std::expm1(log_keep);
    }

    // Step 3
    std::vector<char> hit(n, 0);
    std::vector<std::uint32_t> cover(n, 0);
    for (EdgeId e : picked) {
        const Edge& ed = g.edge(e);
        ++cover[ed.u];
        ++cover[ed.v];
    }
    for (EdgeId e : picked)
        for (VertexId w : {g.edge(e).u, g.edge(e).v})
            if (!hit[w]) {
                hit[w] = 1;
                g.delete_vertex(w);
            }

    // Step 4
    std::size_t clamps = 0;
    for (VertexId v = 0; v < n; ++v) {
        if (!g.vertex_alive(v)) continue;
        bool clamped = false;
        double pv = step_residual_prob(p_prime[v], a, &clamped);
        clamps += clamped ? 1 : 0;
        if (res.bernoulli(pv)) g.delete_vertex(v);
    }

    // Steps 5-6
    std::size_t added = 0;
    for (EdgeId e : picked) {
        const Edge& ed = g.edge(e);
        if (cover[ed.u] != 1 || cover[ed.v] != 1) continue;
        st.partial.add(e, ed.c);
        g.delete_color_class(ed.c);
        ++added;
    }

    // Step 7
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

void iterate_with_retry(UniformState& st, const UniformParams& p, Diagnostics& diag) {
    const std::size_t attempts = std::max<std::size_t>(p.retries, 1);
    UniformState best;
    std::size_t best_bad = 0;
    bool have_best = false;
    for (std::size_t k = 0; k < attempts; ++k) {
        UniformState trial = st;
        iterate(trial, p, k);
        TrajectoryRecord& r = trial.trajectory.back();
        std::size_t bad = r.size_violations + r.degree_violations;
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

RunReport run_uniform(const EdgeColoredGraph& g, const UniformParams& p) {
    RunReport rep;
    rep.algorithm = "thm1";
    rep.seed = p.seed;
    rep.curve = CurveParams::thm1(p.eps, p.eta);
    rep.params = {{"q", p.q},         {"Delta", p.Delta}, {"eps", p.eps},
                  {"delta", p.delta}, {"eta", p.eta},     {"retries", static_cast<double>(p.retries)},
                  {"iterations", static_cast<double>(p.iterations())}};
    Diagnostics& diag = rep.diagnostics;
    diag.path = "nibble";
    if (!p.valid) diag.warnings.push_back("parameters invalid: " + p.invalid_reason);

    std::vector<ColorId> targets;
    for (ColorId c = 0; c < g.num_colors(); ++c)
        if (g.class_size(c) > 0) targets.push_back(c);
    rep.target = targets.size();
    GraphStats gs = snapshot_stats(g);
    if (static_cast<double>(gs.max_degree) > p.q) diag.warnings.push_back("hypothesis: max degree exceeds q");
    if (static_cast<double>(gs.max_color_degree) > p.Delta) diag.warnings.push_back("hypothesis: color degree exceeds Delta");
    for (ColorId c : targets)
        if (static_cast<double>(g.class_size(c)) < (1.0 + p.eps) * p.q - 1e-9) {
            diag.warnings.push_back("hypothesis: some class has fewer than (1+eps)q edges");
            break;
        }

    UniformState st = init_uniform_state(g, p);
    const std::size_t T = p.iterations();
    try {
        while (st.t < T) iterate_with_retry(st, p, diag);
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

    if (!rep.error) {
        std::vector<ColorId> rest;
        for (ColorId c : targets)
            if (st.graph.color_alive(c)) rest.push_back(c);
        try {
            CompletionResult cr = complete_rainbow_matching(st.graph, rest, derive_seed(p.seed, Purpose::Resampling, T));
            diag.resamples = cr.resamples;
            for (auto& w : cr.warnings) diag.warnings.push_back(w);
            for (const auto& en : cr.matching.entries) rep.matching.add(en.edge, en.color);
        } catch (const Error& e) {
            rep.error = e.code();
            rep.error_message = e.what();
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
