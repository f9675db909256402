#include <cmath>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "ref_oracle.hpp"
#include "rnm/constructions.hpp"
#include "rnm/harness.hpp"
#include "rnm/nibble_color_target.hpp"
#include "util.hpp"

using namespace rnm;

namespace {

EdgeColoredGraph thmq_instance(std::size_t q, double eps, std::uint64_t seed) {
    InstanceSpec s;
    s.kind = InstanceKind::RandomThmq;
    s.q = q;
    s.eps = eps;
    s.seed = seed;
    return make_instance(s);
}

// A = 0..9 joined to B = 10..35, color (i+j) mod 26: every A-vertex has degree 26.
EdgeColoredGraph heavy_slab() {
    std::vector<Edge> es;
    for (unsigned i = 0; i < 10; ++i)
        for (unsigned j = 0; j < 26; ++j) es.push_back({i, 10 + j, (i + j) % 26});
    return EdgeColoredGraph::build(36, es, 26);
}

bool distinct_vertices_and_colors(const EdgeColoredGraph& g, const RainbowMatching& m) {
    return ref::is_rainbow_matching(g, m);
}

}  // namespace

TEST_CASE("parameter window") {
    auto p = default_color_target_params(500, 0.3);
    CHECK(p.theta == doctest::Approx(0.15));
    CHECK(p.gamma == doctest::Approx(1.15 / 1.3));
    CHECK(p.M > 2);
    CHECK(p.delta == doctest::Approx(1 / std::log(500.0)));
    CHECK(p.draws() == static_cast<std::size_t>(std::ceil(2 * p.delta * 1.3 * 500)));
    auto bad = p;
    bad.eta = 0.3;  // below 1/(2(1+eps))
    CHECK(code_of([&] { bad.finalize(); }) == ErrorCode::ConfigInvalid);
    bad.eta = 0.9;
    CHECK(code_of([&] { bad.finalize(); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("deletion probabilities keep the A to non-A ratio") {
    auto p = default_color_target_params(500, 0.3);
    auto d = deletion_probs(1, p, 0.0, 0.0);
    CHECK(d.a / d.b == doctest::Approx(1.3 / 1.15));
    CHECK(d.a > 0);
    CHECK(d.a < 1);
}

TEST_CASE("max_a_fraction") {
    auto g = EdgeColoredGraph::build(5, {{0, 1, 0}, {2, 3, 0}, {1, 4, 1}});
    g.set_part_a({0});
    std::size_t viol = 0;
    // color 0 spans 4 vertices, one of them in A
    CHECK(max_a_fraction(g, &viol, 0.2) == doctest::Approx(0.25));
    CHECK(viol == 1);
    CHECK(max_a_fraction(g, &viol, 0.3) == doctest::Approx(0.25));
    CHECK(viol == 0);
}

TEST_CASE("weaker bound solver: augmentation branch at q=2 with 8 colors") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        gen::Prng r(seed);
        auto g = gen::proper_graph(r, 10, 8, 2);
        bool ok = true;
        for (ColorId c = 0; c < 8; ++c) ok = ok && g.class_size(c) == 2;
        if (!ok) continue;
        auto m = weaker_bound_solver(g, 2, seed);
        CHECK(m.size() == 2);
        CHECK(distinct_vertices_and_colors(g, m));
    }
}

TEST_CASE("weaker bound solver: too few colors") {
    auto g = cyclic_latin_coloring(3);
    CHECK(code_of([&] { weaker_bound_solver(g, 3, 1); }) == ErrorCode::AugmentStuck);
}

TEST_CASE("preprocess passes sparse instances through") {
    auto g = thmq_instance(40, 0.3, 2);
    auto pre = preprocess(g, default_color_target_params(40, 0.3));
    CHECK(pre.heavy.empty());
    CHECK_FALSE(pre.direct.has_value());
}

TEST_CASE("preprocess reduction on a heavy slab") {
    auto g = heavy_slab();
    auto p = default_color_target_params(10, 0.3);
    p.seed = 3;
    p.envelope.kind = EnvelopeKind::Zero;
    auto pre = preprocess(g, p);
    CHECK(pre.heavy.size() == 9);  // ceil((1-theta)q) of the 10 heavy vertices
    REQUIRE(pre.direct.has_value());
    CHECK(pre.direct->size() == 10);
    CHECK(distinct_vertices_and_colors(g, *pre.direct));

    auto rep = run_color_target(g, p);
    CHECK(rep.diagnostics.path == "direct-reduction");
    CHECK(rep.outcome == Outcome::Full);
    CHECK(rep.verified);
}

TEST_CASE("iteration keeps classes at target and the matching valid") {
    auto g = thmq_instance(60, 0.3, 4);
    auto p = default_color_target_params(60, 0.3);
    p.delta = 0.02;
    p.seed = 4;
    p.envelope.kind = EnvelopeKind::Zero;
    p.finalize();
    auto st = init_color_target_state(g, {}, p);
    for (int k = 0; k < 5; ++k) {
        iterate(st, p);
        st.graph.check_invariants();
        CHECK(verify_rainbow_matching(g, st.partial).ok);
        for (ColorId c = 0; c < st.graph.num_colors(); ++c)
            if (st.graph.color_alive(c)) CHECK(st.graph.class_size(c) <= st.s_t);
        for (auto& en : st.partial.entries) CHECK_FALSE(st.graph.color_alive(en.color));
    }
}

TEST_CASE("small-delta run reaches q and repeats exactly") {
    auto g = thmq_instance(60, 0.3, 1);
    SolverConfig cfg;
    cfg.algorithm = "thmq";
    cfg.delta = 0.01;
    cfg.envelope.kind = EnvelopeKind::Zero;
    auto rep = solve(g, cfg, 1);
    CHECK(rep.verified);
    CHECK(rep.matched_count() <= 60);
    if (rep.outcome == Outcome::Full) CHECK(rep.matched_count() == 60);
    CHECK(report_json(solve(g, cfg, 1)) == report_json(rep));
}
