#include <cmath>
#include <set>

#include "doctest.h"
#include "rnm/constructions.hpp"
#include "rnm/harness.hpp"
#include "rnm/nibble_saturating.hpp"
#include "util.hpp"

using namespace rnm;

namespace {

EdgeColoredGraph thm3_instance(std::size_t q, double eps, std::uint64_t seed) {
    InstanceSpec s;
    s.kind = InstanceKind::RandomThm3;
    s.q = q;
    s.eps = eps;
    s.seed = seed;
    return make_instance(s);
}

SaturatingParams zero_env(SaturatingParams p, std::uint64_t seed) {
    p.seed = seed;
    p.envelope.kind = EnvelopeKind::Zero;
    p.finalize();
    return p;
}

}  // namespace

TEST_CASE("defaults") {
    auto p = default_saturating_params(500, 0.3);
    CHECK(p.eta == doctest::Approx(1 - 0.027));
    CHECK(p.delta == doctest::Approx(1 / std::log(500.0)));
    CHECK(p.draws() == static_cast<std::size_t>(std::ceil(p.delta * 500)));
    CHECK(default_saturating_params(3, 0.3).delta == 0.5);
}

TEST_CASE("init truncates A-degrees to (1+eps)q") {
    auto g = latin_slab(10, 0.5);  // A-degree 15
    auto p = zero_env(default_saturating_params(10, 0.2), 1);
    auto st = init_saturating_state(g, p);
    for (VertexId a : st.graph.part_a()) CHECK(st.graph.degree(a) == 12);
}

TEST_CASE("iteration invariants") {
    auto g = thm3_instance(80, 0.3, 3);
    auto p = zero_env(default_saturating_params(80, 0.3), 3);
    auto st = init_saturating_state(g, p);
    std::size_t T = std::min<std::size_t>(p.iterations(), 3);
    for (std::size_t k = 0; k < T; ++k) {
        iterate(st, p);
        st.graph.check_invariants();
        CHECK(verify_rainbow_matching(g, st.partial).ok);
        std::set<VertexId> matched;
        for (auto& en : st.partial.entries) {
            CHECK(g.in_part_a(g.edge(en.edge).u) != g.in_part_a(g.edge(en.edge).v));
            matched.insert(g.in_part_a(g.edge(en.edge).u) ? g.edge(en.edge).u : g.edge(en.edge).v);
        }
        // every dead A-vertex is matched
        for (VertexId a : g.part_a())
            if (!st.graph.vertex_alive(a)) CHECK(matched.count(a) == 1);
        for (VertexId a : g.part_a())
            if (st.graph.vertex_alive(a)) CHECK(st.graph.degree(a) <= st.s_t);
    }
}

TEST_CASE("latin slab: valid, nearly saturated, stuck vertices reported") {
    auto g = latin_slab(40, 0.3);
    auto rep = run_saturating(g, zero_env(default_saturating_params(40, 0.3), 7));
    CHECK(rep.verified);
    CHECK(rep.matched_count() >= 36);
    if (rep.outcome != Outcome::Full) {
        REQUIRE(rep.error.has_value());
        CHECK(*rep.error == ErrorCode::GreedyStuck);
    }
}

TEST_CASE("random instance runs are valid and repeatable") {
    auto g = thm3_instance(100, 0.3, 5);
    auto p = zero_env(default_saturating_params(100, 0.3), 5);
    auto rep = run_saturating(g, p);
    CHECK(rep.verified);
    CHECK(rep.target == 100);
    if (rep.outcome == Outcome::Full) CHECK(rep.matched_count() == 100);
    CHECK(report_json(run_saturating(g, p)) == report_json(rep));
}
