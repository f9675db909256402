#include <cmath>

#include "doctest.h"
#include "rnm/constructions.hpp"
#include "rnm/harness.hpp"
#include "rnm/nibble_uniform.hpp"
#include "util.hpp"

using namespace rnm;

namespace {

UniformParams desk_params(double q, double Delta, std::uint64_t seed) {
    UniformParams p;
    p.q = q;
    p.Delta = Delta;
    p.eps = 0.5;
    p.delta = 0.05;
    p.eta = 0.6;
    p.retries = 20;
    p.seed = seed;
    p.envelope.kind = EnvelopeKind::Zero;
    p.finalize();
    return p;
}

EdgeColoredGraph thm1_instance(std::size_t q, std::size_t Delta, std::uint64_t seed) {
    InstanceSpec s;
    s.kind = InstanceKind::RandomThm1;
    s.q = q;
    s.eps = 0.5;
    s.delta_max = Delta;
    s.seed = seed;
    return make_instance(s);
}

}  // namespace

TEST_CASE("default parameters follow their formulas") {
    auto p = default_params(1e6, 1);
    double r = std::pow(1e-6, 1.0 / 6.0);
    CHECK(p.eps == doctest::Approx(r * std::pow(std::log(1e6), 2)));
    CHECK(p.eta == doctest::Approx(1 - r * std::log(1e6)));
    CHECK(p.delta == doctest::Approx(2 * std::pow(1e-6, 1.0 / 3.0)));
    CHECK_FALSE(p.valid);  // eps ~ 19 at this q
    CHECK(default_params(1e30, 1).valid);
}

TEST_CASE("activation probability") {
    CHECK(activation_prob(1, 0.05) == doctest::Approx(0.05));
    CHECK(activation_prob(3, 0.05) == doctest::Approx(0.05 / 0.9));
    CHECK(code_of([] { activation_prob(21, 0.05); }) == ErrorCode::DenominatorNonpositive);
}

TEST_CASE("residual probability clamps") {
    bool clamped = false;
    CHECK(step_residual_prob(0.1, 0.2, &clamped) == doctest::Approx(0.1 / 0.9));
    CHECK_FALSE(clamped);
    CHECK(step_residual_prob(0.3, 0.2, &clamped) == 0.0);
    CHECK(clamped);
}

TEST_CASE("iterations respect targets and keep the partial matching consistent") {
    auto g = thm1_instance(60, 1, 4);
    auto p = desk_params(60, 1, 4);
    auto st = init_uniform_state(g, p);
    for (ColorId c = 0; c < st.graph.num_colors(); ++c)
        if (st.graph.color_alive(c)) CHECK(st.graph.class_size(c) <= st.s_t);
    for (int k = 0; k < 4; ++k) {
        iterate(st, p);
        st.graph.check_invariants();
        CHECK(st.t == static_cast<std::size_t>(k + 1));
        for (ColorId c = 0; c < st.graph.num_colors(); ++c)
            if (st.graph.color_alive(c)) CHECK(st.graph.class_size(c) <= st.s_t);
        CHECK(verify_rainbow_matching(g, st.partial).ok);
        for (auto& en : st.partial.entries) {
            CHECK_FALSE(st.graph.color_alive(en.color));
            CHECK_FALSE(st.graph.vertex_alive(g.edge(en.edge).u));
            CHECK_FALSE(st.graph.vertex_alive(g.edge(en.edge).v));
        }
    }
    CHECK(st.trajectory.size() == 5);  // t = 0..4
}

TEST_CASE("full runs at small scale are valid and repeatable") {
    for (std::size_t Delta : {1, 3}) {
        auto g = thm1_instance(80, Delta, 2);
        auto p = desk_params(80, static_cast<double>(Delta), 2);
        auto rep = run_uniform(g, p);
        CHECK(rep.verified);
        CHECK(rep.trajectory.size() == p.iterations() + 1);
        if (rep.outcome == Outcome::Full) CHECK(rep.matched_count() == rep.target);
        auto again = run_uniform(g, p);
        CHECK(report_json(again) == report_json(rep));
    }
}
