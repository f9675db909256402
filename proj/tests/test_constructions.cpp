#include <set>

#include "doctest.h"
#include "ref_oracle.hpp"
#include "rnm/constructions.hpp"
#include "rnm/oracle.hpp"
#include "util.hpp"

using namespace rnm;

TEST_CASE("cyclic latin square") {
    auto g = cyclic_latin_coloring(5);
    CHECK(g.num_vertices() == 10);
    CHECK(g.num_edges() == 25);
    GraphStats s = snapshot_stats(g);
    CHECK(s.max_color_degree == 1);
    CHECK(s.min_class == 5);
    CHECK(g.part_a().size() == 5);
}

TEST_CASE("prop2 counterexample shape and oracle value") {
    CHECK(code_of([] { prop2_counterexample(3); }) == ErrorCode::OddT);
    for (std::size_t t : {2, 4}) {
        auto g = prop2_counterexample(t);
        CHECK(g.num_colors() == t + 1);
        for (ColorId c = 0; c <= t; ++c) CHECK(g.class_size(c) == t);
        CHECK(snapshot_stats(g).max_color_degree == 1);
        CHECK(ref::max_rainbow(g) == t - 1);
    }
}

TEST_CASE("star forest: q-1 stars, matching number q-1") {
    auto g = star_forest(4, 4);
    CHECK(g.num_edges() == 12);
    CHECK(g.num_colors() == 4);
    CHECK(ref::max_matching(g) == 3);
    CHECK(ref::max_rainbow(g) == 3);
}

TEST_CASE("k2qm1 tight construction") {
    for (std::size_t q : {2, 3, 4}) {
        auto g = k2qm1_tight(q);
        CHECK(g.num_vertices() == 2 * q - 1);
        CHECK(g.num_colors() == 2 * q - 3);
        for (ColorId c = 0; c < g.num_colors(); ++c) CHECK(g.class_size(c) == q);
        CHECK(snapshot_stats(g).max_color_degree <= 2);
        CHECK(max_rainbow_matching(g).max_size <= q - 1);
    }
    CHECK(ref::max_rainbow(k2qm1_tight(3)) <= 2);
}

TEST_CASE("random generators are seed-deterministic and meet their hypotheses") {
    InstanceSpec s;
    s.q = 30;
    s.eps = 0.3;
    s.seed = 9;
    for (auto kind : {InstanceKind::RandomThm1, InstanceKind::RandomThm3, InstanceKind::RandomThmq}) {
        s.kind = kind;
        s.eps = kind == InstanceKind::RandomThm1 ? 0.5 : 0.3;
        auto a = make_instance(s);
        auto b = make_instance(s);
        CHECK(a.edges() == b.edges());
        auto h = check_hypotheses(a, s);
        CHECK_MESSAGE(h.ok, to_string(kind) << ": " << h.detail);
        s.seed = 10;
        CHECK(make_instance(s).edges() != a.edges());
        s.seed = 9;
    }
}

TEST_CASE("instance kind names round trip") {
    for (auto k : {InstanceKind::CyclicLatin, InstanceKind::Prop2Counterexample, InstanceKind::StarForest, InstanceKind::K2qm1Tight,
                   InstanceKind::RandomThm1, InstanceKind::RandomThm3, InstanceKind::RandomThmq})
        CHECK(parse_instance_kind(to_string(k)) == k);
    CHECK(code_of([] { parse_instance_kind("nope"); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("ceil_count") {
    CHECK(ceil_count(1.5 * 400) == 600);
    CHECK(ceil_count(600.2) == 601);
    CHECK(ceil_count(-1.0) == 0);
}
