#include <map>

#include "doctest.h"
#include "gen.hpp"
#include "ref_oracle.hpp"
#include "rnm/errors.hpp"
#include "rnm/graph.hpp"
#include "util.hpp"

using namespace rnm;

namespace {

EdgeColoredGraph k13(ColorId c0 = 0, ColorId c1 = 0, ColorId c2 = 0) {
    return EdgeColoredGraph::build(4, {{0, 1, c0}, {0, 2, c1}, {0, 3, c2}});
}

}  // namespace

TEST_CASE("build: smallest graph and counting") {
    auto g = EdgeColoredGraph::build(2, {{0, 1, 0}});
    CHECK(g.num_edges() == 1);
    CHECK(g.num_colors() == 1);
    auto h = EdgeColoredGraph::build(3, {{0, 1, 0}, {1, 2, 0}});
    CHECK(h.color_degree(1, 0) == 2);
    CHECK(h.degree(1) == 2);
}

TEST_CASE("build: rejects loops, parallels and bad ids") {
    CHECK(code_of([] { EdgeColoredGraph::build(2, {{0, 0, 0}}); }) == ErrorCode::LoopEdge);
    CHECK(code_of([] { EdgeColoredGraph::build(2, {{0, 1, 0}, {1, 0, 1}}); }) == ErrorCode::ParallelEdge);
    CHECK(code_of([] { EdgeColoredGraph::build(2, {{0, 2, 0}}); }) == ErrorCode::VertexOutOfRange);
}

TEST_CASE("deletions") {
    SUBCASE("star center") {
        auto g = k13();
        g.delete_vertex(0);
        CHECK(g.alive_edge_count() == 0);
        CHECK(code_of([&] { g.delete_vertex(0); }) == ErrorCode::AlreadyDead);
    }
    SUBCASE("color class of a 2-colored C4") {
        auto g = EdgeColoredGraph::build(4, {{0, 1, 0}, {1, 2, 1}, {2, 3, 0}, {3, 0, 1}});
        g.delete_color_class(0);
        CHECK(g.alive_edge_count() == 2);
        CHECK_FALSE(g.color_alive(0));
        CHECK(code_of([&] { g.delete_color_class(0); }) == ErrorCode::AlreadyDead);
    }
    SUBCASE("edge twice") {
        auto g = k13();
        g.delete_edge(1);
        CHECK(code_of([&] { g.delete_edge(1); }) == ErrorCode::AlreadyDead);
    }
}

TEST_CASE("verify_rainbow_matching examples") {
    auto g = EdgeColoredGraph::build(4, {{0, 1, 0}, {1, 2, 1}, {2, 3, 0}});
    CHECK(verify_rainbow_matching(g, {}).ok);

    RainbowMatching share;
    share.add(0, 0);
    share.add(1, 1);
    auto r = verify_rainbow_matching(g, share);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == ViolationKind::Incidence);

    RainbowMatching same_color;
    same_color.add(0, 0);
    same_color.add(2, 0);
    r = verify_rainbow_matching(g, same_color);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].kind == ViolationKind::Color);

    RainbowMatching unknown;
    unknown.add(7, 0);
    CHECK(code_of([&] { verify_rainbow_matching(g, unknown); }) == ErrorCode::UnknownEdge);
}

TEST_CASE("verify works against dead edges") {
    auto g = EdgeColoredGraph::build(4, {{0, 1, 0}, {2, 3, 1}});
    g.delete_vertex(0);
    RainbowMatching m;
    m.add(0, 0);
    m.add(1, 1);
    CHECK(verify_rainbow_matching(g, m).ok);
}

TEST_CASE("snapshot_stats examples") {
    auto g = k13();
    GraphStats s = snapshot_stats(g);
    CHECK(s.max_degree == 3);
    CHECK(s.max_color_degree == 3);
    CHECK(s.min_class == 3);
    CHECK(s.max_class == 3);
    g.delete_vertex(3);
    CHECK(snapshot_stats(g).max_class == 2);

    std::vector<Edge> es;
    for (unsigned i = 0; i < 3; ++i)
        for (unsigned j = 0; j < 3; ++j) es.push_back({i, 3 + j, (i + j) % 3});
    auto latin = EdgeColoredGraph::build(6, es, 3);
    GraphStats ls = snapshot_stats(latin);
    CHECK(ls.max_color_degree == 1);
    CHECK(ls.min_class == 3);
    CHECK(ls.max_class == 3);
}

TEST_CASE("property: maintained indexes match a recount after random deletions") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        gen::Prng r(seed);
        auto g = gen::small_graph(r, 3 + r.below(8), 25, 1 + r.below(5));
        for (int step = 0; step < 12; ++step) {
            switch (r.below(3)) {
                case 0: {
                    auto v = static_cast<VertexId>(r.below(g.num_vertices()));
                    if (g.vertex_alive(v)) g.delete_vertex(v);
                    break;
                }
                case 1: {
                    auto c = static_cast<ColorId>(r.below(g.num_colors()));
                    if (g.color_alive(c)) g.delete_color_class(c);
                    break;
                }
                default:
                    if (g.alive_edge_count() > 0) g.delete_edge(g.alive_edges()[r.below(g.alive_edge_count())]);
            }
            g.check_invariants();
            std::map<std::pair<VertexId, ColorId>, std::size_t> cnt;
            std::vector<std::size_t> deg(g.num_vertices(), 0);
            std::vector<std::size_t> cls(g.num_colors(), 0);
            for (EdgeId e = 0; e < g.num_edges(); ++e) {
                if (!g.edge_alive(e)) continue;
                const Edge& ed = g.edge(e);
                CHECK(g.vertex_alive(ed.u));
                CHECK(g.vertex_alive(ed.v));
                CHECK(g.color_alive(ed.c));
                ++deg[ed.u];
                ++deg[ed.v];
                ++cls[ed.c];
                ++cnt[{ed.u, ed.c}];
                ++cnt[{ed.v, ed.c}];
            }
            for (VertexId v = 0; v < g.num_vertices(); ++v) {
                REQUIRE(g.degree(v) == deg[v]);
                for (ColorId c = 0; c < g.num_colors(); ++c) REQUIRE(g.color_degree(v, c) == cnt[{v, c}]);
            }
            for (ColorId c = 0; c < g.num_colors(); ++c) REQUIRE(g.class_size(c) == cls[c]);
        }
    }
}

TEST_CASE("property: verifier agrees with the pairwise check") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        gen::Prng r(seed);
        auto g = gen::small_graph(r, 4 + r.below(20), 40, 1 + r.below(8));
        auto m = gen::random_entries(r, g, 20);
        CHECK(verify_rainbow_matching(g, m).ok == ref::is_rainbow_matching(g, m));
    }
}

TEST_CASE("alive_subgraph keeps ids and maps back") {
    auto g = EdgeColoredGraph::build(4, {{0, 1, 0}, {1, 2, 1}, {2, 3, 2}});
    g.delete_edge(1);
    std::vector<EdgeId> back;
    auto sub = alive_subgraph(g, [](EdgeId) { return true; }, [](ColorId c) { return c / 2; }, 2, back);
    CHECK(sub.num_vertices() == 4);
    CHECK(sub.num_edges() == 2);
    CHECK(back == std::vector<EdgeId>{0, 2});
    CHECK(sub.edge(1).c == 1);
}
