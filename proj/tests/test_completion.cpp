#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "ref_oracle.hpp"
#include "rnm/completion.hpp"
#include "rnm/constructions.hpp"
#include "util.hpp"

using namespace rnm;

TEST_CASE("conflict instance from a latin square") {
    auto g = cyclic_latin_coloring(4);
    auto inst = build_conflict_instance(g, {0, 2});
    CHECK(inst.num_parts() == 2);
    CHECK(inst.parts[0].size() == 4);
    // each edge meets 3 other edges at each endpoint, one of which has color 0 or 2
    CHECK(inst.max_conflict_degree() == 2);
    CHECK(inst.conflict_degree(inst.parts[0][0]) == 2);
    g.delete_color_class(1);
    CHECK(code_of([&] { build_conflict_instance(g, {1}); }) == ErrorCode::EmptyColor);
}

TEST_CASE("independent transversal picks one node per part, pairwise free") {
    auto g = cyclic_latin_coloring(9);
    std::vector<ColorId> cols{0, 1, 2};
    auto inst = build_conflict_instance(g, cols);
    auto tr = independent_transversal(inst, 5);
    REQUIRE(tr.success);
    REQUIRE(tr.choice.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.edge(tr.choice[i]).c == cols[i]);
        for (std::size_t j = i + 1; j < 3; ++j) CHECK_FALSE(inst.conflict(tr.choice[i], tr.choice[j]));
    }
    CHECK(independent_transversal(inst, 5).choice == tr.choice);
}

TEST_CASE("completion over sparse colors is a valid rainbow matching") {
    // 6 disjoint copies of each color's matching structure: wide classes, low degree
    std::vector<Edge> es;
    for (unsigned c = 0; c < 4; ++c)
        for (unsigned k = 0; k < 60; ++k) es.push_back({c * 1000 + 2 * k, c * 1000 + 2 * k + 1, c});
    auto g = EdgeColoredGraph::build(4000, es, 4);
    auto res = complete_rainbow_matching(g, {0, 1, 2, 3}, 1);
    CHECK(res.hypothesis_met);
    CHECK(res.matching.size() == 4);
    CHECK(verify_rainbow_matching(g, res.matching).ok);
}

TEST_CASE("completion failure on an impossible instance") {
    // two colors, each a single edge at the same vertex
    auto g = EdgeColoredGraph::build(3, {{0, 1, 0}, {0, 2, 1}});
    auto res = [&] { return complete_rainbow_matching(g, {0, 1}, 1, 50); };
    CHECK(code_of([&] { res(); }) == ErrorCode::CompletionFailed);
}

TEST_CASE("greedy completions") {
    auto g = latin_slab(4, 0.5);
    auto m = greedy_complete_vertices(g, {}, {0, 1, 2, 3});
    CHECK(m.size() == 4);
    CHECK(ref::is_rainbow_matching(g, m));
    std::set<VertexId> covered;
    for (auto& e : m.entries) covered.insert(g.edge(e.edge).u);
    CHECK(covered == std::set<VertexId>{0, 1, 2, 3});

    // every A vertex is used, so no further color fits
    CHECK(code_of([&] { greedy_complete_colors(g, m, 1); }) == ErrorCode::GreedyStuck);
    auto mc = greedy_complete_colors(g, {}, 4);
    CHECK(mc.size() == 4);
    CHECK(ref::is_rainbow_matching(g, mc));
}

TEST_CASE("greedy stuck is named") {
    auto g = EdgeColoredGraph::build(3, {{0, 2, 0}, {1, 2, 0}});
    g.set_part_a({0, 1});
    CHECK(code_of([&] { greedy_complete_vertices(g, {}, {0, 1}); }) == ErrorCode::GreedyStuck);
    CHECK(code_of([&] { greedy_complete_colors(g, {}, 2); }) == ErrorCode::GreedyStuck);
}

TEST_CASE("property: greedy output always verifies") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        gen::Prng r(seed);
        auto g = gen::proper_graph(r, 12, 5, 3);
        try {
            auto m = greedy_complete_colors(g, {}, 1 + r.below(3));
            CHECK(ref::is_rainbow_matching(g, m));
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::GreedyStuck);
        }
    }
}
