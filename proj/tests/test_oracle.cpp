#include "doctest.h"
#include "gen.hpp"
#include "ref_oracle.hpp"
#include "rnm/constructions.hpp"
#include "rnm/oracle.hpp"
#include "util.hpp"

using namespace rnm;

TEST_CASE("property: oracle equals subset enumeration") {
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        gen::Prng r(seed);
        auto g = gen::small_graph(r, 2 + r.below(10), 12, 1 + r.below(6));
        if (r.coin(0.3) && g.num_vertices() > 0) g.delete_vertex(0);
        auto res = max_rainbow_matching(g);
        REQUIRE(res.exact);
        CHECK(res.max_size == ref::max_rainbow(g));
        CHECK(res.witness.size() == res.max_size);
        CHECK(ref::is_rainbow_matching(g, res.witness));
        CHECK(max_matching_size(g) == ref::max_matching(g));
        CHECK(exists_rainbow_matching(g, res.max_size));
        CHECK_FALSE(exists_rainbow_matching(g, res.max_size + 1));
    }
}

TEST_CASE("witness edges are alive") {
    auto g = cyclic_latin_coloring(3);
    g.delete_color_class(0);
    auto res = max_rainbow_matching(g);
    for (const auto& e : res.witness.entries) CHECK(g.edge_alive(e.edge));
    CHECK(res.max_size == 2);
}

TEST_CASE("budget exhaustion is reported") {
    auto g = cyclic_latin_coloring(6);
    auto res = max_rainbow_matching(g, 10);
    CHECK_FALSE(res.exact);
    CHECK(code_of([&] { exists_rainbow_matching(g, 6, 10); }) == ErrorCode::BudgetExceeded);
}

TEST_CASE("partial transversals of cyclic squares") {
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::vector<std::size_t>> L(n, std::vector<std::size_t>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) L[i][j] = (i + j) % n;
        std::size_t got = max_partial_transversal(L);
        CHECK(got == ref::max_partial_transversal(L));
        CHECK(got == (n % 2 ? n : n - 1));
    }
    CHECK(code_of([] { max_partial_transversal({{0, 1}, {0, 1}}); }) == ErrorCode::NotLatin);
}
