#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "gen.hpp"
#include "rnm/constructions.hpp"
#include "rnm/io.hpp"
#include "util.hpp"

using namespace rnm;

TEST_CASE("ecg round trip keeps edges, colors and side A") {
    auto g = latin_slab(3, 0.4);
    std::stringstream ss;
    write_ecg(ss, g);
    auto h = read_ecg(ss);
    CHECK(h.edges() == g.edges());
    CHECK(h.num_colors() == g.num_colors());
    CHECK(h.part_a() == g.part_a());
}

TEST_CASE("property: ecg and rmm round trips") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        gen::Prng r(seed);
        auto g = gen::small_graph(r, 2 + r.below(15), 30, 1 + r.below(6));
        std::stringstream ss;
        write_ecg(ss, g);
        auto h = read_ecg(ss);
        REQUIRE(h.edges() == g.edges());
        if (g.num_edges() == 0) continue;
        auto m = gen::random_entries(r, g, 5);
        std::stringstream ms;
        write_rmm(ms, m);
        CHECK(read_rmm(ms, g) == m);
    }
}

TEST_CASE("ecg parse errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return code_of([&] { read_ecg(in); });
    };
    CHECK(parse("e 0 1 0\n") == ErrorCode::ParseError);
    CHECK(parse("p 2 1\ne 0 x 0\n") == ErrorCode::ParseError);
    CHECK(parse("p 2 1\nz\n") == ErrorCode::ParseError);
    // graph-level rejections surface as parse errors with the line number
    CHECK(parse("p 2 1\ne 0 5 0\n") == ErrorCode::ParseError);
    CHECK(parse("p 2 1\ne 1 1 0\n") == ErrorCode::LoopEdge);
}

TEST_CASE("rmm rejects unknown edges") {
    auto g = EdgeColoredGraph::build(2, {{0, 1, 0}});
    std::istringstream in("m 3 0\n");
    CHECK(code_of([&] { read_rmm(in, g); }) == ErrorCode::ParseError);
}

TEST_CASE("atomic write leaves no temp file") {
    auto dir = std::filesystem::temp_directory_path() / "rnm_io_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "x.txt").string();
    write_file_atomic(path, "hello\n");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    CHECK(std::filesystem::file_size(path) == 6);
    std::filesystem::remove_all(dir);
}
