#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "rnm/constructions.hpp"
#include "rnm/harness.hpp"
#include "rnm/io.hpp"
#include "util.hpp"

using namespace rnm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("rnm_harness_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("exit codes") {
    RunReport r;
    r.outcome = Outcome::Full;
    r.verified = true;
    CHECK(exit_code(r) == 0);
    r.outcome = Outcome::Partial;
    CHECK(exit_code(r) == 1);
    CHECK(exit_code(ErrorCode::ParseError) == 2);
    CHECK(exit_code(ErrorCode::InvariantViolation) == 3);
}

TEST_CASE("solve resolves defaults and reports valid JSON") {
    auto g = latin_slab(30, 0.3);
    SolverConfig cfg;
    cfg.algorithm = "thm3";
    cfg.envelope.kind = EnvelopeKind::Zero;
    auto rep = solve(g, cfg, 1);
    CHECK(rep.params.at("q") == 30);
    CHECK(rep.params.at("eps") == doctest::Approx(0.3).epsilon(1e-3));
    auto j = nlohmann::json::parse(report_json(rep));
    CHECK(j.contains("outcome"));
    CHECK_FALSE(j.contains("wall_time_ms"));
    CHECK(nlohmann::json::parse(report_json(rep, true)).contains("wall_time_ms"));
    cfg.algorithm = "nope";
    CHECK(code_of([&] { solve(g, cfg, 1); }) == ErrorCode::ConfigInvalid);
}

TEST_CASE("campaign config parsing") {
    auto c = parse_campaign_config(R"({"algorithm":"thm3","trials":3,"base_seed":7,
        "params":{"eps":0.3},"envelope":{"kind":"zero"},
        "instance":{"kind":"random-thm3","q":20,"eps":0.3}})");
    CHECK(c.trials == 3);
    CHECK(c.base_seed == 7);
    CHECK(c.solver.eps == 0.3);
    CHECK(c.solver.envelope.kind == EnvelopeKind::Zero);
    REQUIRE(c.instance.has_value());
    CHECK(c.instance->q == 20);
    CHECK(code_of([] { parse_campaign_config("{"); }) == ErrorCode::ConfigInvalid);
    CHECK(code_of([] { parse_campaign_config(R"({"algorithm":"thm3","trials":0,"instance_file":"x"})"); }) ==
          ErrorCode::ConfigInvalid);
}

TEST_CASE("campaign output is identical for 1 and 3 workers") {
    auto cfg = parse_campaign_config(R"({"algorithm":"thm3","trials":4,"base_seed":11,
        "envelope":{"kind":"zero"},"instance":{"kind":"random-thm3","q":40,"eps":0.3}})");
    auto d1 = scratch_dir("w1"), d3 = scratch_dir("w3");
    cfg.output_dir = d1.string();
    auto r1 = run_campaign(cfg, 1);
    cfg.output_dir = d3.string();
    auto r3 = run_campaign(cfg, 3);
    CHECK(summary_json(r1) == summary_json(r3));
    REQUIRE(r1.trials.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r1.trials[i].seed == 11 + i);
        CHECK(report_json(r1.trials[i].report) == report_json(r3.trials[i].report));
    }
    for (const auto& f : fs::directory_iterator(d1)) {
        CHECK(fs::exists(d3 / f.path().filename()));
        CHECK(slurp(f.path()) == slurp(d3 / f.path().filename()));
    }
    CHECK(fs::exists(d1 / "summary.json"));
    CHECK(fs::exists(d1 / "trial_0000.json"));
    fs::remove_all(d1);
    fs::remove_all(d3);
}

TEST_CASE("verify_files") {
    auto d = scratch_dir("verify");
    auto g = EdgeColoredGraph::build(4, {{0, 1, 0}, {1, 2, 1}, {2, 3, 0}});
    save_ecg((d / "g.ecg").string(), g);
    write_file_atomic((d / "good.rmm").string(), "m 0 0\n");
    write_file_atomic((d / "inc.rmm").string(), "m 0 0\nm 1 1\n");
    write_file_atomic((d / "col.rmm").string(), "m 0 0\nm 2 0\n");
    write_file_atomic((d / "bad.rmm").string(), "m 9 0\n");
    std::ostringstream out;
    CHECK(verify_files((d / "g.ecg").string(), (d / "good.rmm").string(), out) == 0);
    CHECK(verify_files((d / "g.ecg").string(), (d / "inc.rmm").string(), out) == 1);
    CHECK(out.str().find("incidence violation") != std::string::npos);
    CHECK(verify_files((d / "g.ecg").string(), (d / "col.rmm").string(), out) == 1);
    CHECK(out.str().find("color violation") != std::string::npos);
    CHECK(verify_files((d / "g.ecg").string(), (d / "bad.rmm").string(), out) == 2);
    CHECK(verify_files((d / "missing.ecg").string(), (d / "good.rmm").string(), out) == 2);
    fs::remove_all(d);
}

TEST_CASE("worker resolution") {
    CHECK(resolve_workers(5) == 5);
    CHECK(resolve_workers(0) >= 1);
}
