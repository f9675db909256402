#include "rnm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rnm/errors.hpp"
#include "rnm/io.hpp"
#include "rnm/nibble_color_target.hpp"
#include "rnm/nibble_saturating.hpp"
#include "rnm/nibble_uniform.hpp"

namespace rnm {

using nlohmann::json;

namespace {

std::size_t min_a_degree(const EdgeColoredGraph& g) {
    std::size_t m = SIZE_MAX;
    for (VertexId a : g.part_a()) m = std::min(m, g.degree(a));
    return m == SIZE_MAX ? 0 : m;
}

RunReport dispatch(const EdgeColoredGraph& g, const SolverConfig& cfg, std::uint64_t seed) {
    GraphStats gs = snapshot_stats(g);
    if (cfg.algorithm == "thm1") {
        const double Delta = cfg.Delta.value_or(static_cast<double>(std::max<std::size_t>(gs.max_color_degree, 1)));
        const double q = cfg.q.value_or(static_cast<double>(std::max<std::size_t>(gs.max_degree, 1)));
        UniformParams p = default_params(q, Delta);
        if (cfg.eps) p.eps = *cfg.eps;
        if (cfg.delta) p.delta = *cfg.delta;
        if (cfg.eta) p.eta = *cfg.eta;
        if (cfg.retries) p.retries = *cfg.retries;
        p.seed = seed;
        p.envelope = cfg.envelope;
        p.finalize();
        return run_uniform(g, p);
    }
    if (cfg.algorithm == "thm3") {
        if (g.part_a().empty()) throw Error(ErrorCode::ConfigInvalid, "thm3 needs side A marked in the graph");
        const double q = cfg.q.value_or(static_cast<double>(g.part_a().size()));
        double eps = cfg.eps.value_or(static_cast<double>(min_a_degree(g)) / q - 1.0);
        if (!(eps > 0.0)) throw Error(ErrorCode::ConfigInvalid, "thm3: cannot derive eps > 0 from the A-degrees");
        SaturatingParams p = default_saturating_params(q, eps);
        if (cfg.delta) p.delta = *cfg.delta;
        if (cfg.eta) p.eta = *cfg.eta;
        p.seed = seed;
        p.envelope = cfg.envelope;
        p.finalize();
        return run_saturating(g, p);
    }
    if (cfg.algorithm == "thmq") {
        double q = 0.0;
        if (cfg.q) {
            q = *cfg.q;
        } else {
            std::size_t m = SIZE_MAX;
            for (ColorId c = 0; c < g.num_colors(); ++c)
                if (g.class_size(c) > 0) m = std::min(m, g.class_size(c));
            q = m == SIZE_MAX ? 0.0 : static_cast<double>(m);
        }
        if (!(q >= 1.0)) throw Error(ErrorCode::ConfigInvalid, "thmq: q must be at least 1");
        double eps = cfg.eps.value_or(static_cast<double>(gs.alive_colors) / (2.0 * q) - 1.0);
        bool fallback = false;
        if (!(eps > 0.0)) {
            eps = 0.05;
            fallback = true;
        }
        ColorTargetParams p = default_color_target_params(q, eps);
        if (cfg.delta) p.delta = *cfg.delta;
        if (cfg.eta) p.eta = *cfg.eta;
        if (cfg.retries) p.retries = *cfg.retries;
        p.seed = seed;
        p.envelope = cfg.envelope;
        p.finalize();
        RunReport rep = run_color_target(g, p);
        if (fallback) rep.diagnostics.warnings.insert(rep.diagnostics.warnings.begin(), "fewer than 2q colors; eps set to 0.05");
        return rep;
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown algorithm '" + cfg.algorithm + "'");
}

json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

json record_json(const TrajectoryRecord& r) {
    return json{{"t", r.t},
                {"x", num(r.x)},
                {"size_min", num(r.size_min)},
                {"size_max", num(r.size_max)},
                {"degree_max", num(r.degree_max)},
                {"degree2_max", num(r.degree2_max)},
                {"matched", r.matched},
                {"discards", r.discards},
                {"clamps", r.clamps},
                {"a_fraction_max", num(r.a_fraction_max)},
                {"alive_colors", r.alive_colors},
                {"alive_vertices", r.alive_vertices},
                {"s_tilde", num(r.s_tilde)},
                {"d_tilde", num(r.d_tilde)},
                {"d2_tilde", num(r.d2_tilde)},
                {"size_target", num(r.size_target)},
                {"alpha", num(r.alpha)},
                {"beta", num(r.beta)},
                {"a", num(r.a)},
                {"b", num(r.b)},
                {"theta", num(r.theta)},
                {"size_violations", r.size_violations},
                {"degree_violations", r.degree_violations},
                {"a_fraction_violations", r.a_fraction_violations},
                {"attempts", r.attempts},
                {"degraded", r.degraded}};
}

json report_to_json(const RunReport& rep, bool with_wall_time) {
    json j;
    j["algorithm"] = rep.algorithm;
    j["outcome"] = to_string(rep.outcome);
    j["target"] = rep.target;
    j["matched_count"] = rep.matched_count();
    j["verified"] = rep.verified;
    j["error"] = rep.error ? json(std::string(to_string(*rep.error))) : json(nullptr);
    j["error_message"] = rep.error_message;
    j["seed"] = rep.seed;
    json params = json::object();
    for (const auto& [k, v] : rep.params) params[k] = num(v);
    j["params"] = params;
    j["curve"] = {{"kind", to_string(rep.curve.kind)}, {"eps", num(rep.curve.eps)},     {"gamma", num(rep.curve.gamma)},
                  {"theta", num(rep.curve.theta)},     {"M", num(rep.curve.M)},         {"slope", num(rep.curve.slope)},
                  {"eta", num(rep.curve.eta)}};
    const Diagnostics& d = rep.diagnostics;
    j["diagnostics"] = {{"retries", d.retries},
                        {"clamps", d.clamps},
                        {"degraded_iterations", d.degraded_iterations},
                        {"discards", d.discards},
                        {"discard_bound", num(d.discard_bound)},
                        {"resamples", d.resamples},
                        {"size_violations", d.size_violations},
                        {"degree_violations", d.degree_violations},
                        {"a_fraction_violations", d.a_fraction_violations},
                        {"path", d.path},
                        {"warnings", d.warnings}};
    json m = json::array();
    for (const auto& en : rep.matching.entries) m.push_back({en.edge, en.color});
    j["matching"] = m;
    json tr = json::array();
    for (const auto& r : rep.trajectory) tr.push_back(record_json(r));
    j["trajectory"] = tr;
    if (with_wall_time) j["wall_time_ms"] = rep.wall_time_ms;
    return j;
}

template <class T>
std::optional<T> opt(const json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    return j[key].get<T>();
}

}  // namespace

RunReport solve(const EdgeColoredGraph& g, const SolverConfig& cfg, std::uint64_t seed) {
    auto t0 = std::chrono::steady_clock::now();
    RunReport rep = dispatch(g, cfg, seed);
    rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string report_json(const RunReport& rep, bool with_wall_time) { return report_to_json(rep, with_wall_time).dump(1) + "\n"; }

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::ParseError:
        case ErrorCode::LoopEdge:
        case ErrorCode::ParallelEdge:
        case ErrorCode::VertexOutOfRange:
        case ErrorCode::UnknownEdge:
        case ErrorCode::OddT:
        case ErrorCode::NotLatin:
        case ErrorCode::EmptyColor:
        case ErrorCode::OutOfDomain:
            return 2;
        case ErrorCode::InvariantViolation:
        case ErrorCode::AlreadyDead:
            return 3;
        default:
            return 1;
    }
}

int exit_code(const RunReport& rep) {
    if (!rep.verified) return 3;
    if (rep.outcome == Outcome::Full) return 0;
    if (rep.error) return exit_code(*rep.error);
    return 1;
}

CampaignConfig parse_campaign_config(const std::string& text) {
    CampaignConfig c;
    try {
        json j = json::parse(text);
        c.solver.algorithm = j.at("algorithm").get<std::string>();
        c.trials = j.value("trials", std::size_t{1});
        c.base_seed = j.value("base_seed", std::uint64_t{0});
        c.output_dir = j.value("output_dir", std::string{});
        if (j.contains("params")) {
            const json& p = j["params"];
            c.solver.q = opt<double>(p, "q");
            c.solver.eps = opt<double>(p, "eps");
            c.solver.delta = opt<double>(p, "delta");
            c.solver.eta = opt<double>(p, "eta");
            c.solver.Delta = opt<double>(p, "Delta");
            c.solver.retries = opt<std::size_t>(p, "retries");
        }
        if (j.contains("envelope")) {
            const json& e = j["envelope"];
            c.solver.envelope.kind = parse_envelope_kind(e.value("kind", std::string("paper")));
            c.solver.envelope.sigmas = e.value("sigmas", 3.0);
            c.solver.envelope.alpha = e.value("alpha", std::vector<double>{});
            c.solver.envelope.beta = e.value("beta", std::vector<double>{});
        }
        if (j.contains("instance")) {
            const json& i = j["instance"];
            InstanceSpec s;
            s.kind = parse_instance_kind(i.at("kind").get<std::string>());
            s.n = i.value("n", std::size_t{0});
            s.q = i.value("q", std::size_t{0});
            s.t = i.value("t", std::size_t{0});
            s.eps = i.value("eps", 0.0);
            s.delta_max = i.value("delta_max", std::size_t{1});
            s.colors = i.value("colors", std::size_t{0});
            s.vertices = i.value("vertices", std::size_t{0});
            c.instance = s;
        } else {
            c.instance_file = j.at("instance_file").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("campaign config: ") + e.what());
    }
    if (c.trials == 0) throw Error(ErrorCode::ConfigInvalid, "campaign config: trials must be positive");
    return c;
}

std::size_t resolve_workers(std::size_t requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RNM_WORKERS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

CampaignResult run_campaign(const CampaignConfig& cfg, std::size_t workers) {
    CampaignResult res;
    res.trials.resize(cfg.trials);
    std::optional<EdgeColoredGraph> shared;
    if (!cfg.instance) shared = load_ecg(cfg.instance_file);
    if (!cfg.output_dir.empty()) std::filesystem::create_directories(cfg.output_dir);

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next++; i < cfg.trials; i = next++) {
            TrialRecord& tr = res.trials[i];
            tr.seed = cfg.base_seed + i;
            try {
                EdgeColoredGraph g;
                if (cfg.instance) {
                    InstanceSpec s = *cfg.instance;
                    s.seed = tr.seed;
                    g = make_instance(s);
                }
                tr.report = solve(cfg.instance ? g : *shared, cfg.solver, tr.seed);
                tr.ran = true;
            } catch (const Error& e) {
                tr.setup_error = e.code();
                tr.setup_message = e.what();
            }
            if (!cfg.output_dir.empty() && tr.ran) {
                char name[32];
                std::snprintf(name, sizeof name, "trial_%04zu", i);
                const std::string base = cfg.output_dir + "/" + name;
                write_file_atomic(base + ".json", report_json(tr.report));
                std::ostringstream csv;
                write_run_csv(csv, tr.report.curve, tr.report.trajectory);
                write_file_atomic(base + ".csv", csv.str());
            }
        }
    };
    const std::size_t n = std::min(resolve_workers(workers), cfg.trials);
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();

    CampaignSummary& s = res.summary;
    s.trials = cfg.trials;
    std::size_t with_traj = 0;
    for (const TrialRecord& tr : res.trials) {
        if (!tr.ran) {
            ++s.errors[std::string(to_string(*tr.setup_error))];
            continue;
        }
        const RunReport& r = tr.report;
        if (r.outcome == Outcome::Full) ++s.successes;
        if (r.verified) ++s.verified;
        if (r.error) ++s.errors[std::string(to_string(*r.error))];
        s.mean_matched += static_cast<double>(r.matched_count());
        s.mean_target += static_cast<double>(r.target);
        s.mean_discards += static_cast<double>(r.diagnostics.discards);
        s.degraded_iterations += r.diagnostics.degraded_iterations;
        if (r.trajectory.size() > 1) {
            DeviationSummary d = compare(r.trajectory);
            s.mean_max_abs_size_dev += d.max_abs_size_dev;
            s.max_abs_size_dev = std::max(s.max_abs_size_dev, d.max_abs_size_dev);
            ++with_traj;
        }
    }
    const auto t = static_cast<double>(s.trials);
    s.success_rate = static_cast<double>(s.successes) / t;
    s.mean_matched /= t;
    s.mean_target /= t;
    s.mean_discards /= t;
    if (with_traj) s.mean_max_abs_size_dev /= static_cast<double>(with_traj);
    if (!cfg.output_dir.empty()) write_file_atomic(cfg.output_dir + "/summary.json", summary_json(res));
    return res;
}

std::string summary_json(const CampaignResult& r) {
    const CampaignSummary& s = r.summary;
    json j;
    j["trials"] = s.trials;
    j["successes"] = s.successes;
    j["success_rate"] = num(s.success_rate);
    j["verified"] = s.verified;
    j["mean_matched"] = num(s.mean_matched);
    j["mean_target"] = num(s.mean_target);
    j["mean_discards"] = num(s.mean_discards);
    j["degraded_iterations"] = s.degraded_iterations;
    j["deviation"] = {{"mean_max_abs_size_dev", num(s.mean_max_abs_size_dev)}, {"max_abs_size_dev", num(s.max_abs_size_dev)}};
    j["errors"] = s.errors;
    json per = json::array();
    for (const TrialRecord& tr : r.trials) {
        if (tr.ran)
            per.push_back({{"seed", tr.seed},
                           {"outcome", to_string(tr.report.outcome)},
                           {"matched", tr.report.matched_count()},
                           {"target", tr.report.target}});
        else
            per.push_back({{"seed", tr.seed}, {"outcome", "error"}, {"error", std::string(to_string(*tr.setup_error))}, {"message", tr.setup_message}});
    }
    j["per_trial"] = per;
    return j.dump(1) + "\n";
}

int verify_files(const std::string& graph_path, const std::string& matching_path, std::ostream& out) {
    try {
        EdgeColoredGraph g = load_ecg(graph_path);
        RainbowMatching m = load_rmm(matching_path, g);
        VerifyResult vr = verify_rainbow_matching(g, m);
        if (vr.ok) {
            out << "ok: " << m.size() << " entries form a rainbow matching\n";
            return 0;
        }
        for (const Violation& v : vr.violations) {
            switch (v.kind) {
                case ViolationKind::Incidence:
                    out << "incidence violation: entries " << v.first << " and " << v.second << " share vertex " << v.at << "\n";
                    break;
                case ViolationKind::Color:
                    out << "color violation: entries " << v.first << " and " << v.second << " share color " << v.at << "\n";
                    break;
                case ViolationKind::ColorMismatch:
                    out << "color mismatch: entry " << v.first << " claims color " << v.at << "\n";
                    break;
            }
        }
        return 1;
    } catch (const Error& e) {
        out << e.what() << "\n";
        return exit_code(e.code()) == 3 ? 3 : 2;
    }
}

}  // namespace rnm
