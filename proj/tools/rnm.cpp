#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rnm/acceptance.hpp"
#include "rnm/constructions.hpp"
#include "rnm/errors.hpp"
#include "rnm/harness.hpp"
#include "rnm/io.hpp"
#include "rnm/nibble_color_target.hpp"
#include "rnm/nibble_saturating.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/oracle.hpp"
#include "rnm/trajectory.hpp"

using namespace rnm;

namespace {

struct InstanceOpts {
    std::string kind;
    InstanceSpec spec;
};

void add_instance_opts(CLI::App* cmd, InstanceOpts& o) {
    cmd->add_option("--kind", o.kind, "cyclic-latin | prop2-counterexample | star-forest | k2qm1-tight | random-thm1 | random-thm3 | random-thmq");
    cmd->add_option("--n", o.spec.n, "order (cyclic-latin) or vertex count (star-forest)");
    cmd->add_option("--q", o.spec.q);
    cmd->add_option("--t", o.spec.t, "prop2 size parameter");
    cmd->add_option("--eps", o.spec.eps);
    cmd->add_option("--delta-max", o.spec.delta_max, "max color degree (random-thm1)");
    cmd->add_option("--colors", o.spec.colors);
    cmd->add_option("--vertices", o.spec.vertices);
}

EdgeColoredGraph build_instance(InstanceOpts o, std::uint64_t seed) {
    o.spec.kind = parse_instance_kind(o.kind);
    o.spec.seed = seed;
    return make_instance(o.spec);
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(path, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rainbow matchings in edge-colored graphs"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance (.ecg)");
    InstanceOpts gen_inst;
    std::string gen_out;
    add_instance_opts(gen, gen_inst);
    gen->get_option("--kind")->required();
    gen->add_option("--seed", seed);
    gen->add_option("-o,--out", gen_out, "output file (default stdout)");

    // solve
    auto* sol = app.add_subcommand("solve", "Run a nibble solver");
    SolverConfig scfg;
    std::string graph_file, report_file, matching_file, traj_file, env_kind = "paper";
    double q = 0, eps = 0, delta = 0, eta = 0, Delta = 0;
    std::size_t retries = 0;
    bool wall = false;
    sol->add_option("--alg", scfg.algorithm, "thm1 | thm3 | thmq")->required();
    sol->add_option("graph,--graph", graph_file, ".ecg input")->required();
    sol->add_option("--seed", seed);
    auto* o_q = sol->add_option("--q,--param-q", q, "override q");
    auto* o_eps = sol->add_option("--eps,--param-eps", eps, "override eps");
    auto* o_delta = sol->add_option("--delta", delta);
    auto* o_eta = sol->add_option("--eta", eta);
    auto* o_Delta = sol->add_option("--dmax,--Delta", Delta, "color degree bound (thm1)");
    auto* o_r = sol->add_option("--retries", retries);
    sol->add_option("--envelope", env_kind, "paper | zero | desk");
    sol->add_option("--sigmas", scfg.envelope.sigmas, "desk envelope width");
    sol->add_option("--report", report_file, "report JSON (default stdout)");
    sol->add_option("-o,--matching", matching_file, "write the matching (.rmm)");
    sol->add_option("--traj", traj_file, "write the trajectory CSV");
    sol->add_flag("--wall-time", wall, "include wall time in the report");

    // oracle
    auto* ora = app.add_subcommand("oracle", "Exact maximum rainbow matching");
    std::string ora_graph, ora_out;
    std::size_t budget = kDefaultNodeBudget;
    bool uncolored = false;
    ora->add_option("graph", ora_graph)->required();
    ora->add_option("--budget", budget, "node budget");
    ora->add_flag("--uncolored", uncolored, "also report the plain maximum matching");
    ora->add_option("-o,--witness,--matching", ora_out, "write the witness (.rmm)");
    std::size_t ora_k = 0;
    auto* o_k = ora->add_option("--k", ora_k, "only decide whether a rainbow matching of size k exists");

    // verify
    auto* ver = app.add_subcommand("verify", "Check a matching against a graph");
    std::string ver_graph, ver_match;
    ver->add_option("graph", ver_graph)->required();
    ver->add_option("matching", ver_match)->required();

    // traj
    auto* tra = app.add_subcommand("traj", "Ideal curves and scheduled envelopes as CSV");
    std::string tra_alg = "thm1", tra_out, tra_env = "paper";
    double tq = 0, teps = 0, tdelta = 0, teta = 0, tDelta = 1, tsig = 3;
    tra->add_option("--kind,--alg", tra_alg, "thm1 | thm3 | thmq");
    tra->add_option("--q", tq)->required();
    auto* t_eps = tra->add_option("--eps", teps);
    auto* t_delta = tra->add_option("--delta", tdelta);
    auto* t_eta = tra->add_option("--eta", teta);
    tra->add_option("--dmax,--Delta", tDelta);
    tra->add_option("--envelope", tra_env);
    tra->add_option("--sigmas", tsig);
    tra->add_option("-o,--out", tra_out);

    // campaign
    auto* cam = app.add_subcommand("campaign", "Seeded multi-trial run from a JSON config");
    std::string cam_cfg, cam_out;
    std::size_t workers = 0;
    cam->add_option("config", cam_cfg)->required();
    cam->add_option("--out", cam_out, "directory for per-trial reports (overrides the config)");
    cam->add_option("--workers", workers, "worker threads (default RNM_WORKERS or hardware)");

    // accept
    auto* acc = app.add_subcommand("accept", "Run the acceptance suite");
    std::vector<int> only;
    std::size_t acc_workers = 0;
    acc->add_option("--only", only, "criterion ids");
    acc->add_option("--workers", acc_workers);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            std::ostringstream os;
            write_ecg(os, build_instance(gen_inst, seed));
            write_or_print(gen_out, os.str());
            return 0;
        }
        if (*sol) {
            EdgeColoredGraph g = load_ecg(graph_file);
            if (*o_q) scfg.q = q;
            if (*o_eps) scfg.eps = eps;
            if (*o_delta) scfg.delta = delta;
            if (*o_eta) scfg.eta = eta;
            if (*o_Delta) scfg.Delta = Delta;
            if (*o_r) scfg.retries = retries;
            scfg.envelope.kind = parse_envelope_kind(env_kind);
            RunReport rep = solve(g, scfg, seed);
            write_or_print(report_file, report_json(rep, wall));
            if (!matching_file.empty()) save_rmm(matching_file, rep.matching);
            if (!traj_file.empty()) {
                std::ostringstream os;
                write_run_csv(os, rep.curve, rep.trajectory);
                write_file_atomic(traj_file, os.str());
            }
            std::cerr << to_string(rep.outcome) << ": " << rep.matched_count() << "/" << rep.target
                      << (rep.error_message.empty() ? "" : "  " + rep.error_message) << "\n";
            return exit_code(rep);
        }
        if (*ora) {
            EdgeColoredGraph g = load_ecg(ora_graph);
            if (*o_k) {
                bool yes = exists_rainbow_matching(g, ora_k, budget);
                std::cout << "exists k=" << ora_k << " " << (yes ? "true" : "false") << "\n";
                return yes ? 0 : 1;
            }
            OracleResult r = max_rainbow_matching(g, budget);
            std::cout << "max=" << r.max_size << " exact=" << (r.exact ? "true" : "false") << " explored=" << r.explored_nodes << "\n";
            if (uncolored) std::cout << "max_matching=" << max_matching_size(g) << "\n";
            if (!ora_out.empty()) save_rmm(ora_out, r.witness);
            return r.exact ? 0 : 1;
        }
        if (*ver) return verify_files(ver_graph, ver_match, std::cout);
        if (*tra) {
            ScheduleInputs in;
            std::size_t T = 0;
            if (tra_alg == "thm1") {
                UniformParams p = default_params(tq, tDelta);
                if (*t_eps) p.eps = teps;
                if (*t_delta) p.delta = tdelta;
                if (*t_eta) p.eta = teta;
                p.finalize();
                in = p.schedule_inputs();
                T = p.iterations();
            } else if (tra_alg == "thm3") {
                SaturatingParams p = default_saturating_params(tq, *t_eps ? teps : 0.05);
                if (*t_delta) p.delta = tdelta;
                if (*t_eta) p.eta = teta;
                p.finalize();
                in = p.schedule_inputs();
                T = p.iterations();
            } else if (tra_alg == "thmq") {
                ColorTargetParams p = default_color_target_params(tq, *t_eps ? teps : 0.05);
                if (*t_delta) p.delta = tdelta;
                if (*t_eta) p.eta = teta;
                p.finalize();
                in = p.schedule_inputs();
                T = p.iterations();
            } else {
                throw Error(ErrorCode::ConfigInvalid, "unknown algorithm '" + tra_alg + "'");
            }
            EnvelopeSpec env;
            env.kind = parse_envelope_kind(tra_env);
            env.sigmas = tsig;
            std::ostringstream os;
            write_curve_csv(os, in, T, env);
            write_or_print(tra_out, os.str());
            return 0;
        }
        if (*cam) {
            std::ifstream f(cam_cfg);
            if (!f) throw Error(ErrorCode::ConfigInvalid, "cannot read " + cam_cfg);
            std::stringstream ss;
            ss << f.rdbuf();
            CampaignConfig cfg = parse_campaign_config(ss.str());
            if (!cam_out.empty()) cfg.output_dir = cam_out;
            CampaignResult r = run_campaign(cfg, workers);
            std::cout << summary_json(r);
            return r.summary.successes == r.summary.trials ? 0 : 1;
        }
        if (*acc) {
            AcceptanceOptions opts;
            opts.only = only;
            opts.workers = acc_workers;
            opts.progress = &std::cerr;
            bool all = true;
            for (const auto& r : run_acceptance(opts)) {
                std::cout << format_result(r) << "\n";
                all = all && r.pass;
            }
            return all ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
