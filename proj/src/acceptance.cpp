#include "rnm/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "nibble_common.hpp"
#include "rnm/constructions.hpp"
#include "rnm/errors.hpp"
#include "rnm/harness.hpp"
#include "rnm/nibble_uniform.hpp"
#include "rnm/oracle.hpp"
#include "rnm/rng.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Plain subset enumeration, kept separate from the branch-and-bound oracle on purpose.
std::size_t enumerate_max_rainbow(const EdgeColoredGraph& g) {
    const std::size_t m = g.num_edges();
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::size_t cnt = static_cast<std::size_t>(__builtin_popcount(mask));
        if (cnt <= best) continue;
        std::uint64_t vs = 0, cs = 0;
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            if (!(mask >> i & 1u)) continue;
            const Edge& e = g.edge(static_cast<EdgeId>(i));
            std::uint64_t bits = (1ull << e.u) | (1ull << e.v);
            if ((vs & bits) || (cs >> e.c & 1ull)) ok = false;
            vs |= bits;
            cs |= 1ull << e.c;
        }
        if (ok) best = cnt;
    }
    return best;
}

CriterionResult start(int id, const char* name) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    return r;
}

struct Validity {
    std::size_t checked = 0;
    std::size_t failed = 0;
    std::vector<std::string> where;

    void check(const EdgeColoredGraph& g, const RainbowMatching& m, const std::string& tag) {
        ++checked;
        if (!verify_rainbow_matching(g, m).ok) {
            ++failed;
            if (where.size() < 5) where.push_back(tag);
        }
    }
};

struct Runs {
    std::optional<CampaignResult> thm3, thmq, thmq_small_delta, thm1_d1, thm1_d3;
};

CampaignConfig thm3_config() {
    CampaignConfig c;
    c.solver.algorithm = "thm3";
    c.solver.eps = 0.3;
    c.solver.envelope.kind = EnvelopeKind::Zero;
    InstanceSpec s;
    s.kind = InstanceKind::RandomThm3;
    s.q = 500;
    s.eps = 0.3;
    c.instance = s;
    c.trials = 20;
    c.base_seed = 1;
    return c;
}

CampaignConfig thmq_config(std::optional<double> delta) {
    CampaignConfig c;
    c.solver.algorithm = "thmq";
    c.solver.q = 500;
    c.solver.eps = 0.3;
    c.solver.delta = delta;
    c.solver.envelope.kind = EnvelopeKind::Zero;
    InstanceSpec s;
    s.kind = InstanceKind::RandomThmq;
    s.q = 500;
    s.eps = 0.3;
    c.instance = s;
    c.trials = 20;
    c.base_seed = 1;
    return c;
}

CampaignConfig thm1_config(std::size_t Delta) {
    CampaignConfig c;
    c.solver.algorithm = "thm1";
    c.solver.q = 400;
    c.solver.Delta = static_cast<double>(Delta);
    c.solver.eps = 0.5;
    c.solver.delta = 0.05;
    c.solver.eta = 0.6;
    c.solver.retries = 20;
    c.solver.envelope.kind = EnvelopeKind::Zero;
    InstanceSpec s;
    s.kind = InstanceKind::RandomThm1;
    s.q = 400;
    s.eps = 0.5;
    s.delta_max = Delta;
    c.instance = s;
    c.trials = 20;
    c.base_seed = 1;
    return c;
}

class Suite {
public:
    explicit Suite(const AcceptanceOptions& o) : opts_(o), workers_(resolve_workers(o.workers)) {}

    void note(const std::string& s) {
        if (opts_.progress) *opts_.progress << s << std::endl;
    }

    const CampaignResult& campaign(std::optional<CampaignResult>& slot, const CampaignConfig& cfg, const char* tag) {
        if (!slot) {
            note(std::string("  running campaign ") + tag + " (" + std::to_string(cfg.trials) + " trials)");
            slot = run_campaign(cfg, workers_);
            for (const auto& tr : slot->trials)
                if (tr.ran) {
                    InstanceSpec s = *cfg.instance;
                    s.seed = tr.seed;
                    solver_validity_.check(make_instance(s), tr.report.matching, std::string(tag) + " seed " + std::to_string(tr.seed));
                }
        }
        return *slot;
    }

    CriterionResult c1() {
        CriterionResult r = start(1, "oracle-soundness");
        std::size_t agree = 0;
        const std::size_t N = 1000;
        for (std::size_t i = 0; i < N; ++i) {
            Rng rng(20240601, Purpose::Generation, i);
            const std::size_t n = 2 + rng.index(7);
            const std::size_t k = 1 + rng.index(5);
            const std::size_t m = rng.index(11);
            std::vector<Edge> es;
            for (std::size_t tries = 0; es.size() < m && tries < 200; ++tries) {
                auto u = static_cast<VertexId>(rng.index(n)), v = static_cast<VertexId>(rng.index(n));
                if (u == v) continue;
                if (u > v) std::swap(u, v);
                bool dup = std::any_of(es.begin(), es.end(), [&](const Edge& e) { return e.u == u && e.v == v; });
                if (!dup) es.push_back({u, v, static_cast<ColorId>(rng.index(k))});
            }
            EdgeColoredGraph g = EdgeColoredGraph::build(n, es, k);
            OracleResult o = max_rainbow_matching(g);
            oracle_validity_.check(g, o.witness, "c1 graph " + std::to_string(i));
            if (o.exact && o.max_size == enumerate_max_rainbow(g) && o.witness.size() == o.max_size) ++agree;
        }
        r.pass = agree == N;
        r.detail = std::to_string(agree) + "/" + std::to_string(N) + " graphs agree with subset enumeration";
        return r;
    }

    CriterionResult c2() {
        CriterionResult r = start(2, "prop2-counterexample");
        r.pass = true;
        std::ostringstream d;
        for (std::size_t t : {2u, 4u, 6u}) {
            EdgeColoredGraph g = prop2_counterexample(t);
            OracleResult o = max_rainbow_matching(g);
            oracle_validity_.check(g, o.witness, "c2 t=" + std::to_string(t));
            bool ok = o.exact && o.max_size == t - 1;
            r.pass = r.pass && ok;
            d << "t=" << t << ":" << o.max_size << (o.exact ? "" : "(inexact)") << " ";
        }
        r.detail = d.str() + "(expected t-1)";
        return r;
    }

    CriterionResult c3() {
        CriterionResult r = start(3, "star-forest");
        std::size_t ok = 0, total = 0;
        std::string bad;
        for (std::size_t q = 3; q <= 6; ++q)
            for (std::size_t n = q; n <= q + 3; ++n) {
                ++total;
                EdgeColoredGraph g = star_forest(q, n);
                OracleResult o = max_rainbow_matching(g);
                oracle_validity_.check(g, o.witness, "c3");
                std::size_t um = max_matching_size(g);
                if (o.exact && o.max_size == q - 1 && um == q - 1)
                    ++ok;
                else if (bad.empty())
                    bad = " first mismatch q=" + std::to_string(q) + " n=" + std::to_string(n);
            }
        r.pass = ok == total;
        r.detail = std::to_string(ok) + "/" + std::to_string(total) + " (q,n) pairs with uncolored = rainbow = q-1" + bad;
        return r;
    }

    CriterionResult c4() {
        CriterionResult r = start(4, "k2qm1-tightness");
        r.pass = true;
        std::ostringstream d;
        for (std::size_t q : {3u, 4u}) {
            EdgeColoredGraph g = k2qm1_tight(q);
            std::size_t colors = 0;
            bool sizes = true;
            for (ColorId c = 0; c < g.num_colors(); ++c)
                if (g.class_size(c) > 0) {
                    ++colors;
                    sizes = sizes && g.class_size(c) == q;
                }
            GraphStats gs = snapshot_stats(g);
            OracleResult o = max_rainbow_matching(g);
            oracle_validity_.check(g, o.witness, "c4 q=" + std::to_string(q));
            bool ok = colors == 2 * q - 3 && sizes && gs.max_color_degree == 2 && o.exact && o.max_size <= q - 1;
            r.pass = r.pass && ok;
            d << "q=" << q << ": " << colors << " colors, sizes " << (sizes ? "=q" : "!=q") << ", max color degree "
              << gs.max_color_degree << ", max rainbow " << o.max_size << "; ";
        }
        r.detail = d.str();
        return r;
    }

    CriterionResult c5() {
        CriterionResult r = start(5, "latin-transversals");
        r.pass = true;
        std::ostringstream d;
        for (std::size_t n = 1; n <= 7; ++n) {
            std::vector<std::vector<std::size_t>> L(n, std::vector<std::size_t>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) L[i][j] = (i + j) % n;
            std::size_t got = max_partial_transversal(L);
            std::size_t want = n % 2 == 1 ? n : n - 1;
            r.pass = r.pass && got == want;
            d << "n=" << n << ":" << got << " ";
        }
        r.detail = d.str();
        return r;
    }

    CriterionResult c6() {
        CriterionResult r = start(6, "identity-suite");
        IdentityReport ir = check_identities(random_identity_grid(10000, 7), 1e-9, false);
        r.pass = ir.ok && ir.points == 10000;
        r.detail = std::to_string(ir.points) + " points, max size residual " + fmt("%.3g", ir.max_size_residual) +
                   ", max degree residual " + fmt("%.3g", ir.max_degree_residual) + ", max power residual " +
                   fmt("%.3g", ir.max_power_residual);
        return r;
    }

    CriterionResult c7() {
        CriterionResult r = start(7, "error-schedule-smallness");
        const double q = 1e6, Delta = 1.0;
        UniformParams p = default_params(q, Delta);
        const std::size_t T = p.iterations();
        ErrorSchedule s = error_sequences(p.schedule_inputs(), T);
        const double lq = std::log(q);
        const double ybound = std::pow(Delta * q, 2.0 / 3.0) * std::pow(lq, 2.5);
        const double zbound = std::pow(Delta * q, 2.0 / 3.0) * std::pow(lq, 3.75);
        double amax = 0.0, bmax = 0.0;
        for (std::size_t t = 0; t <= T; ++t) {
            amax = std::max(amax, s.alpha[t]);
            bmax = std::max(bmax, s.beta[t]);
        }
        r.pass = s.y[T] <= ybound && s.z[T] <= zbound && amax <= 0.01 && bmax <= 0.01;
        r.detail = "eps=" + fmt("%.4g", p.eps) + " eta=" + fmt("%.4g", p.eta) + " delta=" + fmt("%.4g", p.delta) + " horizon=" +
                   std::to_string(T) + " y_T=" + fmt("%.4g", s.y[T]) + "<=" + fmt("%.4g", ybound) + " z_T=" + fmt("%.4g", s.z[T]) +
                   "<=" + fmt("%.4g", zbound) + " max alpha=" + fmt("%.3g", amax) + " max beta=" + fmt("%.3g", bmax);
        if (T == 0) r.detail += " (vacuous: eta <= 0 leaves only t=0)";
        return r;
    }

    CriterionResult c8() {
        CriterionResult r = start(8, "output-validity");
        campaign(runs_.thm3, thm3_config(), "thm3");
        campaign(runs_.thmq, thmq_config(std::nullopt), "thmq");
        campaign(runs_.thm1_d1, thm1_config(1), "thm1-D1");
        campaign(runs_.thm1_d3, thm1_config(3), "thm1-D3");
        const std::size_t checked = solver_validity_.checked + oracle_validity_.checked;
        const std::size_t failed = solver_validity_.failed + oracle_validity_.failed;
        r.pass = failed == 0 && solver_validity_.checked > 0;
        r.detail = std::to_string(checked - failed) + "/" + std::to_string(checked) + " matchings verified (" +
                   std::to_string(solver_validity_.checked) + " from solvers, " + std::to_string(oracle_validity_.checked) +
                   " oracle witnesses)";
        for (const auto& w : solver_validity_.where) r.detail += "; failed: " + w;
        for (const auto& w : oracle_validity_.where) r.detail += "; failed: " + w;
        return r;
    }

    CriterionResult c9() {
        CriterionResult r = start(9, "nibble-saturating-desk");
        const CampaignResult& c = campaign(runs_.thm3, thm3_config(), "thm3");
        // per t: mean over trials of the min A-degree, against (1-alpha_t) s~_t
        std::map<std::size_t, std::pair<double, std::size_t>> min_sum;
        std::map<std::size_t, double> target;
        std::size_t horizon = 0;
        for (const auto& tr : c.trials) {
            if (!tr.ran) continue;
            horizon = static_cast<std::size_t>(tr.report.params.at("iterations"));
            for (const auto& rec : tr.report.trajectory) {
                min_sum[rec.t].first += rec.size_min;
                ++min_sum[rec.t].second;
                target[rec.t] = (1.0 - rec.alpha) * rec.s_tilde;
            }
        }
        double worst = 0.0;
        std::size_t worst_t = 0;
        std::ostringstream per;
        for (const auto& [t, acc] : min_sum) {
            if (t > horizon) continue;
            double mean = acc.first / static_cast<double>(acc.second);
            double dev = std::abs(mean - target[t]) / target[t];
            per << t << ":" << fmt("%.1f", 100.0 * dev) << "% ";
            if (dev > worst) {
                worst = dev;
                worst_t = t;
            }
        }
        const double rate = c.summary.success_rate;
        const bool sat_ok = rate >= 0.8;
        const bool dev_ok = worst <= 0.15 && !min_sum.empty();
        r.pass = sat_ok && dev_ok;
        r.detail = "saturated " + std::to_string(c.summary.successes) + "/" + std::to_string(c.summary.trials) + " (need 80%): " +
                   (sat_ok ? "ok" : "FAIL") + "; mean min A-degree deviation per t " + per.str() + "worst " +
                   fmt("%.1f", 100.0 * worst) + "% at t=" + std::to_string(worst_t) + " (need <= 15%): " + (dev_ok ? "ok" : "FAIL") +
                   "; zero envelope";
        return r;
    }

    CriterionResult c10() {
        CriterionResult r = start(10, "nibble-color-target-desk");
        const CampaignResult& c = campaign(runs_.thmq, thmq_config(std::nullopt), "thmq");
        std::size_t frac_bad = 0, boundaries = 0;
        double frac_max = 0.0;
        for (const auto& tr : c.trials)
            if (tr.ran)
                for (const auto& rec : tr.report.trajectory) {
                    ++boundaries;
                    frac_bad += rec.a_fraction_violations;
                    frac_max = std::max(frac_max, rec.a_fraction_max);
                }
        const bool reach_ok = c.summary.success_rate >= 0.7;
        const bool valid_ok = c.summary.verified == c.summary.trials;
        const bool frac_ok = frac_bad == 0 && boundaries > 0;
        r.pass = reach_ok && valid_ok && frac_ok;
        const double q = 500.0, delta = 1.0 / std::log(q);
        const double eta = CurveParams::thmq_default_eta(0.3);
        const std::size_t iters = detail::horizon(eta, delta), draws = detail::size_target(2.0 * delta * 1.3 * q);
        r.detail = "reached q " + std::to_string(c.summary.successes) + "/" + std::to_string(c.summary.trials) +
                   " (need 70%), mean matched " + fmt("%.1f", c.summary.mean_matched) + ": " + (reach_ok ? "ok" : "FAIL") +
                   "; verified " + std::to_string(c.summary.verified) + "/" + std::to_string(c.summary.trials) +
                   "; A-fraction violations " + std::to_string(frac_bad) + " over " + std::to_string(boundaries) +
                   " boundaries (max " + fmt("%.3g", frac_max) + ")" + "; default delta=1/ln q allows " + std::to_string(iters) +
                   " iterations x " + std::to_string(draws) + " draws = " + std::to_string(iters * draws) + " edges at most";
        const double small = 1.0 / std::pow(std::log(q), 3.0);
        const CampaignResult& s = campaign(runs_.thmq_small_delta, thmq_config(small), "thmq-delta-override");
        r.detail += "; supplementary (not counted) delta=1/ln^3 q=" + fmt("%.4g", small) + ": reached q " +
                    std::to_string(s.summary.successes) + "/" + std::to_string(s.summary.trials);
        return r;
    }

    CriterionResult c11() {
        CriterionResult r = start(11, "nibble-uniform-desk");
        const CampaignResult& a = campaign(runs_.thm1_d1, thm1_config(1), "thm1-D1");
        const CampaignResult& b = campaign(runs_.thm1_d3, thm1_config(3), "thm1-D3");
        const bool ok1 = a.summary.success_rate >= 0.7, ok3 = b.summary.success_rate >= 0.7;
        const bool valid = a.summary.verified == a.summary.trials && b.summary.verified == b.summary.trials;
        r.pass = ok1 && ok3 && valid;
        r.detail = "Delta=1: every color " + std::to_string(a.summary.successes) + "/" + std::to_string(a.summary.trials) +
                   ", Delta=3: " + std::to_string(b.summary.successes) + "/" + std::to_string(b.summary.trials) +
                   " (need 70% each); verified " + std::to_string(a.summary.verified + b.summary.verified) + "/" +
                   std::to_string(a.summary.trials + b.summary.trials) + "; zero envelope";
        return r;
    }

    CriterionResult c12() {
        CriterionResult r = start(12, "determinism");
        auto bytes = [](const CampaignResult& c) {
            std::string s = summary_json(c);
            for (const auto& tr : c.trials)
                if (tr.ran) s += report_json(tr.report);
            return s;
        };
        struct Case {
            const char* tag;
            CampaignConfig cfg;
        };
        std::vector<Case> cases;
        cases.push_back({"thm3", thm3_config()});
        CampaignConfig q = thmq_config(1.0 / std::pow(std::log(500.0), 3.0));
        q.trials = 4;
        cases.push_back({"thmq", q});
        CampaignConfig u = thm1_config(3);
        u.trials = 3;
        cases.push_back({"thm1", u});
        std::size_t same = 0;
        std::ostringstream d;
        for (const auto& c : cases) {
            note(std::string("  determinism: ") + c.tag + " with 1 and 3 workers, twice");
            std::string w1 = bytes(run_campaign(c.cfg, 1));
            std::string w3 = bytes(run_campaign(c.cfg, 3));
            std::string again = bytes(run_campaign(c.cfg, 3));
            bool ok = w1 == w3 && w3 == again;
            same += ok ? 1 : 0;
            d << c.tag << "(" << c.cfg.trials << " trials, " << w1.size() << " bytes): " << (ok ? "identical" : "DIFFERENT") << "; ";
        }
        r.pass = same == cases.size();
        r.detail = d.str();
        return r;
    }

private:
    AcceptanceOptions opts_;
    std::size_t workers_;
    Runs runs_;
    Validity solver_validity_, oracle_validity_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    Suite suite(opts);
    std::vector<std::function<CriterionResult()>> all = {
        [&] { return suite.c1(); }, [&] { return suite.c2(); },  [&] { return suite.c3(); },  [&] { return suite.c4(); },
        [&] { return suite.c5(); }, [&] { return suite.c6(); },  [&] { return suite.c7(); },  [&] { return suite.c9(); },
        [&] { return suite.c10(); }, [&] { return suite.c11(); }, [&] { return suite.c8(); }, [&] { return suite.c12(); }};
    // 8 runs after 9-11 so it can reuse their reports
    const int ids[] = {1, 2, 3, 4, 5, 6, 7, 9, 10, 11, 8, 12};
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), ids[i]) == opts.only.end()) continue;
        suite.note("criterion " + std::to_string(ids[i]) + " ...");
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[i]();
        } catch (const std::exception& e) {
            r.id = ids[i];
            r.name = "error";
            r.pass = false;
            r.detail = std::string("threw: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        suite.note("  " + format_result(r));
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "criterion %2d  %s  %-26s (%.1f s)  ", r.id, r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    std::string detail = r.detail;
    while (!detail.empty() && (detail.back() == ' ' || detail.back() == ';')) detail.pop_back();
    return head + detail;
}

}  // namespace rnm
