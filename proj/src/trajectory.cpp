#include "rnm/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "rnm/errors.hpp"

namespace rnm {

namespace {

double thmq_slope(double eps, double theta, double gamma) { return 2.0 * (1.0 + eps) * (1.0 - theta + theta * gamma); }

// a~_t and b~_t at the ideal point (b~ is 0 for thm1/thm3)
std::pair<double, double> ideal_rates(const ScheduleInputs& in, std::size_t t) {
    const CurveParams& c = in.curve;
    double x = static_cast<double>(t) * in.delta;
    CurvePoint p = ideal_unchecked(c, x);
    double ratio = p.g / p.s;
    if (c.kind == CurveKind::Thmq) return {2.0 * (1.0 + c.eps) * in.delta * ratio, 2.0 * (1.0 + c.theta) * in.delta * ratio};
    return {c.gamma * in.delta * ratio, 0.0};
}

}  // namespace

std::string to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::Thm1: return "thm1";
        case CurveKind::Thm3: return "thm3";
        case CurveKind::Thmq: return "thmq";
    }
    return "unknown";
}

CurveKind parse_curve_kind(const std::string& name) {
    if (name == "thm1") return CurveKind::Thm1;
    if (name == "thm3") return CurveKind::Thm3;
    if (name == "thmq") return CurveKind::Thmq;
    throw Error(ErrorCode::ConfigInvalid, "unknown curve kind '" + name + "'");
}

CurveParams CurveParams::thm1(double eps, double eta) {
    CurveParams p;
    p.kind = CurveKind::Thm1;
    p.eps = eps;
    p.gamma = 1.0 / (1.0 + eps);
    p.eta = eta;
    return p;
}

CurveParams CurveParams::thm3(double eps, double eta) {
    CurveParams p = thm1(eps, eta);
    p.kind = CurveKind::Thm3;
    return p;
}

double CurveParams::thmq_default_eta(double eps) {
    double theta = eps / 2.0;
    double gamma = (1.0 + theta) / (1.0 + eps);
    return (1.0 / (2.0 * (1.0 + eps))) * (1.0 - theta / 2.0 + theta * gamma / 2.0) / (1.0 - theta + theta * gamma);
}

CurveParams CurveParams::thmq(double eps, double eta) {
    CurveParams p;
    p.kind = CurveKind::Thmq;
    p.eps = eps;
    p.theta = eps / 2.0;
    p.gamma = (1.0 + p.theta) / (1.0 + eps);
    p.M = ((1.0 - p.theta) + (1.0 + p.theta) * p.gamma) / p.gamma;
    p.slope = thmq_slope(eps, p.theta, p.gamma);
    p.eta = eta > 0.0 ? eta : thmq_default_eta(eps);
    return p;
}

CurvePoint ideal_unchecked(const CurveParams& p, double x) {
    if (p.kind == CurveKind::Thmq) {
        double base = 1.0 - p.slope * x;
        if (!(base > 0.0)) throw Error(ErrorCode::OutOfDomain, "thmq curve base nonpositive at x=" + std::to_string(x));
        return {std::pow(base, p.M / (p.M - 1.0)), std::pow(base, 1.0 / (p.M - 1.0))};
    }
    double g = 1.0 - p.gamma * x;
    if (!(g > 0.0)) throw Error(ErrorCode::OutOfDomain, "curve nonpositive at x=" + std::to_string(x));
    return {g * g, g};
}

CurvePoint ideal(const CurveParams& p, double x) {
    if (!(x >= 0.0) || x > p.eta + 1e-12)
        throw Error(ErrorCode::OutOfDomain, "x=" + std::to_string(x) + " outside [0, " + std::to_string(p.eta) + "]");
    return ideal_unchecked(p, x);
}

IdealValues ideal_values(const ScheduleInputs& in, std::size_t t) {
    const CurveParams& c = in.curve;
    double x = static_cast<double>(t) * in.delta;
    CurvePoint p = ideal_unchecked(c, x);
    IdealValues v;
    switch (c.kind) {
        case CurveKind::Thm1:
        case CurveKind::Thm3:
            v.s = p.s * (1.0 + c.eps) * in.q;
            v.d = (1.0 - x) * p.g * in.q;
            break;
        case CurveKind::Thmq:
            v.s = p.s * in.q;
            v.d = 2.0 * (1.0 - x) * p.g * (1.0 + c.eps) * in.q;
            v.d2 = 2.0 * (1.0 - x) * p.g * (1.0 + c.theta) * in.q;
            break;
    }
    return v;
}

double saturating_alpha(std::size_t t, double delta, double gamma, double eta) {
    double f = 1.0 + 10.0 * delta / ((1.0 - gamma * eta) * (1.0 - gamma * eta));
    return std::sqrt(delta) * (std::pow(f, static_cast<double>(t)) - 1.0);
}

ErrorSchedule error_sequences(const ScheduleInputs& in, std::size_t T) {
    ErrorSchedule s;
    s.y.assign(T + 1, 0.0);
    s.z.assign(T + 1, 0.0);
    s.alpha.assign(T + 1, 0.0);
    s.beta.assign(T + 1, 0.0);
    const CurveParams& c = in.curve;
    const double q = in.q, d = in.delta;
    switch (c.kind) {
        case CurveKind::Thm1: {
            const double lq = std::log(q);
            const double noise = 2.0 * in.Delta * std::sqrt(d * q) * lq;
            for (std::size_t t = 0; t < T; ++t) {
                double td = static_cast<double>(t) * d;
                s.y[t + 1] = s.y[t] + 2.0 * d * d * q * lq * lq * (1.0 - c.gamma * td) / (1.0 - td) + 2.0 * noise;
                s.z[t + 1] = s.z[t] + d * d * q + noise + (2.0 * d / (1.0 - td)) * s.y[t];
            }
            break;
        }
        case CurveKind::Thm3:
            for (std::size_t t = 0; t <= T; ++t) {
                IdealValues iv = ideal_values(in, t);
                double a = saturating_alpha(t, d, c.gamma, c.eta);
                s.alpha[t] = s.beta[t] = a;
                s.z[t] = a * iv.s;
                s.y[t] = a * iv.d;
            }
            return s;
        case CurveKind::Thmq:
            for (std::size_t t = 0; t <= T; ++t) {
                s.y[t] = static_cast<double>(t) * std::pow(d, 1.5) * q;
                s.z[t] = static_cast<double>(t) * std::pow(d, 1.25) * q;
            }
            break;
    }
    for (std::size_t t = 0; t <= T; ++t) {
        IdealValues iv = ideal_values(in, t);
        s.alpha[t] = s.z[t] / iv.s;
        s.beta[t] = s.y[t] / iv.d;
    }
    return s;
}

std::string to_string(EnvelopeKind kind) {
    switch (kind) {
        case EnvelopeKind::Paper: return "paper";
        case EnvelopeKind::Zero: return "zero";
        case EnvelopeKind::Desk: return "desk";
        case EnvelopeKind::Explicit: return "explicit";
    }
    return "unknown";
}

EnvelopeKind parse_envelope_kind(const std::string& name) {
    for (auto k : {EnvelopeKind::Paper, EnvelopeKind::Zero, EnvelopeKind::Desk, EnvelopeKind::Explicit})
        if (to_string(k) == name) return k;
    throw Error(ErrorCode::ConfigInvalid, "unknown envelope '" + name + "'");
}

// Desk envelope: the published recursions with their w.v.h.p. noise terms replaced
// by k binomial standard deviations at the scheduled rates. Size deficits z add up
// because the inflated deletion rate removes the ideal absolute number of edges;
// degree excess y is a thinned random walk plus the drift from colors that were
// activated but not matched.
ErrorSchedule desk_envelope(const ScheduleInputs& in, std::size_t T, double k) {
    ErrorSchedule s;
    s.y.assign(T + 1, 0.0);
    s.z.assign(T + 1, 0.0);
    s.alpha.assign(T + 1, 0.0);
    s.beta.assign(T + 1, 0.0);
    const CurveParams& c = in.curve;
    const double d = in.delta;
    double var = 0.0, drift = 0.0;
    for (std::size_t t = 0;; ++t) {
        IdealValues iv = ideal_values(in, t);
        double alpha = std::min(s.z[t] / iv.s, 0.999);
        double beta = c.kind == CurveKind::Thm3 ? alpha : s.y[t] / iv.d;
        s.alpha[t] = alpha;
        s.beta[t] = beta;
        if (t == T) break;
        IdealValues nv = ideal_values(in, t + 1);
        auto [at_ideal, bt_ideal] = ideal_rates(in, t);
        double infl = (1.0 + beta) / (1.0 - alpha);
        double size_now = std::max(iv.s - s.z[t], 1.0);
        double td = static_cast<double>(t) * d;
        double col = d / (1.0 - td);  // per-iteration color removal rate
        double loss_ideal = 0.0, p_size = 0.0, p_deg = 0.0, conflict = 0.0, mult = 1.0;
        switch (c.kind) {
            case CurveKind::Thm1: {
                double a = std::min(at_ideal * infl, 1.0);
                loss_ideal = 2.0 * at_ideal;
                p_size = 1.0 - (1.0 - a) * (1.0 - a);
                p_deg = 1.0 - (1.0 - a) * (1.0 - col);
                CurvePoint cp = ideal_unchecked(c, td);
                conflict = 1.0 - std::exp(-2.0 * c.gamma * d / cp.g);
                mult = in.Delta;
                break;
            }
            case CurveKind::Thm3: {
                double a = std::min(at_ideal * infl, 1.0);
                loss_ideal = 2.0 * at_ideal;
                p_size = 1.0 - (1.0 - a) * (1.0 - a);
                break;
            }
            case CurveKind::Thmq: {
                double a = std::min(at_ideal * infl, 1.0), b = std::min(bt_ideal * infl, 1.0);
                loss_ideal = (1.0 - c.theta) * at_ideal + (1.0 + c.theta) * bt_ideal;
                p_size = std::min((1.0 - c.theta) * a + (1.0 + c.theta) * b, 1.0);
                p_deg = 1.0 - (1.0 - b) * (1.0 - col);
                double batch = 2.0 * d * (1.0 + c.eps) * in.q;
                double edges = 2.0 * (1.0 + c.eps) * in.q * (1.0 - td) * iv.s;
                conflict = std::min(1.0, batch * (2.0 * iv.d + iv.s) / (2.0 * edges));
                break;
            }
        }
        double sigma = std::sqrt(mult * size_now * p_size * (1.0 - p_size));
        // the inflation term equals loss_ideal * beta * s~ (2 a~ beta s~ for thm1)
        double gap = nv.s - (1.0 - loss_ideal) * iv.s;
        double coupling = c.kind == CurveKind::Thm3 ? loss_ideal * alpha * iv.s : loss_ideal * beta * iv.s;
        s.z[t + 1] = s.z[t] + coupling + gap + k * sigma;
        if (c.kind == CurveKind::Thm3) {
            s.y[t + 1] = s.z[t + 1] / nv.s * nv.d;
        } else {
            var = (1.0 - p_deg) * (1.0 - p_deg) * var + mult * iv.d * p_deg * (1.0 - p_deg);
            drift = (1.0 - p_deg) * drift + col * conflict * iv.d;
            s.y[t + 1] = drift + k * std::sqrt(var);
        }
    }
    return s;
}

ErrorSchedule envelope_schedule(const ScheduleInputs& in, std::size_t T, const EnvelopeSpec& env) {
    switch (env.kind) {
        case EnvelopeKind::Paper: return error_sequences(in, T);
        case EnvelopeKind::Desk: return desk_envelope(in, T, env.sigmas);
        case EnvelopeKind::Zero:
        case EnvelopeKind::Explicit: break;
    }
    ErrorSchedule s;
    s.y.assign(T + 1, 0.0);
    s.z.assign(T + 1, 0.0);
    s.alpha.assign(T + 1, 0.0);
    s.beta.assign(T + 1, 0.0);
    if (env.kind == EnvelopeKind::Explicit) {
        if (env.alpha.empty()) throw Error(ErrorCode::ConfigInvalid, "explicit envelope needs alpha values");
        const auto& beta = env.beta.empty() ? env.alpha : env.beta;
        for (std::size_t t = 0; t <= T; ++t) {
            s.alpha[t] = env.alpha[std::min(t, env.alpha.size() - 1)];
            s.beta[t] = beta[std::min(t, beta.size() - 1)];
            if (!(s.alpha[t] < 1.0)) throw Error(ErrorCode::ConfigInvalid, "explicit alpha must be < 1");
        }
    }
    for (std::size_t t = 0; t <= T; ++t) {
        IdealValues iv = ideal_values(in, t);
        s.z[t] = s.alpha[t] * iv.s;
        s.y[t] = s.beta[t] * iv.d;
    }
    return s;
}

IdentityReport check_identities(const std::vector<IdentityGridPoint>& grid, double tol, bool throw_on_violation) {
    IdentityReport r;
    double worst = -1.0;
    for (const auto& pt : grid) {
        ++r.points;
        const double t = static_cast<double>(pt.t);
        // thm1 identities
        ScheduleInputs in{CurveParams::thm1(pt.eps, pt.eta), pt.q, pt.delta, 1.0};
        IdealValues v0 = ideal_values(in, pt.t), v1 = ideal_values(in, pt.t + 1);
        double a = ideal_rates(in, pt.t).first;
        double g = in.curve.gamma;
        double lhs = (1.0 - 2.0 * a) * v0.s;
        double rhs = v1.s - g * g * pt.delta * pt.delta * (1.0 + pt.eps) * pt.q;
        double size_res = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        double dl = (1.0 - a) * (1.0 - pt.delta / (1.0 - t * pt.delta)) * v0.d;
        double deg_res = std::abs(dl - v1.d) / std::max(std::abs(v1.d), 1e-300);
        r.max_size_residual = std::max(r.max_size_residual, size_res);
        r.max_degree_residual = std::max(r.max_degree_residual, deg_res);

        // pointwise power laws at the grid x
        double x = t * pt.delta;
        CurvePoint p1 = ideal_unchecked(in.curve, x);
        double pow_res = std::abs(p1.s - p1.g * p1.g);
        CurveParams cq = CurveParams::thmq(pt.eps);
        double xq = std::min(x, cq.eta);
        CurvePoint pq = ideal_unchecked(cq, xq);
        pow_res = std::max(pow_res, std::abs(pq.s - std::pow(pq.g, cq.M)));
        r.max_power_residual = std::max(r.max_power_residual, pow_res);

        double score = std::max({size_res / tol, deg_res / tol, pow_res / 1e-12});
        if (score > worst) {
            worst = score;
            r.worst = pt;
        }

        // thmq inequality constants, at the largest step inside its own horizon
        ScheduleInputs iq{cq, pt.q, pt.delta, 1.0};
        auto tq_max = static_cast<std::size_t>(std::floor(cq.eta / pt.delta + 1e-9));
        if (tq_max >= 1) {
            std::size_t tq = std::min(pt.t, tq_max - 1);
            IdealValues q0 = ideal_values(iq, tq), q1 = ideal_values(iq, tq + 1);
            auto [aq, bq] = ideal_rates(iq, tq);
            double scale = pt.delta * pt.delta * pt.q;
            double k = (q1.s - (1.0 - (1.0 - cq.theta) * aq - (1.0 + cq.theta) * bq) * q0.s) / scale;
            double shrink = (1.0 - bq) * (1.0 - pt.delta / (1.0 - static_cast<double>(tq) * pt.delta));
            double k1 = (shrink * q0.d - q1.d) / scale;
            double k2 = (shrink * q0.d2 - q1.d2) / scale;
            r.K = std::max(r.K, k);
            r.K_prime = std::max({r.K_prime, k1, k2});
        }
    }
    r.ok = r.max_size_residual < tol && r.max_degree_residual < tol && r.max_power_residual < 1e-12;
    if (!r.ok && throw_on_violation)
        throw Error(ErrorCode::IdentityViolated, "worst point eps=" + std::to_string(r.worst.eps) + " delta=" + std::to_string(r.worst.delta) +
                                                     " t=" + std::to_string(r.worst.t) + " q=" + std::to_string(r.worst.q));
    return r;
}

std::vector<IdentityGridPoint> random_identity_grid(std::size_t n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<IdentityGridPoint> grid;
    grid.reserve(n);
    while (grid.size() < n) {
        IdentityGridPoint p{};
        p.eps = 0.5 * u01(rng);
        p.delta = 0.05 * u01(rng);
        if (p.eps <= 1e-6 || p.delta <= 1e-6) continue;
        p.q = std::pow(10.0, 3.0 + 3.0 * u01(rng));
        p.eta = 0.05 + 0.9 * u01(rng);
        auto horizon = static_cast<std::size_t>(std::floor(p.eta / p.delta));
        if (horizon == 0) continue;
        // t+1 must stay inside the horizon for the step identities
        p.t = static_cast<std::size_t>(u01(rng) * static_cast<double>(horizon));
        if (p.t >= horizon) p.t = horizon - 1;
        grid.push_back(p);
    }
    return grid;
}

DeviationSummary compare(const std::vector<TrajectoryRecord>& records) {
    DeviationSummary s;
    if (records.empty()) return s;
    double sum_s = 0.0, sum_d = 0.0;
    for (const auto& r : records) {
        DeviationPoint p{r.t, 0.0, 0.0};
        if (r.s_tilde > 0.0) p.size_dev = (r.size_min - r.s_tilde) / r.s_tilde;
        if (r.d_tilde > 0.0) p.degree_dev = (r.degree_max - r.d_tilde) / r.d_tilde;
        s.points.push_back(p);
        s.max_abs_size_dev = std::max(s.max_abs_size_dev, std::abs(p.size_dev));
        s.max_abs_degree_dev = std::max(s.max_abs_degree_dev, std::abs(p.degree_dev));
        sum_s += std::abs(p.size_dev);
        sum_d += std::abs(p.degree_dev);
        bool low = r.size_min < (1.0 - r.alpha) * r.s_tilde - 1e-9;
        bool high = r.d_tilde > 0.0 && r.degree_max > (1.0 + r.beta) * r.d_tilde + 1e-9;
        if (low || high) s.flagged.push_back(r.t);
    }
    s.mean_abs_size_dev = sum_s / static_cast<double>(records.size());
    s.mean_abs_degree_dev = sum_d / static_cast<double>(records.size());
    s.final_size_dev = s.points.back().size_dev;
    s.final_degree_dev = s.points.back().degree_dev;
    return s;
}

namespace {

void curve_columns(std::ostream& out, const CurveParams& c, double delta, std::size_t t, double alpha, double beta, double a,
                   double b, double theta) {
    double x = static_cast<double>(t) * delta;
    CurvePoint p = ideal_unchecked(c, x);
    out << t << ',' << x << ',' << p.s << ',' << p.g << ',' << alpha << ',' << beta << ',' << a << ',' << b << ',' << theta;
}

}  // namespace

void write_curve_csv(std::ostream& out, const ScheduleInputs& in, std::size_t T, const EnvelopeSpec& env) {
    ErrorSchedule sch = envelope_schedule(in, T, env);
    out.precision(12);
    out << "t,x,s_ideal,g_ideal,alpha,beta,a_t,b_t,theta_t\n";
    const CurveParams& c = in.curve;
    for (std::size_t t = 0; t <= T; ++t) {
        auto [ai, bi] = ideal_rates(in, t);
        double alpha = sch.alpha[t], beta = sch.beta[t];
        double infl = (1.0 + beta) / (1.0 - alpha);
        double a = ai * infl, b = bi * infl, theta = 0.0;
        if (c.kind == CurveKind::Thm1) theta = in.delta / (1.0 - static_cast<double>(t) * in.delta);
        if (c.kind == CurveKind::Thm3) a = ai * (1.0 + alpha) / (1.0 - alpha);
        if (c.kind == CurveKind::Thmq) theta = c.theta;
        curve_columns(out, c, in.delta, t, alpha, beta, a, b, theta);
        out << '\n';
    }
}

void write_run_csv(std::ostream& out, const CurveParams& curve, const std::vector<TrajectoryRecord>& records) {
    out.precision(12);
    out << "t,x,s_ideal,g_ideal,alpha,beta,a_t,b_t,theta_t,size_min,size_max,degree_max,degree2_max,matched,discards,clamps,"
           "a_fraction_max,alive_colors,alive_vertices,s_tilde,d_tilde,d2_tilde,size_target,size_violations,degree_violations,"
           "a_fraction_violations,attempts,degraded\n";
    for (const auto& r : records) {
        double delta = r.t == 0 ? 0.0 : r.x / static_cast<double>(r.t);
        curve_columns(out, curve, delta, r.t, r.alpha, r.beta, r.a, r.b, r.theta);
        out << ',' << r.size_min << ',' << r.size_max << ',' << r.degree_max << ',' << r.degree2_max << ',' << r.matched << ','
            << r.discards << ',' << r.clamps << ',' << r.a_fraction_max << ',' << r.alive_colors << ',' << r.alive_vertices << ','
            << r.s_tilde << ',' << r.d_tilde << ',' << r.d2_tilde << ',' << r.size_target << ',' << r.size_violations << ','
            << r.degree_violations << ',' << r.a_fraction_violations << ',' << r.attempts << ',' << (r.degraded ? 1 : 0) << '\n';
    }
}

}  // namespace rnm
