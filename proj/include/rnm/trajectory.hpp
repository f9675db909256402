#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace rnm {

enum class CurveKind { Thm1, Thm3, Thmq };

std::string to_string(CurveKind kind);
CurveKind parse_curve_kind(const std::string& name);

// Shape parameters of the ideal curves. thm1/thm3: s=(1-gamma x)^2, g=1-gamma x.
// thmq: s = base^(M/(M-1)), g = base^(1/(M-1)), base = 1 - slope*x.
struct CurveParams {
    CurveKind kind = CurveKind::Thm1;
    double eps = 0.0;
    double gamma = 0.0;
    double theta = 0.0;  // thmq only
    double M = 2.0;      // thmq only
    double slope = 0.0;  // thmq only
    double eta = 0.0;

    static CurveParams thm1(double eps, double eta);
    static CurveParams thm3(double eps, double eta);
    // eta <= 0 selects the default horizon.
    static CurveParams thmq(double eps, double eta = 0.0);
    static double thmq_default_eta(double eps);
};

struct CurvePoint {
    double s;
    double g;
};

// OutOfDomain unless 0 <= x <= eta.
CurvePoint ideal(const CurveParams& p, double x);
// Same formulas without the horizon check (still requires the base to stay positive).
CurvePoint ideal_unchecked(const CurveParams& p, double x);

struct ScheduleInputs {
    CurveParams curve;
    double q = 0.0;
    double delta = 0.0;
    double Delta = 1.0;  // thm1 color degree
};

// s~_t, d~_t, d~'_t for the kind (d2 is 0 except for thmq).
struct IdealValues {
    double s = 0.0;
    double d = 0.0;
    double d2 = 0.0;
};
IdealValues ideal_values(const ScheduleInputs& in, std::size_t t);

struct ErrorSchedule {
    std::vector<double> y, z, alpha, beta;
};

// Published schedules for t = 0..T.
ErrorSchedule error_sequences(const ScheduleInputs& in, std::size_t T);

// thm3 closed form alpha_t = sqrt(delta)((1 + 10 delta/(1-gamma eta)^2)^t - 1).
double saturating_alpha(std::size_t t, double delta, double gamma, double eta);

// Where the per-iteration alpha/beta used by a solver come from.
enum class EnvelopeKind { Paper, Zero, Desk, Explicit };
std::string to_string(EnvelopeKind kind);
EnvelopeKind parse_envelope_kind(const std::string& name);

struct EnvelopeSpec {
    EnvelopeKind kind = EnvelopeKind::Paper;
    double sigmas = 3.0;         // Desk: fluctuation width in standard deviations
    std::vector<double> alpha;   // Explicit: per-t values, last one repeated
    std::vector<double> beta;
};

// alpha_t, beta_t for t = 0..T (y, z filled in for Paper only).
ErrorSchedule envelope_schedule(const ScheduleInputs& in, std::size_t T, const EnvelopeSpec& env);

struct IdentityGridPoint {
    double eps;
    double delta;
    double q;
    std::size_t t;
    double eta;
};

struct IdentityReport {
    std::size_t points = 0;
    double max_size_residual = 0.0;    // thm1 size identity, relative
    double max_degree_residual = 0.0;  // thm1 degree identity, relative
    double max_power_residual = 0.0;   // s = g^2 and s = g^M, absolute
    IdentityGridPoint worst{};
    double K = 0.0;        // thmq size inequality constant over the grid
    double K_prime = 0.0;  // thmq degree inequality constant over the grid
    bool ok = true;
};

// IdentityViolated when a residual exceeds tol and throw_on_violation is set.
IdentityReport check_identities(const std::vector<IdentityGridPoint>& grid, double tol = 1e-9, bool throw_on_violation = true);

// Random grid of (eps, delta, t, q, eta) with eps in (0, 0.5), delta in (0, 0.05).
std::vector<IdentityGridPoint> random_identity_grid(std::size_t n, unsigned long long seed);

struct TrajectoryRecord {
    std::size_t t = 0;
    double x = 0.0;
    // empirical; "size" is class size (thm1/thmq) or A-degree (thm3)
    double size_min = 0.0;
    double size_max = 0.0;
    double degree_max = 0.0;   // all vertices (thm1), B-degree (thm3), A-degree (thmq)
    double degree2_max = 0.0;  // class size (thm3), non-A degree (thmq)
    std::size_t matched = 0;
    std::size_t discards = 0;
    std::size_t clamps = 0;
    double a_fraction_max = 0.0;
    std::size_t alive_colors = 0;
    std::size_t alive_vertices = 0;
    // ideal and scheduled values at t
    double s_tilde = 0.0;
    double d_tilde = 0.0;
    double d2_tilde = 0.0;
    double size_target = 0.0;  // integer target the truncation used
    double alpha = 0.0;
    double beta = 0.0;
    // probabilities used by the iteration that starts at t
    double a = 0.0;
    double b = 0.0;
    double theta = 0.0;
    // flags
    std::size_t size_violations = 0;
    std::size_t degree_violations = 0;
    std::size_t a_fraction_violations = 0;
    std::size_t attempts = 0;
    bool degraded = false;
};

struct DeviationPoint {
    std::size_t t;
    double size_dev;    // (size_min - s~)/s~
    double degree_dev;  // (degree_max - d~)/d~
};

struct DeviationSummary {
    std::vector<DeviationPoint> points;
    double max_abs_size_dev = 0.0;
    double mean_abs_size_dev = 0.0;
    double final_size_dev = 0.0;
    double max_abs_degree_dev = 0.0;
    double mean_abs_degree_dev = 0.0;
    double final_degree_dev = 0.0;
    std::vector<std::size_t> flagged;  // t with size_min < (1-alpha)s~ or degree_max > (1+beta)d~
    std::size_t flag_count() const { return flagged.size(); }
};

DeviationSummary compare(const std::vector<TrajectoryRecord>& records);

// Curve CSV: t,x,s_ideal,g_ideal,alpha,beta,a_t,b_t,theta_t for t = 0..T.
void write_curve_csv(std::ostream& out, const ScheduleInputs& in, std::size_t T, const EnvelopeSpec& env);
// Run CSV: curve columns followed by the empirical columns of each record.
void write_run_csv(std::ostream& out, const CurveParams& curve, const std::vector<TrajectoryRecord>& records);

}  // namespace rnm
