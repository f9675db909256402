#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnm/graph.hpp"
#include "rnm/report.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

struct UniformParams {
    double q = 0.0;
    double Delta = 1.0;
    double eps = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    std::size_t retries = 20;
    std::uint64_t seed = 0;
    EnvelopeSpec envelope;
    bool valid = true;
    std::string invalid_reason;

    std::size_t iterations() const;
    // Recomputes gamma and the validity flag after fields were overridden.
    void finalize();
    ScheduleInputs schedule_inputs() const;
};

// eps = (D^2/q)^(1/6) (ln q)^2, eta = 1 - (D^2/q)^(1/6) ln q, delta = 2 (D^2/q)^(1/3).
// Flagged invalid when eps >= 1, eta <= 0 or delta >= 1.
UniformParams default_params(double q, double Delta);

// theta_t = delta / (1 - (t-1) delta); DenominatorNonpositive if that is not positive.
double activation_prob(std::size_t t, double delta);

double deletion_prob_a(std::size_t t, const UniformParams& p, double alpha, double beta);

// (a - p')/(1 - p') clamped to [0, 1]; clamped reports whether clamping changed it.
double step_residual_prob(double p_prime, double a, bool* clamped = nullptr);

struct UniformState {
    EdgeColoredGraph graph;
    std::size_t t = 0;
    std::size_t s_t = 0;  // integer class-size target at t
    double d_t = 0.0;     // degree cap at t
    RainbowMatching partial;
    std::vector<TrajectoryRecord> trajectory;
    ErrorSchedule schedule;
    std::size_t clamps = 0;
    std::size_t discards = 0;
};

// Copies g, computes the schedule and truncates classes to the t=0 target.
UniformState init_uniform_state(const EdgeColoredGraph& g, const UniformParams& p);

// One pass of Steps 1-7 using the randomness of (seed, t, attempt).
void iterate(UniformState& st, const UniformParams& p, std::uint64_t attempt = 0);

// Retries up to p.retries times; see Diagnostics for the counters it bumps.
void iterate_with_retry(UniformState& st, const UniformParams& p, Diagnostics& diag);

// Full pipeline: iterations then completion over every unmatched color.
RunReport run_uniform(const EdgeColoredGraph& g, const UniformParams& p);

}  // namespace rnm
