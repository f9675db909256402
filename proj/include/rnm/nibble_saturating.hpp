#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnm/graph.hpp"
#include "rnm/report.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

struct SaturatingParams {
    double q = 0.0;  // |A|
    double eps = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    std::uint64_t seed = 0;
    EnvelopeSpec envelope;
    std::vector<std::string> warnings;

    std::size_t iterations() const;
    std::size_t draws() const;  // ceil(delta q) per iteration
    void finalize();
    ScheduleInputs schedule_inputs() const;
};

// eta = 1 - eps^3, delta = 1/ln q.
SaturatingParams default_saturating_params(double q, double eps);

double saturating_deletion_prob(std::size_t t, const SaturatingParams& p, double alpha);

struct SaturatingState {
    EdgeColoredGraph graph;
    std::size_t t = 0;
    std::size_t s_t = 0;  // A-degree target
    double d_t = 0.0;     // cap on B-degrees and class sizes
    RainbowMatching partial;
    std::vector<TrajectoryRecord> trajectory;
    ErrorSchedule schedule;
    std::size_t clamps = 0;
    std::size_t discards = 0;
};

// Copies g (side A must be marked) and truncates A-degrees to ceil((1+eps)q),
// dropping the highest edge ids first.
SaturatingState init_saturating_state(const EdgeColoredGraph& g, const SaturatingParams& p);

// One pass of Steps 1-7. ADeadUnmatched if an A-vertex dies without being matched.
void iterate(SaturatingState& st, const SaturatingParams& p);

// Iterations, then greedy saturation of the remaining A-vertices (fewest options first).
RunReport run_saturating(const EdgeColoredGraph& g, const SaturatingParams& p);

}  // namespace rnm
