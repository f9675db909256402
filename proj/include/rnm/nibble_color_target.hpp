#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnm/graph.hpp"
#include "rnm/report.hpp"
#include "rnm/trajectory.hpp"

namespace rnm {

struct ColorTargetParams {
    double q = 0.0;
    double eps = 0.0;
    double theta = 0.0;  // eps/2
    double gamma = 0.0;  // (1+theta)/(1+eps)
    double M = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    std::size_t retries = 1;
    std::uint64_t seed = 0;
    EnvelopeSpec envelope;
    std::vector<std::string> warnings;

    std::size_t iterations() const;
    std::size_t draws() const;  // ceil(2 delta (1+eps) q)
    // Recomputes theta, gamma, M; ConfigInvalid if M <= 2 or eta is outside its window.
    void finalize();
    ScheduleInputs schedule_inputs() const;
};

// eta from CurveParams::thmq_default_eta, delta = 1/ln q.
ColorTargetParams default_color_target_params(double q, double eps);

struct DeletionProbs {
    double a;  // A-vertices
    double b;  // everything else
};
DeletionProbs deletion_probs(std::size_t t, const ColorTargetParams& p, double alpha, double beta);

// Greedy augmentation with the three-color exchange when there are >= 2q^2 colors,
// the two-case procedure when there are >= 4q. Returns exactly q edges.
// AugmentStuck when neither branch applies or the exchange finds nothing.
RainbowMatching weaker_bound_solver(const EdgeColoredGraph& g, std::size_t q, std::uint64_t seed,
                                    std::vector<std::string>* log = nullptr);

struct Preprocessed {
    std::vector<VertexId> heavy;                  // A (the reduction's A when it fired); empty when nobody is heavy
    std::optional<RainbowMatching> direct;        // set when the reduction fired
    std::vector<std::string> log;
};

// Heavy = degree > 2(1+theta)q. Small heavy sets pass through as A; larger ones trigger
// the reduction (weaker_bound_solver + saturating nibble). ReductionFailed on failure.
Preprocessed preprocess(const EdgeColoredGraph& g, const ColorTargetParams& p);

struct ColorTargetState {
    EdgeColoredGraph graph;  // part A = heavy set
    std::size_t t = 0;
    std::size_t s_t = 0;
    double d_t = 0.0;   // A-degree cap
    double d2_t = 0.0;  // non-A cap
    RainbowMatching partial;
    std::vector<TrajectoryRecord> trajectory;
    ErrorSchedule schedule;
    std::size_t clamps = 0;
    std::size_t discards = 0;
};

ColorTargetState init_color_target_state(const EdgeColoredGraph& g, const std::vector<VertexId>& heavy,
                                         const ColorTargetParams& p);

// Steps 1-6 with the randomness of (seed, t, attempt).
void iterate(ColorTargetState& st, const ColorTargetParams& p, std::uint64_t attempt = 0);

// Largest |V_C cap A| / |V_C| over alive colors.
double max_a_fraction(const EdgeColoredGraph& g, std::size_t* violations = nullptr, double bound = 1.0);

RunReport run_color_target(const EdgeColoredGraph& g, const ColorTargetParams& p);

}  // namespace rnm
