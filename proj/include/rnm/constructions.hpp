#pragma once

#include <cstdint>
#include <string>

#include "rnm/graph.hpp"

namespace rnm {

enum class InstanceKind {
    CyclicLatin,
    Prop2Counterexample,
    StarForest,
    K2qm1Tight,
    RandomThm1,
    RandomThm3,
    RandomThmq,
};

std::string to_string(InstanceKind kind);
InstanceKind parse_instance_kind(const std::string& name);  // ConfigInvalid on unknown

struct InstanceSpec {
    InstanceKind kind = InstanceKind::CyclicLatin;
    std::size_t n = 0;  // cyclic-latin order, star size
    std::size_t q = 0;
    std::size_t t = 0;  // prop2 counterexample
    double eps = 0.0;   // <= 0 for random-thm1 means "use the default formula"
    std::size_t delta_max = 1;
    std::uint64_t seed = 0;
    // Optional size knobs for the random kinds; 0 picks a default.
    std::size_t colors = 0;
    std::size_t vertices = 0;
};

// Rounds up with a little slack so 1.5*400 stays 600.
std::size_t ceil_count(double x);

EdgeColoredGraph cyclic_latin_coloring(std::size_t n);
// K_{q, ceil((1+eps)q)} cut from the cyclic square; rows are side A.
EdgeColoredGraph latin_slab(std::size_t q, double eps);
EdgeColoredGraph prop2_counterexample(std::size_t t);
EdgeColoredGraph star_forest(std::size_t q, std::size_t n);
EdgeColoredGraph k2qm1_tight(std::size_t q);
EdgeColoredGraph random_instance(const InstanceSpec& spec);
EdgeColoredGraph make_instance(const InstanceSpec& spec);

struct HypothesisReport {
    bool ok = true;
    std::string detail;
};

// Checks a random kind's hypotheses from snapshot_stats plus side-A degrees.
HypothesisReport check_hypotheses(const EdgeColoredGraph& g, const InstanceSpec& spec);

}  // namespace rnm
