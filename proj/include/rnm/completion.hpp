#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnm/graph.hpp"

namespace rnm {

// One part per color; the part's nodes are that color's alive edges (ascending id).
// Two nodes conflict iff the edges share an endpoint; this is read off g's
// incidence lists instead of being stored.
struct PartitionedConflictInstance {
    const EdgeColoredGraph* graph = nullptr;
    std::vector<ColorId> colors;
    std::vector<std::vector<EdgeId>> parts;

    std::size_t num_parts() const { return parts.size(); }
    bool conflict(EdgeId a, EdgeId b) const;
    // Number of nodes (over all parts) conflicting with e.
    std::size_t conflict_degree(EdgeId e) const;
    std::size_t max_conflict_degree() const;
};

// EmptyColor if a listed color is dead or has no alive edge.
PartitionedConflictInstance build_conflict_instance(const EdgeColoredGraph& g, const std::vector<ColorId>& colors);

struct TransversalResult {
    bool success = false;
    std::vector<EdgeId> choice;  // one node per part, same order as parts
    std::size_t resamples = 0;
    std::size_t conflicts = 0;  // conflicting pairs left in the final state
};

// 0 selects 1000 * number of parts.
TransversalResult independent_transversal(const PartitionedConflictInstance& inst, std::uint64_t seed, std::size_t resample_budget = 0);

struct CompletionResult {
    RainbowMatching matching;
    std::size_t resamples = 0;
    bool hypothesis_met = true;  // every class >= 4e * maxdeg
    std::vector<std::string> warnings;
};

// Rainbow matching using every color in `colors`. CompletionFailed on budget exhaustion.
CompletionResult complete_rainbow_matching(const EdgeColoredGraph& g, const std::vector<ColorId>& colors, std::uint64_t seed,
                                           std::size_t resample_budget = 0);

// Targets: A-vertices to saturate (processed in the given order), or a number of
// extra colors. GreedyStuck names the first blocked target.
RainbowMatching greedy_complete_vertices(const EdgeColoredGraph& g, const RainbowMatching& partial, const std::vector<VertexId>& targets);
RainbowMatching greedy_complete_colors(const EdgeColoredGraph& g, const RainbowMatching& partial, std::size_t count);

}  // namespace rnm
