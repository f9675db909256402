#pragma once

#include <cstddef>
#include <vector>

#include "rnm/graph.hpp"

namespace rnm {

struct OracleResult {
    std::size_t max_size = 0;
    RainbowMatching witness;
    std::size_t explored_nodes = 0;
    bool exact = true;  // false when the node budget ran out
};

constexpr std::size_t kDefaultNodeBudget = 200'000'000;

// Branch and bound over colors in increasing id order: for each color either one of
// its alive edges (increasing id) joins, or the color is skipped.
OracleResult max_rainbow_matching(const EdgeColoredGraph& g, std::size_t node_budget = kDefaultNodeBudget);

// BudgetExceeded if the budget runs out before the question is decided.
bool exists_rainbow_matching(const EdgeColoredGraph& g, std::size_t k, std::size_t node_budget = kDefaultNodeBudget);

// NotLatin unless every row and column is a permutation of 0..n-1.
std::size_t max_partial_transversal(const std::vector<std::vector<std::size_t>>& latin, std::size_t node_budget = kDefaultNodeBudget);

// Largest matching ignoring colors (exhaustive; small graphs only).
std::size_t max_matching_size(const EdgeColoredGraph& g);

}  // namespace rnm
