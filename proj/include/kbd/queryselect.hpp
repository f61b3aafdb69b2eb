#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "kbd/qpartition.hpp"

namespace kbd {

enum class SelectionStrategy { BreadthFirst, MinSum, MinMax };

SelectionStrategy parse_strategy(const std::string& name);
std::string to_string(SelectionStrategy s);

struct SelectionParams {
    SelectionStrategy strategy = SelectionStrategy::MinSum;
    std::chrono::milliseconds time_budget{1000};
    std::size_t n_min = 1;
    std::size_t n_max = 10;
};

// Traits of the D- members with duplicates and non-minimal supersets removed,
// ordered by size and then lexicographically.
std::vector<AxiomSet> set_min_traits(const CanonicalNode& node);

// Best set-minimal explicit-entailment queries for the node's q-partition:
// minimal hitting sets of the set-minimal traits, in strategy order.
std::vector<AxiomSet> select_queries(const CanonicalNode& node, const std::vector<double>& fault,
                                     const SelectionParams& params);

}  // namespace kbd
