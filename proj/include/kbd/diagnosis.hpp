#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbd/dpi.hpp"
#include "kbd/partition.hpp"
#include "kbd/sets.hpp"

namespace kbd {

// Per-axiom fault probabilities in (0,1).
struct FaultModel {
    std::vector<double> fault;

    static FaultModel uniform(std::size_t n, double p = 0.5);
};

// Lines "axiom-index probability" (1-based index); missing axioms get 0.5.
FaultModel parse_fault_file(const std::string& text, std::size_t num_axioms);

std::optional<AxiomSet> quick_xplain(const DPI& dpi, const AxiomSet& candidate);

// Best-first HS-tree. Nodes are ordered by diagnosis probability, then by
// cardinality, then lexicographically. max_count == 0 means all diagnoses.
std::vector<AxiomSet> compute_leading_diagnoses(const DPI& dpi, const FaultModel& fm, std::size_t max_count);

// All minimal conflicts, obtained as the minimal hitting sets of all minimal
// diagnoses.
std::vector<AxiomSet> compute_all_conflicts(const DPI& dpi);

// Minimal hitting sets of a family of sets, sorted by cardinality then lexicographically.
std::vector<IndexSet> minimal_hitting_sets(const std::vector<IndexSet>& family);

// prod_{ax in D} f(ax) * prod_{ax in K\D} (1 - f(ax))
double diagnosis_weight(const FaultModel& fm, const AxiomSet& D);

std::vector<double> normalize(std::vector<double> w);
std::vector<double> diagnosis_probabilities(const FaultModel& fm, const std::vector<AxiomSet>& diags);

// Posterior p(D | Q = answer); throws if p(Q = answer) is zero.
std::vector<double> bayesian_update(const std::vector<double>& p, const QPartition& part, bool answer);

}  // namespace kbd
