#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kbd/measures.hpp"
#include "kbd/partition.hpp"
#include "kbd/sets.hpp"

namespace kbd {

// A partition <D+, D-, {}> in standard representation. Diagnosis indices refer
// to the leading-diagnosis list the node was built from.
struct CanonicalNode {
    DiagSet dplus;
    DiagSet dminus;
    AxiomSet udplus;
    std::vector<AxiomSet> traits;  // traits[i] belongs to dminus[i]

    QPartition partition() const { return QPartition{dplus, dminus, {}}; }
};

CanonicalNode make_node(const DiagSet& dplus, const std::vector<AxiomSet>& diags);

AxiomSet union_of(const DiagSet& s, const std::vector<AxiomSet>& diags);
AxiomSet intersection_of(const DiagSet& s, const std::vector<AxiomSet>& diags);

// U_D \ I_D
AxiomSet discrimination_axioms(const std::vector<AxiomSet>& diags);

// (K \ U_S) ∩ DiscAx; nullopt when empty. Throws unless {} ⊂ S ⊂ D.
std::optional<AxiomSet> canonical_query(const DiagSet& seed, const std::vector<AxiomSet>& diags);

bool is_canonical_qpartition(const DiagSet& dplus, const DiagSet& dminus, const std::vector<AxiomSet>& diags);

// Successors by minimal D+-transformation. The root is the node with empty D+.
std::vector<CanonicalNode> successors(const CanonicalNode& node, const DiagSet& used,
                                      const std::vector<AxiomSet>& diags);

// Brute force over all seeds; one node per distinct U_S != U_D, ordered by D+.
std::vector<CanonicalNode> enumerate_all_canonical(const std::vector<AxiomSet>& diags);

enum class RioMethod {
    Gated,     // the RIO branches of the search directly
    EntFirst,  // ENT search first, gated search only if the ENT result is high-risk
};

struct SearchOptions {
    bool prune = true;
    bool stop_when_optimal = true;
    RioMethod rio_method = RioMethod::Gated;
    bool trace = false;
    std::vector<DiagSet> excluded;  // D+ sets that may not be returned
};

struct SearchStats {
    std::size_t generated = 0;
    std::size_t expanded = 0;
    std::size_t prunings = 0;
    std::size_t backtracks = 0;
};

struct SearchResult {
    CanonicalNode node;
    bool optimal = false;
    SearchStats stats;
    std::vector<DiagSet> visited;  // D+ of every node entered, in order
    std::string trace;
};

// Heuristic value of a node as used to rank successors (lower is better).
double search_heuristic(const MeasureConfig& cfg, const QPartition& part, const std::vector<double>& p);

SearchResult find_qpartition(const std::vector<AxiomSet>& diags, const std::vector<double>& p,
                             const MeasureConfig& cfg, const SearchOptions& opts = {});

// "<U_D+, {trait, ...}>" with 1-based axiom numbers.
std::string standard_representation(const CanonicalNode& node);

}  // namespace kbd
