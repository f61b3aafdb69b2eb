#pragma once

#include <vector>

#include "kbd/sets.hpp"

namespace kbd {

// <D+, D-, D0> over indices into the leading diagnoses.
struct QPartition {
    DiagSet dplus;
    DiagSet dminus;
    DiagSet dzero;

    std::size_t total() const { return dplus.size() + dminus.size() + dzero.size(); }

    friend bool operator==(const QPartition& a, const QPartition& b) {
        return a.dplus == b.dplus && a.dminus == b.dminus && a.dzero == b.dzero;
    }
};

inline double mass(const DiagSet& s, const std::vector<double>& p) {
    double m = 0.0;
    for (int i : s) m += p[static_cast<std::size_t>(i)];
    return m;
}

// D+ = diagnoses disjoint from Q, D- = the rest. Valid for explicit-entailment
// queries Q subset of K (no reasoner needed).
inline QPartition partition_of_explicit_query(const AxiomSet& Q, const std::vector<AxiomSet>& diags) {
    QPartition part;
    for (std::size_t i = 0; i < diags.size(); ++i)
        (intersects(Q, diags[i]) ? part.dminus : part.dplus).push_back(static_cast<int>(i));
    return part;
}

}  // namespace kbd
