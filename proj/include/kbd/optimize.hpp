#pragma once

#include <vector>

#include "kbd/dpi.hpp"
#include "kbd/partition.hpp"
#include "kbd/qpartition.hpp"

namespace kbd {

// Reasoner-backed q-partition of an arbitrary query:
// D+ = {D : K*_D |= Q}, D- = {D : K*_D u Q invalid}, D0 = rest,
// with K*_D = (K \ D) u B u U_P.
QPartition qpartition_of_query(const DPI& dpi, const std::vector<AxiomSet>& diags, const FormulaSet& Q);

// True iff every D in D- is still eliminated by QB.
bool is_qpart_const(const FormulaSet& QB, const QPartition& part, const std::vector<AxiomSet>& diags,
                    const DPI& dpi);

// Divide-and-conquer minimisation over an ordered list.
FormulaSet min_q(const FormulaSet& X, const std::vector<Formula>& Q, const FormulaSet& QB, const QPartition& part,
                 const std::vector<AxiomSet>& diags, const DPI& dpi);

// Orders the enriched query as [implied formulas, Q by ascending fault
// probability] and minimises it. `fault` is indexed by axiom.
FormulaSet optimize_query(const FormulaSet& enriched, const AxiomSet& Q, const QPartition& part,
                          const std::vector<AxiomSet>& diags, const DPI& dpi, const std::vector<double>& fault);

}  // namespace kbd
