#pragma once

#include <vector>

#include "kbd/dpi.hpp"
#include "kbd/qpartition.hpp"
#include "kbd/reasoner.hpp"

namespace kbd {

struct EnrichedQuery {
    FormulaSet query;    // Q followed by the implied formulas
    FormulaSet implied;  // Q_impl in extraction order
};

// Adds the entailments of (K \ U_D) u Q u B u U_P that are not entailed
// without Q. Members of K u B u U_P are never added. Two reasoner calls.
EnrichedQuery enrich_query(const DPI& dpi, const FormulaSet& Q, const std::vector<AxiomSet>& diags,
                           const EntailmentTypeSet& types);

}  // namespace kbd
