#include "kbd/enrich.hpp"

namespace kbd {

EnrichedQuery enrich_query(const DPI& dpi, const FormulaSet& Q, const std::vector<AxiomSet>& diags,
                           const EntailmentTypeSet& types) {
    const AxiomSet u = union_of(range_set(static_cast<int>(diags.size())), diags);
    const AxiomSet keep = set_minus(range_set(static_cast<int>(dpi.K.size())), u);
    FormulaSet base = dpi.axioms(keep).united(dpi.B).united(dpi.union_P());

    FormulaSet with_q = extract_entailments(base.united(Q), types);
    FormulaSet without_q = extract_entailments(base, types);
    FormulaSet known = dpi.K.united(dpi.B).united(dpi.union_P()).united(Q);

    EnrichedQuery out;
    out.query = Q;
    for (const auto& f : with_q)
        if (!without_q.contains(f) && !known.contains(f)) out.implied.insert(f);
    out.query.insert_all(out.implied);
    return out;
}

}  // namespace kbd
