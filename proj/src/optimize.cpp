#include "kbd/optimize.hpp"

#include <algorithm>

#include "kbd/reasoner.hpp"

namespace kbd {

namespace {

FormulaSet kstar(const DPI& dpi, const AxiomSet& D) {
    AxiomSet keep = set_minus(range_set(static_cast<int>(dpi.K.size())), D);
    return dpi.axioms(keep).united(dpi.B).united(dpi.union_P());
}

}  // namespace

QPartition qpartition_of_query(const DPI& dpi, const std::vector<AxiomSet>& diags, const FormulaSet& Q) {
    QPartition part;
    for (std::size_t i = 0; i < diags.size(); ++i) {
        FormulaSet k = kstar(dpi, diags[i]);
        int idx = static_cast<int>(i);
        if (entails(k, Q)) part.dplus.push_back(idx);
        else if (!is_valid_kb(k.united(Q), dpi)) part.dminus.push_back(idx);
        else part.dzero.push_back(idx);
    }
    return part;
}

bool is_qpart_const(const FormulaSet& QB, const QPartition& part, const std::vector<AxiomSet>& diags,
                    const DPI& dpi) {
    for (int r : part.dminus)
        if (is_valid_kb(kstar(dpi, diags[static_cast<std::size_t>(r)]).united(QB), dpi)) return false;
    for (int r : part.dzero)
        if (entails(kstar(dpi, diags[static_cast<std::size_t>(r)]), QB)) return false;
    return true;
}

FormulaSet min_q(const FormulaSet& X, const std::vector<Formula>& Q, const FormulaSet& QB, const QPartition& part,
                 const std::vector<AxiomSet>& diags, const DPI& dpi) {
    if (!X.empty() && is_qpart_const(QB, part, diags, dpi)) return {};
    if (Q.size() == 1) return FormulaSet(Q);
    std::size_t k = Q.size() / 2;
    std::vector<Formula> q1(Q.begin(), Q.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<Formula> q2(Q.begin() + static_cast<std::ptrdiff_t>(k), Q.end());
    FormulaSet s1(q1);
    FormulaSet m2 = min_q(s1, q2, QB.united(s1), part, diags, dpi);
    FormulaSet m1 = min_q(m2, q1, QB.united(m2), part, diags, dpi);
    return m1.united(m2);
}

FormulaSet optimize_query(const FormulaSet& enriched, const AxiomSet& Q, const QPartition& part,
                          const std::vector<AxiomSet>& diags, const DPI& dpi, const std::vector<double>& fault) {
    AxiomSet sorted_q = Q;
    std::stable_sort(sorted_q.begin(), sorted_q.end(), [&](int a, int b) {
        return fault[static_cast<std::size_t>(a)] < fault[static_cast<std::size_t>(b)];
    });
    FormulaSet explicit_part = dpi.axioms(Q);
    std::vector<Formula> order;
    for (const auto& f : enriched)
        if (!explicit_part.contains(f)) order.push_back(f);
    for (int a : sorted_q) order.push_back(dpi.K[static_cast<std::size_t>(a)]);
    if (order.empty()) return {};
    return min_q({}, order, {}, part, diags, dpi);
}

}  // namespace kbd
