#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kbd/formula.hpp"
#include "kbd/sets.hpp"

namespace kbd {

class DpiError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Diagnosis problem instance <K,B,P,N>_R with R = {consistency}.
struct DPI {
    FormulaSet K;
    FormulaSet B;
    std::vector<FormulaSet> P;
    std::vector<FormulaSet> N;

    FormulaSet union_P() const;
    FormulaSet axioms(const AxiomSet& s) const;
    std::string axiom_label(int i) const { return "ax" + std::to_string(i + 1); }
};

DPI parse_dpi(const std::string& text);
std::string render_dpi(const DPI& dpi);

// Kprime u B u U_P is consistent and entails no negative test case. A test
// case n counts as entailed when every formula of n is entailed.
bool is_valid_kb(const FormulaSet& Kprime, const DPI& dpi);
bool is_valid_subset(const AxiomSet& s, const DPI& dpi);

// (K \ D) u U_P
FormulaSet apply_diagnosis(const DPI& dpi, const AxiomSet& D);

// S u B consistent, entails every p in P, entails no n in N.
bool is_solution_kb(const FormulaSet& S, const DPI& dpi);

DPI update_dpi(const DPI& dpi, const FormulaSet& Q, bool answer);

}  // namespace kbd
