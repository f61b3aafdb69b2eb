#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kbd/formula.hpp"

namespace kbd {

enum class EntailmentType { AtomConsequences, AtomImplications, Literals };

using EntailmentTypeSet = std::vector<EntailmentType>;

EntailmentTypeSet parse_entailment_types(const std::string& csv);
std::string to_string(EntailmentType t);

bool is_consistent(const FormulaSet& axioms);
bool entails(const FormulaSet& axioms, const FormulaSet& goal);
bool entails(const FormulaSet& axioms, const Formula& goal);

// All formulas of the requested types over the atoms of `axioms` that are
// entailed by `axioms`, in a fixed order (atoms sorted by name).
FormulaSet extract_entailments(const FormulaSet& axioms, const EntailmentTypeSet& types);

// Number of top-level reasoner invocations (is_consistent, entails,
// extract_entailments) on the calling thread.
std::uint64_t reasoner_calls();
void reset_reasoner_calls();

}  // namespace kbd
