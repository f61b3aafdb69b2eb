#include "kbd/reasoner.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "kbd/sat.hpp"

namespace kbd {

namespace {

thread_local std::uint64_t g_calls = 0;

sat::Cnf axioms_cnf(const FormulaSet& axioms) {
    sat::Cnf cnf;
    for (const auto& f : axioms) cnf.assert_formula(f);
    return cnf;
}

bool sat_consistent(const FormulaSet& axioms) {
    sat::Cnf cnf = axioms_cnf(axioms);
    sat::Solver s(cnf);
    return s.solve();
}

}  // namespace

std::string to_string(EntailmentType t) {
    switch (t) {
        case EntailmentType::AtomConsequences: return "AtomConsequences";
        case EntailmentType::AtomImplications: return "AtomImplications";
        case EntailmentType::Literals: return "Literals";
    }
    return "?";
}

EntailmentTypeSet parse_entailment_types(const std::string& csv) {
    EntailmentTypeSet out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) continue;
        EntailmentType t;
        if (item == "AtomConsequences") t = EntailmentType::AtomConsequences;
        else if (item == "AtomImplications") t = EntailmentType::AtomImplications;
        else if (item == "Literals") t = EntailmentType::Literals;
        else throw std::invalid_argument("unknown entailment type '" + item + "'");
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    if (out.empty()) throw std::invalid_argument("empty entailment type set");
    return out;
}

bool is_consistent(const FormulaSet& axioms) {
    ++g_calls;
    return sat_consistent(axioms);
}

bool entails(const FormulaSet& axioms, const FormulaSet& goal) {
    ++g_calls;
    if (goal.empty()) return true;
    sat::Cnf cnf = axioms_cnf(axioms);
    std::vector<int> lits;
    for (const auto& g : goal) lits.push_back(cnf.encode(g));
    sat::Solver s(cnf);
    for (int l : lits)
        if (s.solve({sat::negate(l)})) return false;
    return true;
}

bool entails(const FormulaSet& axioms, const Formula& goal) {
    return entails(axioms, FormulaSet{goal});
}

FormulaSet extract_entailments(const FormulaSet& axioms, const EntailmentTypeSet& types) {
    ++g_calls;
    std::vector<std::string> atoms = axioms.atoms();
    std::sort(atoms.begin(), atoms.end());
    bool want_cons = std::find(types.begin(), types.end(), EntailmentType::AtomConsequences) != types.end();
    bool want_lits = std::find(types.begin(), types.end(), EntailmentType::Literals) != types.end();
    bool want_impl = std::find(types.begin(), types.end(), EntailmentType::AtomImplications) != types.end();

    sat::Cnf cnf = axioms_cnf(axioms);
    std::vector<int> var;
    for (const auto& a : atoms) var.push_back(cnf.atom_var(a));
    sat::Solver s(cnf);
    const bool inconsistent = !s.solve();

    auto holds = [&](const std::vector<int>& counter_assumptions) {
        return inconsistent || !s.solve(counter_assumptions);
    };

    FormulaSet out;
    const std::size_t n = atoms.size();
    if (want_cons || want_lits) {
        for (std::size_t i = 0; i < n; ++i)
            if (holds({sat::neg(var[i])})) out.insert(Formula::atom(atoms[i]));
    }
    if (want_lits) {
        for (std::size_t i = 0; i < n; ++i)
            if (holds({sat::pos(var[i])})) out.insert(Formula::negation(Formula::atom(atoms[i])));
    }
    if (want_impl) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<char> refuted(n, 0);
            if (!inconsistent && s.solve({sat::pos(var[i])})) {
                for (std::size_t j = 0; j < n; ++j)
                    if (!s.model_value(var[j])) refuted[j] = 1;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || refuted[j]) continue;
                if (holds({sat::pos(var[i]), sat::neg(var[j])}))
                    out.insert(Formula::implication(Formula::atom(atoms[i]), Formula::atom(atoms[j])));
            }
        }
    }
    return out;
}

std::uint64_t reasoner_calls() { return g_calls; }
void reset_reasoner_calls() { g_calls = 0; }

}  // namespace kbd
