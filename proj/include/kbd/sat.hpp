#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kbd/formula.hpp"

namespace kbd::sat {

// Literal encoding: 2*var for positive, 2*var+1 for negative.
inline int pos(int v) { return 2 * v; }
inline int neg(int v) { return 2 * v + 1; }
inline int negate(int lit) { return lit ^ 1; }
inline int var_of(int lit) { return lit >> 1; }

using Clause = std::vector<int>;

class Cnf {
public:
    int new_var() { return num_vars_++; }
    int num_vars() const { return num_vars_; }
    void add(Clause c) { clauses_.push_back(std::move(c)); }
    const std::vector<Clause>& clauses() const { return clauses_; }

    // Variable for an atom name, created on first use.
    int atom_var(const std::string& name);
    const std::unordered_map<std::string, int>& atom_vars() const { return atoms_; }

    // Tseitin encoding; returns a literal equivalent to f.
    int encode(const Formula& f);
    void assert_formula(const Formula& f) { add({encode(f)}); }

private:
    int num_vars_ = 0;
    std::vector<Clause> clauses_;
    std::unordered_map<std::string, int> atoms_;
    std::unordered_map<std::string, int> cache_;
};

// Complete DPLL search with two-watched-literal unit propagation.
class Solver {
public:
    explicit Solver(const Cnf& cnf);

    // Satisfiable under the given assumption literals.
    bool solve(const std::vector<int>& assumptions = {});

    // Value of a variable in the last model (valid after solve() returned true).
    bool model_value(int var) const { return value_[static_cast<std::size_t>(var)] == 1; }

private:
    bool assign(int lit, int reason_level);
    int propagate();
    void backtrack_to(std::size_t trail_size);

    int num_vars_;
    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> watches_;
    std::vector<int8_t> value_;  // -1 unassigned, 0 false, 1 true
    std::vector<int> trail_;
    std::size_t qhead_ = 0;
    bool trivially_unsat_ = false;
    std::vector<int> units_;
};

}  // namespace kbd::sat
