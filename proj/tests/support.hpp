#pragma once

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "kbd/dpi.hpp"
#include "kbd/partition.hpp"
#include "kbd/session.hpp"

namespace testutil {

using namespace kbd;

inline std::string read_data(const std::string& name) {
    std::ifstream in(std::string(KBD_DATA_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline DPI example_dpi() { return parse_dpi(read_data("example.dpi")); }

// 0-based D1..D6 of the example.
inline std::vector<AxiomSet> example_diags() {
    return {{1, 2}, {1, 4}, {1, 5}, {1, 6}, {0, 3, 6}, {2, 3, 6}};
}

inline std::vector<double> example_probs() { return {0.01, 0.33, 0.14, 0.07, 0.41, 0.04}; }

inline DiagnosisWeights example_weights() {
    DiagnosisWeights w;
    auto d = example_diags();
    auto p = example_probs();
    for (std::size_t i = 0; i < d.size(); ++i) w[d[i]] = p[i];
    return w;
}

inline std::vector<AxiomSet> pick(const std::vector<AxiomSet>& all, const DiagSet& which) {
    std::vector<AxiomSet> out;
    for (int i : which) out.push_back(all[static_cast<std::size_t>(i)]);
    return out;
}

// --- truth-table oracle -------------------------------------------------

inline bool eval(const Formula& f, const std::map<std::string, bool>& v) {
    switch (f.kind()) {
        case NodeKind::Atom: return v.at(f.name());
        case NodeKind::Top: return true;
        case NodeKind::Bottom: return false;
        case NodeKind::Not: return !eval(f.children()[0], v);
        case NodeKind::And:
            for (const auto& c : f.children())
                if (!eval(c, v)) return false;
            return true;
        case NodeKind::Or:
            for (const auto& c : f.children())
                if (eval(c, v)) return true;
            return false;
        case NodeKind::Implies: return !eval(f.children()[0], v) || eval(f.children()[1], v);
        case NodeKind::Iff: return eval(f.children()[0], v) == eval(f.children()[1], v);
    }
    return false;
}

// Calls fn for every assignment to the atoms of `fs` that satisfies all of `fs`.
inline void for_each_model(const FormulaSet& fs, const std::vector<std::string>& atoms,
                           const std::function<bool(const std::map<std::string, bool>&)>& fn) {
    const std::size_t n = atoms.size();
    std::map<std::string, bool> v;
    for (std::uint64_t m = 0; m < (1ull << n); ++m) {
        for (std::size_t i = 0; i < n; ++i) v[atoms[i]] = (m >> i) & 1u;
        bool ok = true;
        for (const auto& f : fs)
            if (!eval(f, v)) { ok = false; break; }
        if (ok && !fn(v)) return;
    }
}

inline std::vector<std::string> atoms_of(const FormulaSet& a, const FormulaSet& b = {}) {
    return a.united(b).atoms();
}

inline bool tt_consistent(const FormulaSet& fs) {
    bool found = false;
    for_each_model(fs, fs.atoms(), [&](const auto&) { found = true; return false; });
    return found;
}

inline bool tt_entails(const FormulaSet& fs, const FormulaSet& goal) {
    bool ok = true;
    for_each_model(fs, atoms_of(fs, goal), [&](const auto& v) {
        for (const auto& g : goal)
            if (!eval(g, v)) { ok = false; return false; }
        return true;
    });
    return ok;
}

inline bool tt_valid_kb(const FormulaSet& kprime, const DPI& dpi) {
    FormulaSet all = kprime.united(dpi.B).united(dpi.union_P());
    if (!tt_consistent(all)) return false;
    for (const auto& n : dpi.N)
        if (tt_entails(all, n)) return false;
    return true;
}

// --- brute-force set oracles ---------------------------------------------

inline std::vector<AxiomSet> all_subsets(int n) {
    std::vector<AxiomSet> out;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        AxiomSet s;
        for (int i = 0; i < n; ++i)
            if (m & (1u << i)) s.push_back(i);
        out.push_back(s);
    }
    return out;
}

inline std::vector<AxiomSet> minimal_only(const std::vector<AxiomSet>& sets) {
    std::vector<AxiomSet> out;
    for (const auto& s : sets) {
        bool minimal = true;
        for (const auto& t : sets)
            if (is_proper_subset(t, s)) { minimal = false; break; }
        if (minimal) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const AxiomSet& a, const AxiomSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

inline std::vector<AxiomSet> brute_diagnoses(const DPI& dpi) {
    const int n = static_cast<int>(dpi.K.size());
    std::vector<AxiomSet> ok;
    for (const auto& d : all_subsets(n))
        if (tt_valid_kb(dpi.K.minus(dpi.axioms(d)), dpi)) ok.push_back(d);
    return minimal_only(ok);
}

inline std::vector<AxiomSet> brute_conflicts(const DPI& dpi) {
    const int n = static_cast<int>(dpi.K.size());
    std::vector<AxiomSet> bad;
    for (const auto& c : all_subsets(n))
        if (!tt_valid_kb(dpi.axioms(c), dpi)) bad.push_back(c);
    return minimal_only(bad);
}

inline std::vector<AxiomSet> brute_mhs(const std::vector<AxiomSet>& family) {
    AxiomSet universe;
    for (const auto& f : family) universe = set_union(universe, f);
    std::vector<AxiomSet> hits;
    for (std::uint32_t m = 0; m < (1u << universe.size()); ++m) {
        AxiomSet s;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (m & (1u << i)) s.push_back(universe[i]);
        bool all = true;
        for (const auto& f : family)
            if (!intersects(s, f)) { all = false; break; }
        if (all) hits.push_back(s);
    }
    return minimal_only(hits);
}

// --- random q-partitions -------------------------------------------------

inline std::vector<double> random_probs(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.01, 1.0);
    std::vector<double> p(n);
    double s = 0;
    for (auto& x : p) s += (x = u(rng));
    for (auto& x : p) x /= s;
    return p;
}

// Random partition with non-empty D+ and D-; D0 allowed unless no_zero.
inline QPartition random_partition(std::mt19937& rng, std::size_t n, bool no_zero) {
    std::uniform_int_distribution<int> side(0, no_zero ? 1 : 2);
    for (;;) {
        QPartition q;
        for (std::size_t i = 0; i < n; ++i) {
            int s = side(rng);
            (s == 0 ? q.dplus : s == 1 ? q.dminus : q.dzero).push_back(static_cast<int>(i));
        }
        if (!q.dplus.empty() && !q.dminus.empty()) return q;
    }
}

}  // namespace testutil
