#include "kbd/sat.hpp"

#include <algorithm>

namespace kbd::sat {

int Cnf::atom_var(const std::string& name) {
    auto it = atoms_.find(name);
    if (it != atoms_.end()) return it->second;
    int v = new_var();
    atoms_.emplace(name, v);
    return v;
}

int Cnf::encode(const Formula& f) {
    if (f.kind() == NodeKind::Atom) return pos(atom_var(f.name()));
    if (f.kind() == NodeKind::Not) return negate(encode(f.children()[0]));
    auto hit = cache_.find(f.key());
    if (hit != cache_.end()) return hit->second;

    int v = pos(new_var());
    switch (f.kind()) {
        case NodeKind::Top:
            add({v});
            break;
        case NodeKind::Bottom:
            add({negate(v)});
            break;
        case NodeKind::And: {
            Clause back{v};
            for (const auto& c : f.children()) {
                int l = encode(c);
                add({negate(v), l});
                back.push_back(negate(l));
            }
            add(std::move(back));
            break;
        }
        case NodeKind::Or: {
            Clause fwd{negate(v)};
            for (const auto& c : f.children()) {
                int l = encode(c);
                add({v, negate(l)});
                fwd.push_back(l);
            }
            add(std::move(fwd));
            break;
        }
        case NodeKind::Implies: {
            int a = encode(f.children()[0]);
            int b = encode(f.children()[1]);
            add({negate(v), negate(a), b});
            add({v, a});
            add({v, negate(b)});
            break;
        }
        case NodeKind::Iff: {
            int a = encode(f.children()[0]);
            int b = encode(f.children()[1]);
            add({negate(v), negate(a), b});
            add({negate(v), a, negate(b)});
            add({v, a, b});
            add({v, negate(a), negate(b)});
            break;
        }
        default:
            break;
    }
    cache_.emplace(f.key(), v);
    return v;
}

Solver::Solver(const Cnf& cnf)
    : num_vars_(cnf.num_vars()),
      watches_(static_cast<std::size_t>(2 * cnf.num_vars())),
      value_(static_cast<std::size_t>(cnf.num_vars()), -1) {
    for (Clause c : cnf.clauses()) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        bool taut = false;
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if (var_of(c[i]) == var_of(c[i + 1])) taut = true;
        if (taut) continue;
        if (c.empty()) {
            trivially_unsat_ = true;
            continue;
        }
        if (c.size() == 1) {
            units_.push_back(c[0]);
            continue;
        }
        auto idx = static_cast<int>(clauses_.size());
        watches_[static_cast<std::size_t>(c[0])].push_back(idx);
        watches_[static_cast<std::size_t>(c[1])].push_back(idx);
        clauses_.push_back(std::move(c));
    }
}

namespace {
inline int lit_value(const std::vector<int8_t>& value, int lit) {
    int8_t v = value[static_cast<std::size_t>(var_of(lit))];
    if (v < 0) return -1;
    return (lit & 1) ? 1 - v : v;
}
}  // namespace

bool Solver::assign(int lit, int) {
    int cur = lit_value(value_, lit);
    if (cur == 1) return true;
    if (cur == 0) return false;
    value_[static_cast<std::size_t>(var_of(lit))] = static_cast<int8_t>((lit & 1) ? 0 : 1);
    trail_.push_back(lit);
    return true;
}

int Solver::propagate() {
    while (qhead_ < trail_.size()) {
        int p = trail_[qhead_++];
        int false_lit = negate(p);
        auto& ws = watches_[static_cast<std::size_t>(false_lit)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            int ci = ws[i++];
            Clause& c = clauses_[static_cast<std::size_t>(ci)];
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            if (lit_value(value_, c[0]) == 1) {
                ws[j++] = ci;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.size(); ++k) {
                if (lit_value(value_, c[k]) != 0) {
                    std::swap(c[1], c[k]);
                    watches_[static_cast<std::size_t>(c[1])].push_back(ci);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = ci;
            if (lit_value(value_, c[0]) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                return ci;
            }
            assign(c[0], 0);
        }
        ws.resize(j);
    }
    return -1;
}

void Solver::backtrack_to(std::size_t trail_size) {
    while (trail_.size() > trail_size) {
        value_[static_cast<std::size_t>(var_of(trail_.back()))] = -1;
        trail_.pop_back();
    }
    qhead_ = trail_size;
}

bool Solver::solve(const std::vector<int>& assumptions) {
    if (trivially_unsat_) return false;
    backtrack_to(0);
    for (int u : units_)
        if (!assign(u, 0)) return false;
    if (propagate() >= 0) return false;

    struct Decision {
        std::size_t trail_pos;
        int lit;
        bool flipped;
    };
    std::vector<Decision> stack;

    for (int a : assumptions) {
        int cur = lit_value(value_, a);
        if (cur == 1) continue;
        if (cur == 0) return false;
        stack.push_back({trail_.size(), a, true});
        assign(a, 0);
        if (propagate() >= 0) return false;
    }
    const std::size_t fixed = stack.size();

    int next_var = 0;
    while (true) {
        if (propagate() >= 0) {
            while (stack.size() > fixed && stack.back().flipped) stack.pop_back();
            if (stack.size() == fixed) return false;
            Decision& d = stack.back();
            backtrack_to(d.trail_pos);
            d.flipped = true;
            d.lit = negate(d.lit);
            assign(d.lit, 0);
            next_var = 0;
            continue;
        }
        while (next_var < num_vars_ && value_[static_cast<std::size_t>(next_var)] >= 0) ++next_var;
        if (next_var == num_vars_) return true;
        stack.push_back({trail_.size(), pos(next_var), false});
        assign(pos(next_var), 0);
    }
}

}  // namespace kbd::sat
