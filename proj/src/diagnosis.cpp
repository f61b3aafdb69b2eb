#include "kbd/diagnosis.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kbd {

FaultModel FaultModel::uniform(std::size_t n, double p) {
    return FaultModel{std::vector<double>(n, p)};
}

FaultModel parse_fault_file(const std::string& text, std::size_t num_axioms) {
    FaultModel fm = FaultModel::uniform(num_axioms);
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        std::string idx_text;
        if (!(ls >> idx_text)) continue;
        if (idx_text.rfind("ax", 0) == 0) idx_text = idx_text.substr(2);
        double p = 0;
        std::size_t idx = 0;
        try {
            idx = std::stoul(idx_text);
        } catch (const std::exception&) {
            throw std::invalid_argument("fault file line " + std::to_string(lineno) + ": bad axiom index");
        }
        if (!(ls >> p)) throw std::invalid_argument("fault file line " + std::to_string(lineno) + ": missing probability");
        if (idx < 1 || idx > num_axioms)
            throw std::invalid_argument("fault file line " + std::to_string(lineno) + ": axiom index out of range");
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("fault file line " + std::to_string(lineno) + ": probability must lie in (0,1)");
        fm.fault[idx - 1] = p;
    }
    return fm;
}

namespace {

AxiomSet qx(const DPI& dpi, const AxiomSet& background, bool has_delta, const AxiomSet& C) {
    if (has_delta && !is_valid_subset(background, dpi)) return {};
    if (C.size() == 1) return C;
    std::size_t k = C.size() / 2;
    AxiomSet C1(C.begin(), C.begin() + static_cast<std::ptrdiff_t>(k));
    AxiomSet C2(C.begin() + static_cast<std::ptrdiff_t>(k), C.end());
    AxiomSet d2 = qx(dpi, set_union(background, C1), !C1.empty(), C2);
    AxiomSet d1 = qx(dpi, set_union(background, d2), !d2.empty(), C1);
    return set_union(d1, d2);
}

struct HsNode {
    double score;
    AxiomSet path;
};

struct HsNodeOrder {
    bool operator()(const HsNode& a, const HsNode& b) const {
        if (a.score != b.score) return a.score < b.score;
        if (a.path.size() != b.path.size()) return a.path.size() > b.path.size();
        return a.path > b.path;
    }
};

bool hits_all(const IndexSet& h, const std::vector<IndexSet>& family) {
    for (const auto& s : family)
        if (!intersects(h, s)) return false;
    return true;
}

}  // namespace

std::optional<AxiomSet> quick_xplain(const DPI& dpi, const AxiomSet& candidate) {
    if (is_valid_subset(candidate, dpi)) return std::nullopt;
    if (candidate.empty()) return AxiomSet{};
    return qx(dpi, {}, false, candidate);
}

std::vector<AxiomSet> compute_leading_diagnoses(const DPI& dpi, const FaultModel& fm, std::size_t max_count) {
    const int n = static_cast<int>(dpi.K.size());
    if (fm.fault.size() != dpi.K.size()) throw std::invalid_argument("fault model size does not match K");
    std::vector<double> ratio(fm.fault.size());
    for (std::size_t i = 0; i < ratio.size(); ++i) ratio[i] = std::log(fm.fault[i] / (1.0 - fm.fault[i]));

    std::vector<AxiomSet> diagnoses;
    std::vector<AxiomSet> conflicts;
    std::set<AxiomSet> seen;
    std::priority_queue<HsNode, std::vector<HsNode>, HsNodeOrder> open;
    open.push({0.0, {}});
    seen.insert({});
    const AxiomSet all = range_set(n);

    while (!open.empty()) {
        if (max_count && diagnoses.size() >= max_count) break;
        HsNode node = open.top();
        open.pop();
        bool closed = false;
        for (const auto& d : diagnoses)
            if (is_subset(d, node.path)) { closed = true; break; }
        if (closed) continue;

        const AxiomSet* label = nullptr;
        for (const auto& c : conflicts)
            if (!intersects(c, node.path)) { label = &c; break; }
        if (!label) {
            auto c = quick_xplain(dpi, set_minus(all, node.path));
            if (!c) {
                bool minimal = true;
                for (int a : node.path) {
                    AxiomSet smaller = node.path;
                    smaller.erase(std::find(smaller.begin(), smaller.end(), a));
                    if (is_valid_subset(set_minus(all, smaller), dpi)) { minimal = false; break; }
                }
                if (minimal) diagnoses.push_back(node.path);
                continue;
            }
            conflicts.push_back(*c);
            label = &conflicts.back();
        }
        for (int a : AxiomSet(*label)) {
            AxiomSet child = with(node.path, a);
            if (!seen.insert(child).second) continue;
            open.push({node.score + ratio[static_cast<std::size_t>(a)], child});
        }
    }
    return diagnoses;
}

std::vector<IndexSet> minimal_hitting_sets(const std::vector<IndexSet>& family) {
    std::vector<IndexSet> result;
    for (const auto& s : family)
        if (s.empty()) return result;
    std::set<IndexSet> level{IndexSet{}};
    while (!level.empty()) {
        std::set<IndexSet> next;
        for (const auto& h : level) {
            bool closed = false;
            for (const auto& r : result)
                if (is_subset(r, h)) { closed = true; break; }
            if (closed) continue;
            const IndexSet* open_set = nullptr;
            for (const auto& s : family)
                if (!intersects(h, s)) { open_set = &s; break; }
            if (!open_set) {
                bool minimal = true;
                for (std::size_t i = 0; i < h.size() && minimal; ++i) {
                    IndexSet smaller = h;
                    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
                    if (hits_all(smaller, family)) minimal = false;
                }
                if (minimal) result.push_back(h);
                continue;
            }
            for (int x : *open_set) next.insert(with(h, x));
        }
        level = std::move(next);
    }
    return result;
}

std::vector<AxiomSet> compute_all_conflicts(const DPI& dpi) {
    auto diags = compute_leading_diagnoses(dpi, FaultModel::uniform(dpi.K.size()), 0);
    std::vector<AxiomSet> out;
    for (auto& c : minimal_hitting_sets(diags))
        if (!is_valid_subset(c, dpi)) out.push_back(std::move(c));
    return out;
}

double diagnosis_weight(const FaultModel& fm, const AxiomSet& D) {
    double w = 1.0;
    for (std::size_t i = 0; i < fm.fault.size(); ++i) {
        double f = fm.fault[i];
        if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("fault probabilities must lie in (0,1)");
        w *= contains(D, static_cast<int>(i)) ? f : 1.0 - f;
    }
    return w;
}

std::vector<double> normalize(std::vector<double> w) {
    double s = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(s > 0.0)) throw std::invalid_argument("cannot normalize a zero mass vector");
    for (auto& x : w) x /= s;
    return w;
}

std::vector<double> diagnosis_probabilities(const FaultModel& fm, const std::vector<AxiomSet>& diags) {
    std::vector<double> w;
    w.reserve(diags.size());
    for (const auto& d : diags) w.push_back(diagnosis_weight(fm, d));
    return normalize(std::move(w));
}

std::vector<double> bayesian_update(const std::vector<double>& p, const QPartition& part, bool answer) {
    std::vector<double> post(p.size(), 0.0);
    const DiagSet& keep = answer ? part.dplus : part.dminus;
    for (int i : keep) post[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
    for (int i : part.dzero) post[static_cast<std::size_t>(i)] = 0.5 * p[static_cast<std::size_t>(i)];
    double z = std::accumulate(post.begin(), post.end(), 0.0);
    if (!(z > 0.0)) throw std::domain_error("answer has zero probability");
    for (auto& x : post) x /= z;
    return post;
}

}  // namespace kbd
