#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace kbd {

// Sorted, duplicate-free index set. Used for axiom subsets of K and for
// subsets of the leading diagnoses.
using IndexSet = std::vector<int>;
using AxiomSet = IndexSet;
using DiagSet = IndexSet;

inline IndexSet normalized(IndexSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    r.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline IndexSet set_minus(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    r.reserve(a.size());
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool is_proper_subset(const IndexSet& a, const IndexSet& b) {
    return a.size() < b.size() && is_subset(a, b);
}

inline bool intersects(const IndexSet& a, const IndexSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i; else ++j;
    }
    return false;
}

inline bool contains(const IndexSet& s, int x) {
    return std::binary_search(s.begin(), s.end(), x);
}

inline IndexSet with(IndexSet s, int x) {
    auto it = std::lower_bound(s.begin(), s.end(), x);
    if (it == s.end() || *it != x) s.insert(it, x);
    return s;
}

inline IndexSet range_set(int n) {
    IndexSet s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = i;
    return s;
}

// Renders 0-based indices as 1-based, e.g. {0,2} -> "{1,3}".
inline std::string to_string(const IndexSet& s, const std::string& prefix = "") {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += prefix + std::to_string(s[i] + 1);
    }
    return out + "}";
}

}  // namespace kbd
