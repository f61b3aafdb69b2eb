#include "kbd/queryselect.hpp"

#include <set>
#include <stdexcept>

namespace kbd {

SelectionStrategy parse_strategy(const std::string& name) {
    if (name == "BreadthFirst" || name == "bfs") return SelectionStrategy::BreadthFirst;
    if (name == "MinSum" || name == "minsum") return SelectionStrategy::MinSum;
    if (name == "MinMax" || name == "minmax") return SelectionStrategy::MinMax;
    throw std::invalid_argument("unknown selection strategy '" + name + "'");
}

std::string to_string(SelectionStrategy s) {
    switch (s) {
        case SelectionStrategy::BreadthFirst: return "BreadthFirst";
        case SelectionStrategy::MinSum: return "MinSum";
        case SelectionStrategy::MinMax: return "MinMax";
    }
    return "?";
}

std::vector<AxiomSet> set_min_traits(const CanonicalNode& node) {
    std::set<AxiomSet> uniq(node.traits.begin(), node.traits.end());
    std::vector<AxiomSet> out;
    for (const auto& t : uniq) {
        bool minimal = true;
        for (const auto& u : uniq)
            if (is_proper_subset(u, t)) { minimal = false; break; }
        if (minimal) out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(), [](const AxiomSet& a, const AxiomSet& b) { return a.size() < b.size(); });
    return out;
}

namespace {

struct QueueNode {
    double cost;
    AxiomSet path;
};

double node_cost(SelectionStrategy s, const AxiomSet& path, const std::vector<double>& fault) {
    double c = 0.0;
    for (int a : path) {
        double f = fault[static_cast<std::size_t>(a)];
        if (s == SelectionStrategy::MinSum) c += f;
        else if (s == SelectionStrategy::MinMax) c = std::max(c, f);
    }
    return c;
}

bool less_node(const QueueNode& a, const QueueNode& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
}

}  // namespace

std::vector<AxiomSet> select_queries(const CanonicalNode& node, const std::vector<double>& fault,
                                     const SelectionParams& params) {
    if (params.n_min < 1 || params.n_min > params.n_max)
        throw std::invalid_argument("selection requires 1 <= nMin <= nMax");
    const auto traits = set_min_traits(node);
    for (const auto& t : traits)
        for (int a : t)
            if (static_cast<std::size_t>(a) >= fault.size())
                throw std::invalid_argument("fault vector does not cover the trait axioms");

    auto order = [](const QueueNode& a, const QueueNode& b) { return less_node(a, b); };
    std::set<QueueNode, decltype(order)> queue(order);
    queue.insert({0.0, {}});
    std::vector<AxiomSet> found;
    const auto start = std::chrono::steady_clock::now();

    while (!queue.empty()) {
        QueueNode cur = *queue.begin();
        queue.erase(queue.begin());

        bool closed = false;
        for (const auto& q : found)
            if (is_subset(q, cur.path)) { closed = true; break; }
        if (!closed) {
            const AxiomSet* label = nullptr;
            for (const auto& t : traits)
                if (!intersects(t, cur.path)) { label = &t; break; }
            if (!label) {
                found.push_back(cur.path);
            } else {
                for (int e : *label) {
                    AxiomSet child = with(cur.path, e);
                    queue.insert({node_cost(params.strategy, child, fault), child});
                }
            }
        }
        if (found.size() >= params.n_min &&
            (found.size() == params.n_max || std::chrono::steady_clock::now() - start > params.time_budget))
            break;
    }
    return found;
}

}  // namespace kbd
