#include "kbd/qpartition.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace kbd {

AxiomSet union_of(const DiagSet& s, const std::vector<AxiomSet>& diags) {
    AxiomSet u;
    for (int i : s) u = set_union(u, diags[static_cast<std::size_t>(i)]);
    return u;
}

AxiomSet intersection_of(const DiagSet& s, const std::vector<AxiomSet>& diags) {
    if (s.empty()) return {};
    AxiomSet r = diags[static_cast<std::size_t>(s.front())];
    for (int i : s) r = set_intersection(r, diags[static_cast<std::size_t>(i)]);
    return r;
}

AxiomSet discrimination_axioms(const std::vector<AxiomSet>& diags) {
    DiagSet all = range_set(static_cast<int>(diags.size()));
    return set_minus(union_of(all, diags), intersection_of(all, diags));
}

CanonicalNode make_node(const DiagSet& dplus, const std::vector<AxiomSet>& diags) {
    CanonicalNode node;
    node.dplus = dplus;
    node.dminus = set_minus(range_set(static_cast<int>(diags.size())), dplus);
    node.udplus = union_of(dplus, diags);
    for (int i : node.dminus) node.traits.push_back(set_minus(diags[static_cast<std::size_t>(i)], node.udplus));
    return node;
}

std::optional<AxiomSet> canonical_query(const DiagSet& seed, const std::vector<AxiomSet>& diags) {
    if (seed.empty() || seed.size() >= diags.size())
        throw std::invalid_argument("canonical query seed must be a non-empty proper subset of the leading diagnoses");
    for (int i : seed)
        if (i < 0 || static_cast<std::size_t>(i) >= diags.size())
            throw std::invalid_argument("canonical query seed refers to an unknown diagnosis");
    AxiomSet q = set_minus(discrimination_axioms(diags), union_of(seed, diags));
    if (q.empty()) return std::nullopt;
    return q;
}

bool is_canonical_qpartition(const DiagSet& dplus, const DiagSet& dminus, const std::vector<AxiomSet>& diags) {
    if (dplus.empty() || dminus.empty()) return false;
    AxiomSet u = union_of(dplus, diags);
    AxiomSet all = union_of(range_set(static_cast<int>(diags.size())), diags);
    if (!is_proper_subset(u, all)) return false;
    for (int j : dminus)
        if (is_subset(diags[static_cast<std::size_t>(j)], u)) return false;
    return true;
}

std::vector<CanonicalNode> successors(const CanonicalNode& node, const DiagSet& used,
                                      const std::vector<AxiomSet>& diags) {
    std::vector<CanonicalNode> sucs;
    if (node.dplus.empty()) {
        for (int d : node.dminus) sucs.push_back(make_node({d}, diags));
        return sucs;
    }
    auto trait_of = [&](int d) { return set_minus(diags[static_cast<std::size_t>(d)], node.udplus); };

    std::vector<int> pending(node.dminus.begin(), node.dminus.end());
    std::vector<int> min_trait_diags;
    std::vector<DiagSet> eq_classes;
    bool sucs_exist = false;

    while (!pending.empty()) {
        int di = pending.front();
        pending.erase(pending.begin());
        AxiomSet ti = trait_of(di);

        bool already_used = false;
        for (int du : used)
            if (trait_of(du) == ti) { already_used = true; break; }

        DiagSet followers;
        bool diag_ok = true;
        std::vector<int> candidates = pending;
        candidates.insert(candidates.end(), min_trait_diags.begin(), min_trait_diags.end());
        for (int dj : candidates) {
            AxiomSet tj = trait_of(dj);
            if (!is_subset(tj, ti)) continue;
            if (tj == ti) followers.push_back(dj);
            else diag_ok = false;
        }
        DiagSet eq_cls = normalized(set_union({di}, normalized(followers)));
        if (!sucs_exist && eq_cls == node.dminus) return {};
        sucs_exist = true;
        if (diag_ok) {
            if (!already_used) eq_classes.push_back(eq_cls);
            min_trait_diags.push_back(di);
        }
        std::erase_if(pending, [&](int d) { return contains(eq_cls, d); });
    }
    for (const auto& e : eq_classes) sucs.push_back(make_node(set_union(node.dplus, e), diags));
    return sucs;
}

std::vector<CanonicalNode> enumerate_all_canonical(const std::vector<AxiomSet>& diags) {
    const std::size_t n = diags.size();
    if (n < 2) throw std::invalid_argument("need at least two leading diagnoses");
    if (n > 24) throw std::invalid_argument("brute-force enumeration limited to 24 diagnoses");
    const AxiomSet all = union_of(range_set(static_cast<int>(n)), diags);
    std::map<AxiomSet, DiagSet> by_union;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
        DiagSet seed;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::uint64_t{1} << i)) seed.push_back(static_cast<int>(i));
        AxiomSet u = union_of(seed, diags);
        if (u == all || by_union.count(u)) continue;
        DiagSet dplus;
        for (std::size_t i = 0; i < n; ++i)
            if (is_subset(diags[i], u)) dplus.push_back(static_cast<int>(i));
        by_union.emplace(u, dplus);
    }
    std::vector<CanonicalNode> out;
    for (const auto& [u, dplus] : by_union) out.push_back(make_node(dplus, diags));
    std::sort(out.begin(), out.end(), [](const CanonicalNode& a, const CanonicalNode& b) {
        if (a.dplus.size() != b.dplus.size()) return a.dplus.size() < b.dplus.size();
        return a.dplus < b.dplus;
    });
    return out;
}

std::string standard_representation(const CanonicalNode& node) {
    std::string out = "<" + to_string(node.udplus) + ",{";
    for (std::size_t i = 0; i < node.traits.size(); ++i) {
        if (i) out += ",";
        out += to_string(node.traits[i]);
    }
    return out + "}>";
}

double search_heuristic(const MeasureConfig& cfg, const QPartition& part, const std::vector<double>& p) {
    const double nd = static_cast<double>(part.dplus.size() + part.dminus.size());
    const double pp = mass(part.dplus, p);
    const double pm = mass(part.dminus, p);
    switch (search_family(cfg.kind)) {
        case SearchFamily::Entropy:
            return std::fabs(pp - 0.5);
        case SearchFamily::Split:
            return std::fabs(static_cast<double>(part.dplus.size()) - nd / 2.0);
        case SearchFamily::Rio: {
            double n = rio_target(cfg.rio.c, part.dplus.size() + part.dminus.size());
            double to_add = n - static_cast<double>(part.dplus.size());
            double avg = pm / static_cast<double>(part.dminus.size());
            return std::fabs(pp + to_add * avg - 0.5);
        }
        case SearchFamily::KL:
        case SearchFamily::EMCb:
            return static_cast<double>(part.dplus.size()) / (nd * pp);
        case SearchFamily::MPS:
            return -pp;
        case SearchFamily::BME:
            if (pp < 0.5) return -static_cast<double>(part.dplus.size()) + pp;
            if (pp > 0.5) return -static_cast<double>(part.dminus.size()) + pm;
            return 0.0;
    }
    return 0.0;
}

namespace {

bool is_qpart(const CanonicalNode& n) { return !n.dplus.empty() && !n.dminus.empty(); }

class Searcher {
public:
    Searcher(const std::vector<AxiomSet>& diags, const std::vector<double>& p, const MeasureConfig& cfg,
             const SearchOptions& opts)
        : diags_(diags), p_(p), cfg_(cfg), opts_(opts), family_(search_family(cfg.kind)) {}

    SearchResult run() {
        CanonicalNode root = make_node({}, diags_);
        stats_.generated = 1;
        auto [best, optimal] = partition(root, root, {}, 0);
        if (!is_qpart(best)) throw std::runtime_error("no admissible canonical q-partition exists");
        SearchResult r;
        r.node = std::move(best);
        r.optimal = optimal;
        r.stats = stats_;
        r.visited = std::move(visited_);
        r.trace = trace_.str();
        return r;
    }

private:
    const std::vector<AxiomSet>& diags_;
    const std::vector<double>& p_;
    MeasureConfig cfg_;
    SearchOptions opts_;
    SearchFamily family_;
    SearchStats stats_;
    std::vector<DiagSet> visited_;
    std::ostringstream trace_;

    double pr(const DiagSet& s) const { return mass(s, p_); }
    int target(const CanonicalNode& n) const { return rio_target(cfg_.rio.c, n.dplus.size() + n.dminus.size()); }

    bool excluded(const CanonicalNode& n) const {
        for (const auto& e : opts_.excluded)
            if (e == n.dplus) return true;
        return false;
    }

    void log(const CanonicalNode& n, int depth, const std::string& note) {
        if (!opts_.trace) return;
        trace_ << std::string(static_cast<std::size_t>(depth) * 2, ' ') << std::fixed << std::setprecision(2)
               << pr(n.dplus) << "|" << pr(n.dminus) << "  " << to_string(n.dplus, "D") << "|"
               << to_string(n.dminus, "D") << "  " << standard_representation(n);
        if (is_qpart(n)) trace_ << "  [" << std::setprecision(4) << search_heuristic(cfg_, n.partition(), p_) << "]";
        if (!note.empty()) trace_ << "  " << note;
        trace_ << "\n";
    }

    CanonicalNode update_best(const CanonicalNode& P, const CanonicalNode& best) const {
        if (!is_qpart(best)) return excluded(P) ? best : P;
        if (excluded(P)) return best;
        const double half_d = static_cast<double>(P.dplus.size() + P.dminus.size()) / 2.0;
        switch (family_) {
            case SearchFamily::Entropy:
                return std::fabs(pr(P.dplus) - 0.5) < std::fabs(pr(best.dplus) - 0.5) ? P : best;
            case SearchFamily::Split:
                return std::fabs(static_cast<double>(P.dplus.size()) - half_d) <
                               std::fabs(static_cast<double>(best.dplus.size()) - half_d)
                           ? P
                           : best;
            case SearchFamily::Rio: {
                const int n = target(P);
                const int cp = static_cast<int>(P.dplus.size());
                const int cb = static_cast<int>(best.dplus.size());
                if (cp < n) return best;
                if (cb < n) return P;
                if (std::abs(n - cp) < std::abs(n - cb)) return P;
                if (std::abs(n - cp) == std::abs(n - cb) &&
                    std::fabs(0.5 - pr(P.dplus)) < std::fabs(0.5 - pr(best.dplus)))
                    return P;
                return best;
            }
            case SearchFamily::KL:
            case SearchFamily::EMCb: {
                MeasureConfig c = cfg_;
                c.kind = family_ == SearchFamily::KL ? MeasureKind::KL : MeasureKind::EMCb;
                return eval_measure(c, P.partition(), p_) > eval_measure(c, best.partition(), p_) ? P : best;
            }
            case SearchFamily::MPS:
                return P.dplus.size() == 1 && pr(P.dplus) > pr(best.dplus) ? P : best;
            case SearchFamily::BME: {
                auto low = [&](const CanonicalNode& n) {
                    return pr(n.dminus) < pr(n.dplus) ? n.dminus.size() : n.dplus.size();
                };
                return low(P) > low(best) ? P : best;
            }
        }
        return best;
    }

    bool opt(const CanonicalNode& best) const {
        if (!opts_.stop_when_optimal || !is_qpart(best)) return false;
        const double nd = static_cast<double>(best.dplus.size() + best.dminus.size());
        const double pp = pr(best.dplus);
        switch (family_) {
            case SearchFamily::Entropy:
                return std::fabs(pp - 0.5) <= cfg_.t_m;
            case SearchFamily::Split:
                return std::fabs(static_cast<double>(best.dplus.size()) - nd / 2.0) <= cfg_.t_m;
            case SearchFamily::Rio: {
                const int n = target(best);
                const int c = static_cast<int>(best.dplus.size());
                return c >= n && c - n <= cfg_.t_card && std::fabs(pp - 0.5) <= cfg_.t_ent;
            }
            case SearchFamily::KL:
            case SearchFamily::EMCb: {
                MeasureKind k = family_ == SearchFamily::KL ? MeasureKind::KL : MeasureKind::EMCb;
                MeasureConfig c = cfg_;
                c.kind = k;
                return std::fabs(eval_measure(c, best.partition(), p_) - theoretical_opt_bound(k, p_)) <= cfg_.t_m;
            }
            case SearchFamily::MPS: {
                if (best.dplus.size() != 1) return false;
                double mx = *std::max_element(p_.begin(), p_.end());
                return pp == mx;
            }
            case SearchFamily::BME: {
                const double pm = pr(best.dminus);
                if (pp == 0.5) return false;
                if (pp < 0.5 && std::fabs(static_cast<double>(best.dplus.size()) - (nd - 1)) <= cfg_.t_m) return true;
                if (pm < 0.5 && std::fabs(static_cast<double>(best.dminus.size()) - (nd - 1)) <= cfg_.t_m) return true;
                return false;
            }
        }
        return false;
    }

    bool prune(const CanonicalNode& P, const CanonicalNode& best) const {
        if (!opts_.prune || !is_qpart(P)) return false;
        const std::size_t nd = P.dplus.size() + P.dminus.size();
        switch (family_) {
            case SearchFamily::Entropy:
                return pr(P.dplus) >= 0.5;
            case SearchFamily::Split:
                return P.dplus.size() >= nd / 2;
            case SearchFamily::Rio: {
                const std::size_t n = static_cast<std::size_t>(target(P));
                if (P.dplus.size() == n) return true;
                if (best.dplus.size() == n) {
                    if (P.dplus.size() > n) return true;
                    if (pr(P.dplus) - 0.5 >= std::fabs(pr(best.dplus) - 0.5)) return true;
                }
                return false;
            }
            case SearchFamily::KL:
            case SearchFamily::EMCb:
                return false;
            case SearchFamily::MPS:
                return P.dplus.size() >= 1;
            case SearchFamily::BME: {
                if (pr(P.dminus) < 0.5) return true;
                if (pr(P.dplus) < 0.5 && P.dminus.size() - 1 <= P.dplus.size()) {
                    double mn = p_[static_cast<std::size_t>(P.dminus.front())];
                    for (int d : P.dminus) mn = std::min(mn, p_[static_cast<std::size_t>(d)]);
                    if (pr(P.dminus) - mn < 0.5) return true;
                }
                return false;
            }
        }
        return false;
    }

    std::pair<CanonicalNode, bool> partition(const CanonicalNode& P, const CanonicalNode& b, DiagSet used, int depth) {
        visited_.push_back(P.dplus);
        CanonicalNode best = update_best(P, b);
        if (opt(best)) {
            log(P, depth, "optimal");
            return {best, true};
        }
        if (prune(P, best)) {
            ++stats_.prunings;
            log(P, depth, "pruned");
            return {best, false};
        }
        log(P, depth, "");
        std::vector<CanonicalNode> sucs = successors(P, used, diags_);
        ++stats_.expanded;
        stats_.generated += sucs.size();
        while (!sucs.empty()) {
            std::size_t bi = 0;
            double bh = search_heuristic(cfg_, sucs[0].partition(), p_);
            for (std::size_t i = 1; i < sucs.size(); ++i) {
                double h = search_heuristic(cfg_, sucs[i].partition(), p_);
                if (h < bh) { bh = h; bi = i; }
            }
            CanonicalNode next = sucs[bi];
            int added = set_minus(next.dplus, P.dplus).front();
            auto [found, is_opt] = partition(next, best, used, depth + 1);
            used = with(used, added);
            if (is_opt) return {found, true};
            best = std::move(found);
            sucs.erase(sucs.begin() + static_cast<std::ptrdiff_t>(bi));
        }
        if (depth > 0) ++stats_.backtracks;
        return {best, false};
    }
};

}  // namespace

SearchResult find_qpartition(const std::vector<AxiomSet>& diags, const std::vector<double>& p,
                             const MeasureConfig& cfg, const SearchOptions& opts) {
    if (diags.size() < 2) throw std::invalid_argument("need at least two leading diagnoses");
    if (p.size() != diags.size()) throw std::invalid_argument("probability vector does not match the leading diagnoses");
    if (search_family(cfg.kind) == SearchFamily::Rio && opts.rio_method == RioMethod::EntFirst) {
        MeasureConfig ent = cfg;
        ent.kind = MeasureKind::ENT;
        ent.t_m = cfg.t_ent;
        SearchResult first = Searcher(diags, p, ent, opts).run();
        std::size_t smaller = std::min(first.node.dplus.size(), first.node.dminus.size());
        if (static_cast<int>(smaller) >= rio_target(cfg.rio.c, diags.size())) return first;
        SearchResult second = Searcher(diags, p, cfg, opts).run();
        second.stats.generated += first.stats.generated;
        second.stats.expanded += first.stats.expanded;
        second.stats.prunings += first.stats.prunings;
        second.stats.backtracks += first.stats.backtracks;
        first.visited.insert(first.visited.end(), second.visited.begin(), second.visited.end());
        second.visited = std::move(first.visited);
        second.trace = first.trace + second.trace;
        return second;
    }
    return Searcher(diags, p, cfg, opts).run();
}

}  // namespace kbd
