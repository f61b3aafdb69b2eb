// Acceptance checks for the debugging engine. One PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "kbd/enrich.hpp"
#include "kbd/optimize.hpp"
#include "kbd/queryselect.hpp"
#include "support.hpp"

using namespace kbd;
using namespace testutil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail << what;
        }
    }
};

MeasureConfig m(const std::string& s) { return parse_measure(s); }

std::vector<AxiomSet> brute_conflicts_of(const DPI& dpi) {
    std::vector<AxiomSet> invalid;
    for (const auto& s : all_subsets(static_cast<int>(dpi.K.size())))
        if (!is_valid_kb(dpi.axioms(s), dpi)) invalid.push_back(s);
    return minimal_only(invalid);
}

Outcome conflicts() {
    Outcome o;
    DPI dpi = example_dpi();
    const std::vector<AxiomSet> want{{1, 3}, {1, 6}, {0, 1, 2}, {2, 4, 5, 6}};
    auto t0 = Clock::now();
    auto brute = brute_conflicts_of(dpi);
    auto hs = compute_all_conflicts(dpi);
    double secs = seconds_since(t0);
    o.require(brute == want, "brute force gave " + std::to_string(brute.size()) + " conflicts");
    o.require(hs == want, "HS-tree gave " + std::to_string(hs.size()) + " conflicts");
    o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
    if (o.ok) o.detail << "4 conflicts match, " << secs << " s";
    return o;
}

Outcome diagnoses() {
    Outcome o;
    DPI dpi = example_dpi();
    auto t0 = Clock::now();
    auto got = compute_leading_diagnoses(dpi, FaultModel::uniform(7), 6);
    auto brute = brute_diagnoses(dpi);
    double secs = seconds_since(t0);
    o.require(got == example_diags(), "leading diagnoses differ");
    std::set<AxiomSet> a(brute.begin(), brute.end());
    auto ex = example_diags();
    o.require(a == std::set<AxiomSet>(ex.begin(), ex.end()), "brute-force diagnoses differ");
    for (std::size_t i = 0; i < got.size(); ++i)
        o.require(got[i].size() == (i < 4 ? 2u : 3u), "cardinality order broken at position " + std::to_string(i));
    o.require(secs < 1.0, "took " + std::to_string(secs) + " s");
    if (o.ok) o.detail << "6 diagnoses in order, " << secs << " s";
    return o;
}

Outcome canonical_queries() {
    Outcome o;
    auto d = pick(example_diags(), {0, 4, 5});
    o.require(discrimination_axioms(d) == AxiomSet{0, 1, 2, 3, 6}, "discrimination axioms differ");
    const std::vector<std::pair<DiagSet, std::optional<AxiomSet>>> table{
        {{0}, AxiomSet{0, 3, 6}}, {{1}, AxiomSet{1, 2}}, {{2}, AxiomSet{0, 1}},
        {{0, 1}, std::nullopt},   {{0, 2}, AxiomSet{0}}, {{1, 2}, AxiomSet{1}}};
    for (const auto& [seed, want] : table) {
        auto got = canonical_query(seed, d);
        o.require(got == want, "seed " + to_string(seed) + " gave " + (got ? to_string(*got) : "undefined"));
        if (got) {
            QPartition part = partition_of_explicit_query(*got, d);
            o.require(part.dplus == seed && part.dzero.empty(), "seed " + to_string(seed) + " partition differs");
        }
    }
    if (o.ok) o.detail << "6 seeds reproduced, {D1,D5} undefined";
    return o;
}

Outcome canonical_counts() {
    Outcome o;
    auto d = example_diags();
    std::size_t a = enumerate_all_canonical(d).size();
    std::size_t b = enumerate_all_canonical(pick(d, {0, 4, 5})).size();
    std::size_t c = enumerate_all_canonical(pick(d, {0, 1, 2})).size();
    o.detail << a << " / " << b << " / " << c;
    o.ok = a == 29 && b == 5 && c == 6;
    return o;
}

Outcome measure_values() {
    Outcome o;
    const std::vector<QPartition> q{
        {{0, 1, 3}, {2}, {}}, {{2, 3}, {1}, {0}}, {{0, 2, 3}, {1}, {}}, {{1, 2, 3}, {0}, {}},
        {{1}, {2, 3}, {0}},   {{3}, {0, 1, 2}, {}}, {{0, 3}, {1, 2}, {}},  {{1, 3}, {0, 2}, {}},
        {{2, 3}, {0, 1}, {}}, {{0}, {1, 2, 3}, {}}};
    const std::vector<double> p{0.15, 0.3, 0.05, 0.5};
    const std::vector<double> spl{2, 2, 2, 2, 2, 2, 0, 0, 0, 2};
    const std::vector<double> spl2{2, 3, 2, 2, 3, 2, 0, 0, 0, 2};
    const std::vector<double> ent{0.71, 0.15, 0.12, 0.39, 0.15, 0.0, 0.07, 0.28, 0.01, 0.39};
    std::vector<std::string> off;
    for (std::size_t i = 0; i < q.size(); ++i) {
        o.require(eval_measure(m("SPL"), q[i], p) == spl[i], "SPL Q" + std::to_string(i + 1));
        o.require(eval_measure(m("SPLz:2"), q[i], p) == spl2[i], "SPL2 Q" + std::to_string(i + 1));
        double v = eval_measure(m("ENT"), q[i], p);
        if (std::fabs(v - ent[i]) > 0.005) {
            std::ostringstream s;
            s << "Q" << i + 1 << " ENT " << std::fixed;
            s.precision(4);
            s << v << " vs " << ent[i];
            off.push_back(s.str());
        }
    }
    std::vector<double> p1(10), p2(10);
    for (int i = 0; i < 10; ++i) {
        p1[static_cast<std::size_t>(i)] = i < 3 ? 0.05 / 3 : 0.95 / 7;
        p2[static_cast<std::size_t>(i)] = i < 5 ? 0.05 : 0.15;
    }
    QPartition a{{0, 1, 2}, {3, 4, 5, 6, 7, 8, 9}, {}};
    QPartition b{{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, {}};
    o.require(std::fabs(eval_measure(m("KL"), a, p1) - 1.35) <= 0.01, "KL first example");
    o.require(std::fabs(eval_measure(m("KL"), b, p2) - 1.21) <= 0.01, "KL second example");
    o.require(std::fabs(eval_measure(m("EMCb"), a, p1) - 3.2) <= 1e-9, "EMCb first example");
    o.require(std::fabs(eval_measure(m("EMCb"), b, p2) - 5.0) <= 1e-9, "EMCb second example");
    if (!off.empty()) {
        o.ok = false;
        o.detail << "SPL/SPL2/KL/EMCb match; ENT outside tolerance:";
        for (const auto& s : off) o.detail << " [" << s << "]";
        o.detail << " (printed value differs from 1.15 - H(0.625) for D0={D1})";
    } else if (o.ok) {
        o.detail << "all values match";
    }
    return o;
}

struct Trace {
    const char* measure;
    DiagSet dplus;
    std::size_t generated, expanded;
};

const std::vector<Trace>& traces() {
    static const std::vector<Trace> t{
        {"ENT:t=0.05", {3, 4}, 9, 2},
        {"SPL:t=0", {0, 1, 2}, 12, 3},
        {"RIO:c=0.4,cl=0.1,ch=0.5,tcard=0,tent=0.05", {1, 2, 3}, 13, 3},
        {"RIO:c=0.3,cl=0.1,ch=0.5,tcard=0,tent=0.05", {3, 4}, 9, 2},
        {"MPS", {4}, 7, 1},
        {"BME:t=1", {0, 2, 3, 5}, 16, 4},
    };
    return t;
}

Outcome search_traces() {
    Outcome o;
    auto d = example_diags();
    auto p = example_probs();
    double slowest = 0;
    for (const auto& t : traces()) {
        auto t0 = Clock::now();
        auto r = find_qpartition(d, p, m(t.measure));
        double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        std::string name = t.measure;
        o.require(r.node.dplus == t.dplus, name + " returned D+=" + to_string(r.node.dplus));
        o.require(r.stats.generated == t.generated && r.stats.expanded == t.expanded,
                  name + " counts " + std::to_string(r.stats.generated) + "/" + std::to_string(r.stats.expanded));
        o.require(secs < 1.0, name + " took " + std::to_string(secs) + " s");
    }
    if (o.ok) o.detail << "6 traces exact, slowest " << slowest << " s";
    return o;
}

Outcome reasoner_free() {
    Outcome o;
    auto d = example_diags();
    auto p = example_probs();
    std::vector<double> fault(7, 0.1);
    for (const auto& t : traces()) {
        reset_reasoner_calls();
        auto r = find_qpartition(d, p, m(t.measure));
        select_queries(r.node, fault, {});
        o.require(reasoner_calls() == 0, std::string(t.measure) + " used the reasoner");
    }
    DPI dpi = example_dpi();
    std::size_t enriched = 0;
    for (const auto& node : enumerate_all_canonical(d)) {
        auto q = canonical_query(node.dplus, d);
        reset_reasoner_calls();
        enrich_query(dpi, dpi.axioms(*q), d, {EntailmentType::AtomImplications});
        o.require(reasoner_calls() == 2, "enrichment used " + std::to_string(reasoner_calls()) + " calls");
        ++enriched;
    }
    if (o.ok) o.detail << "0 calls in 6 searches + selections, 2 per enrichment on " << enriched << " queries";
    return o;
}

std::optional<QPartition> degrade(std::mt19937& rng, const QPartition& a) {
    std::uniform_int_distribution<int> coin(0, 1);
    QPartition b;
    b.dzero = a.dzero;
    for (int x : a.dplus) (coin(rng) ? b.dplus : b.dzero).push_back(x);
    for (int x : a.dminus) (coin(rng) ? b.dminus : b.dzero).push_back(x);
    if (b.dplus.empty() || b.dminus.empty() || b.dzero.size() == a.dzero.size()) return std::nullopt;
    b.dzero = normalized(b.dzero);
    if (coin(rng)) std::swap(b.dplus, b.dminus);
    return b;
}

void dpr_properties(Outcome& o, std::size_t& pairs) {
    std::mt19937 rng(101);
    const std::vector<MeasureConfig> satisfying{m("SPLz:2"), m("SPLz:1.5"), m("EMCaz:2"), m("EMCaz:3"), m("MPSp")};
    const std::vector<MeasureConfig> consistent{m("SPL"), m("MPS")};
    while (pairs < 10000 && o.ok) {
        std::uniform_int_distribution<std::size_t> n(3, 9);
        std::size_t nd = n(rng);
        auto p = random_probs(rng, nd);
        auto a = random_partition(rng, nd, rng() % 3 == 0);
        auto b = degrade(rng, a);
        if (!b) continue;
        ++pairs;
        o.require(is_discrimination_preferred(a, *b), "degraded pair not discrimination-preferred");
        for (const auto& c : satisfying) o.require(prefers(c, a, *b, p) == Preference::A, to_string(c) + " violates DPR");
        for (const auto& c : consistent) o.require(prefers(c, a, *b, p) != Preference::B, to_string(c) + " inconsistent");
    }
}

void equivalence_classes(Outcome& o, std::size_t& pairs) {
    std::mt19937 rng(103);
    const std::vector<std::vector<MeasureConfig>> classes{
        {m("ENT"), m("ENTz:2"), m("H"), m("LC"), m("M"), m("Gini"), m("EMCa"), m("EMCaz:3")},
        {m("SPL"), m("SPLz:2"), m("VE")},
        {m("MPS"), m("MPSp")},
        {m("RIO:c=0.3"), m("RIOz:3,c=0.3")},
    };
    for (; pairs < 10000 && o.ok; ++pairs) {
        std::uniform_int_distribution<std::size_t> n(2, 8);
        std::size_t nd = n(rng);
        auto p = random_probs(rng, nd);
        auto a = random_partition(rng, nd, true);
        auto b = random_partition(rng, nd, true);
        for (const auto& cls : classes) {
            Preference first = prefers(cls[0], a, b, p);
            for (const auto& c : cls) o.require(prefers(c, a, b, p) == first, to_string(c) + " leaves its class");
        }
    }
}

void hs_selection(Outcome& o, std::size_t& nodes) {
    auto d = example_diags();
    std::vector<double> fault{0.1, 0.2, 0.05, 0.3, 0.15, 0.25, 0.12};
    SelectionParams all;
    all.n_max = 100000;
    all.time_budget = std::chrono::milliseconds(60000);
    for (const auto& node : enumerate_all_canonical(d)) {
        auto got = select_queries(node, fault, all);
        auto want = brute_mhs(node.traits);
        o.require(std::set<AxiomSet>(got.begin(), got.end()) == std::set<AxiomSet>(want.begin(), want.end()),
                  "HS-tree selection differs at D+=" + to_string(node.dplus));
        ++nodes;
    }
}

void enrich_and_minimise(Outcome& o, std::size_t& checked, std::size_t& optimum_checked) {
    DPI dpi = example_dpi();
    std::mt19937 rng(107);
    std::uniform_real_distribution<double> u(0.01, 0.4);
    for (const auto& diags : {example_diags(), pick(example_diags(), {0, 1, 2}), pick(example_diags(), {0, 4, 5})})
        for (const auto& node : enumerate_all_canonical(diags)) {
            std::vector<double> fault(7);
            for (auto& x : fault) x = u(rng);
            QPartition part = node.partition();
            AxiomSet q = select_queries(node, fault, {})[0];
            auto e = enrich_query(dpi, dpi.axioms(q), diags, {EntailmentType::AtomImplications});
            o.require(qpartition_of_query(dpi, diags, e.query) == part, "enrichment changed a q-partition");
            auto opt = optimize_query(e.query, q, part, diags, dpi, fault);
            o.require(qpartition_of_query(dpi, diags, opt) == part, "minQ changed a q-partition");
            for (const auto& f : opt) {
                FormulaSet less = opt;
                less.erase(f);
                o.require(!(qpartition_of_query(dpi, diags, less) == part), "minQ output not set-minimal");
            }
            ++checked;
            if (e.query.size() > 10) continue;

            std::vector<Formula> order(e.implied.begin(), e.implied.end());
            AxiomSet qs = q;
            std::stable_sort(qs.begin(), qs.end(), [&](int a, int b) {
                return fault[static_cast<std::size_t>(a)] < fault[static_cast<std::size_t>(b)];
            });
            for (int a : qs) order.push_back(dpi.K[static_cast<std::size_t>(a)]);
            const std::size_t k = order.size();
            std::vector<std::uint32_t> preserving, minimal;
            for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
                FormulaSet s;
                for (std::size_t i = 0; i < k; ++i)
                    if (mask >> i & 1u) s.insert(order[i]);
                if (qpartition_of_query(dpi, diags, s) == part) preserving.push_back(mask);
            }
            for (auto a : preserving)
                if (std::none_of(preserving.begin(), preserving.end(), [&](auto b) { return b != a && (b & a) == b; }))
                    minimal.push_back(a);
            auto key = [&](std::uint32_t mask) {
                std::vector<int> v;
                for (int i = static_cast<int>(k) - 1; i >= 0; --i)
                    if (mask >> i & 1u) v.push_back(i);
                return v;
            };
            auto maxp = [&](std::uint32_t mask) {
                double v = -1;
                for (std::size_t i = 0; i < k; ++i)
                    if ((mask >> i & 1u) && i >= e.implied.size())
                        v = std::max(v, fault[static_cast<std::size_t>(dpi.K.index_of(order[i]))]);
                return v;
            };
            std::uint32_t best = *std::min_element(minimal.begin(), minimal.end(),
                                                   [&](auto a, auto b) { return key(a) < key(b); });
            double best_maxp = 1e9;
            for (auto mk : minimal) best_maxp = std::min(best_maxp, maxp(mk));
            std::uint32_t got = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (opt.contains(order[i])) got |= 1u << i;
            o.require(got == best && opt.size() == static_cast<std::size_t>(__builtin_popcount(got)),
                      "minQ differs from the brute-force optimum at D+=" + to_string(node.dplus));
            o.require(std::fabs(maxp(got) - best_maxp) < 1e-12, "minQ does not minimise the retained fault");
            ++optimum_checked;
        }
}

Outcome properties() {
    Outcome o;
    std::size_t dpr = 0, eq = 0, nodes = 0, checked = 0, optimum = 0;
    dpr_properties(o, dpr);
    equivalence_classes(o, eq);
    hs_selection(o, nodes);
    enrich_and_minimise(o, checked, optimum);
    if (o.ok)
        o.detail << dpr << " DPR pairs, " << eq << " equivalence pairs, " << nodes << " HS nodes, " << checked
                 << " enrich/minQ cases, " << optimum << " brute-force optima";
    return o;
}

Outcome end_to_end() {
    Outcome o;
    DPI dpi = example_dpi();
    double slowest = 0;
    std::size_t runs = 0;
    for (const char* measure : {"ENT", "SPL", "RIO", "MPS", "BME", "EMCb", "KL"})
        for (const auto& dt : example_diags()) {
            SessionConfig cfg;
            cfg.measure = m(measure);
            auto t0 = Clock::now();
            auto r = run_simulated(dpi, dt, cfg, FaultModel::uniform(7));
            double secs = seconds_since(t0);
            slowest = std::max(slowest, secs);
            o.require(r.diagnosis == dt, std::string(measure) + " ended at " + to_string(r.diagnosis));
            o.require(secs < 5.0, std::string(measure) + " took " + std::to_string(secs) + " s");
            ++runs;
        }
    if (o.ok) o.detail << runs << " runs reach the true diagnosis, slowest " << slowest << " s";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"conflicts", conflicts},
        {"diagnoses", diagnoses},
        {"canonical queries", canonical_queries},
        {"canonical counts", canonical_counts},
        {"measure values", measure_values},
        {"search traces", search_traces},
        {"reasoner-free guarantee", reasoner_free},
        {"property suites", properties},
        {"end-to-end", end_to_end},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail << "exception: " << e.what();
        }
        std::printf("%s  %s: %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.str().c_str());
        failed += o.ok ? 0 : 1;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
