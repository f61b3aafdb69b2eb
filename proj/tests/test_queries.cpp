#include <doctest.h>

#include <set>

#include "kbd/enrich.hpp"
#include "kbd/optimize.hpp"
#include "kbd/qpartition.hpp"
#include "kbd/queryselect.hpp"
#include "kbd/reasoner.hpp"
#include "support.hpp"

using namespace kbd;
using namespace testutil;

namespace {

SelectionParams exhaustive(SelectionStrategy s = SelectionStrategy::MinSum) {
    SelectionParams p;
    p.strategy = s;
    p.n_max = 100000;
    p.time_budget = std::chrono::milliseconds(60000);
    return p;
}

std::vector<std::vector<AxiomSet>> example_leading_sets() {
    auto d = example_diags();
    return {d, pick(d, {0, 1, 2}), pick(d, {0, 4, 5}), pick(d, {1, 3, 5}), pick(d, {0, 1, 2, 3})};
}

double sum_fault(const AxiomSet& s, const std::vector<double>& f) {
    double v = 0;
    for (int a : s) v += f[static_cast<std::size_t>(a)];
    return v;
}

double max_fault(const AxiomSet& s, const std::vector<double>& f) {
    double v = 0;
    for (int a : s) v = std::max(v, f[static_cast<std::size_t>(a)]);
    return v;
}

FormulaSet fs(std::initializer_list<const char*> texts) {
    FormulaSet out;
    for (const char* t : texts) out.insert(parse_formula(t));
    return out;
}

}  // namespace

TEST_SUITE("queryselect") {

TEST_CASE("set-minimal traits") {
    auto d = example_diags();
    CanonicalNode n = make_node({0, 1}, d);
    CHECK(set_min_traits(n) == std::vector<AxiomSet>{{5}, {6}});
    CanonicalNode dup = make_node({1, 2, 3, 4}, d);
    CHECK(set_min_traits(dup) == std::vector<AxiomSet>{{2}});
}

TEST_CASE("selection examples") {
    auto d = example_diags();
    std::vector<double> f(7, 0.1);
    CHECK(select_queries(make_node({0, 1}, pick(d, {0, 1, 2})), f, {}) == std::vector<AxiomSet>{{5}});
    CHECK(select_queries(make_node({1, 2}, pick(d, {0, 4, 5})), f, {}) == std::vector<AxiomSet>{{1}});
    CHECK(select_queries(make_node({0, 1}, d), f, {}) == std::vector<AxiomSet>{{5, 6}});
    SelectionParams bad;
    bad.n_min = 3;
    bad.n_max = 2;
    CHECK_THROWS(select_queries(make_node({0, 1}, d), f, bad));
}

TEST_CASE("HS-tree output equals all minimal hitting sets of the traits") {
    std::mt19937 rng(79);
    DPI dpi = example_dpi();
    std::size_t nodes = 0;
    for (const auto& diags : example_leading_sets())
        for (const auto& node : enumerate_all_canonical(diags)) {
            ++nodes;
            std::vector<double> fault(7);
            std::uniform_real_distribution<double> u(0.01, 0.4);
            for (auto& x : fault) x = u(rng);
            auto brute = brute_mhs(node.traits);
            std::set<AxiomSet> want(brute.begin(), brute.end());
            for (auto strat : {SelectionStrategy::BreadthFirst, SelectionStrategy::MinSum, SelectionStrategy::MinMax}) {
                reset_reasoner_calls();
                auto got = select_queries(node, fault, exhaustive(strat));
                REQUIRE(reasoner_calls() == 0);
                REQUIRE(std::set<AxiomSet>(got.begin(), got.end()) == want);
                REQUIRE(got.size() == want.size());
                double best_sum = 1e9, best_max = 1e9;
                for (const auto& h : brute) {
                    best_sum = std::min(best_sum, sum_fault(h, fault));
                    best_max = std::min(best_max, max_fault(h, fault));
                }
                if (strat == SelectionStrategy::MinSum) REQUIRE(sum_fault(got[0], fault) == doctest::Approx(best_sum));
                if (strat == SelectionStrategy::MinMax) REQUIRE(max_fault(got[0], fault) == doctest::Approx(best_max));
            }
            for (const auto& q : brute)
                REQUIRE(qpartition_of_query(dpi, diags, dpi.axioms(q)) == node.partition());
        }
    CHECK(nodes > 40);
}

TEST_CASE("selection respects nMin and nMax") {
    auto d = example_diags();
    std::vector<double> f(7, 0.2);
    std::optional<CanonicalNode> rich;
    for (const auto& n : enumerate_all_canonical(d))
        if (!rich && brute_mhs(n.traits).size() > 1) rich = n;
    REQUIRE(rich);
    auto all = select_queries(*rich, f, exhaustive());
    CHECK(all.size() == brute_mhs(rich->traits).size());
    SelectionParams p;
    p.n_min = 1;
    p.n_max = 1;
    CHECK(select_queries(*rich, f, p).size() == 1);
    p.n_max = 2;
    CHECK(select_queries(*rich, f, p).size() == 2);
    CHECK(select_queries(make_node({0, 1}, d), f, p).size() == 1);
}

}

TEST_SUITE("enrich") {

TEST_CASE("enrichment example") {
    DPI dpi = example_dpi();
    auto diags = pick(example_diags(), {0, 1, 2});
    reset_reasoner_calls();
    auto e = enrich_query(dpi, dpi.axioms({5}), diags, {EntailmentType::AtomImplications});
    CHECK(reasoner_calls() == 2);
    CHECK(e.query.contains(dpi.K[5]));
    CHECK(e.query.contains(parse_formula("M -> B")));
    CHECK(e.query.contains(parse_formula("C -> K")));
    for (const char* f : {"M -> C", "M -> Z", "Z -> X"}) CHECK_FALSE(e.query.contains(parse_formula(f)));
    CHECK(e.query.size() == e.implied.size() + 1);
}

TEST_CASE("no implied formulas leaves the query unchanged") {
    DPI dpi = parse_dpi("[K]\na\nb\n[N]\na & b\n");
    auto diags = compute_leading_diagnoses(dpi, FaultModel::uniform(2), 0);
    REQUIRE(diags.size() == 2);
    auto e = enrich_query(dpi, dpi.axioms({0}), diags, {EntailmentType::AtomImplications});
    CHECK(e.implied.empty());
    CHECK(e.query == dpi.axioms({0}));
}

TEST_CASE("enrichment preserves q-partitions and adds only new dependent formulas") {
    DPI dpi = example_dpi();
    FormulaSet kbpu = dpi.K.united(dpi.B).united(dpi.union_P());
    const EntailmentTypeSet types{EntailmentType::AtomImplications, EntailmentType::Literals};
    std::size_t checked = 0;
    for (const auto& diags : example_leading_sets()) {
        AxiomSet ud = union_of(range_set(static_cast<int>(diags.size())), diags);
        FormulaSet base = dpi.K.minus(dpi.axioms(ud)).united(dpi.B).united(dpi.union_P());
        for (const auto& node : enumerate_all_canonical(diags)) {
            auto q = canonical_query(node.dplus, diags);
            REQUIRE(q);
            reset_reasoner_calls();
            auto e = enrich_query(dpi, dpi.axioms(*q), diags, types);
            REQUIRE(reasoner_calls() == 2);
            REQUIRE(qpartition_of_query(dpi, diags, e.query) == node.partition());
            for (const auto& f : e.implied) {
                REQUIRE_FALSE(kbpu.contains(f));
                REQUIRE_FALSE(entails(base, f));
                REQUIRE(entails(base.united(dpi.axioms(*q)), f));
            }
            ++checked;
        }
    }
    CHECK(checked > 40);
}

}

TEST_SUITE("optimize") {

TEST_CASE("q-partition constancy") {
    DPI dpi = example_dpi();
    auto diags = pick(example_diags(), {0, 1, 2});
    QPartition part{{0, 1}, {2}, {}};
    CHECK(is_qpart_const(fs({"M -> B"}), part, diags, dpi));
    CHECK_FALSE(is_qpart_const({}, part, diags, dpi));
    CHECK(is_qpart_const(dpi.axioms(*canonical_query({0, 1}, diags)), part, diags, dpi));
    CHECK(qpartition_of_query(dpi, diags, fs({"M -> B"})) == part);
}

TEST_CASE("minimisation examples") {
    DPI dpi = example_dpi();
    auto diags = pick(example_diags(), {0, 1, 2});
    QPartition part{{0, 1}, {2}, {}};
    std::vector<Formula> ordered{parse_formula("M -> B"), parse_formula("C -> K"), parse_formula("M -> K"), dpi.K[5]};
    CHECK(min_q({}, ordered, {}, part, diags, dpi) == fs({"M -> B"}));
    CHECK(min_q({}, {dpi.K[5]}, {}, part, diags, dpi) == FormulaSet{dpi.K[5]});
    CHECK(min_q(fs({"M -> B"}), {dpi.K[5]}, fs({"M -> B"}), part, diags, dpi).empty());

    std::vector<double> fault(7, 0.1);
    CHECK(optimize_query(FormulaSet{dpi.K[5]}, {5}, part, diags, dpi, fault) == FormulaSet{dpi.K[5]});
    auto e = enrich_query(dpi, dpi.axioms({5}), diags, {EntailmentType::AtomImplications});
    auto opt = optimize_query(e.query, {5}, part, diags, dpi, fault);
    CHECK(opt.size() == 1);
    CHECK_FALSE(opt.contains(dpi.K[5]));
    CHECK(qpartition_of_query(dpi, diags, opt) == part);
}

TEST_CASE("optimised queries match the brute-force optimum") {
    DPI dpi = example_dpi();
    std::mt19937 rng(83);
    std::uniform_real_distribution<double> u(0.01, 0.4);
    std::size_t checked = 0, with_q = 0;
    for (const auto& types : std::vector<EntailmentTypeSet>{{EntailmentType::AtomImplications}, {EntailmentType::Literals}})
        for (const auto& diags : example_leading_sets())
            for (const auto& node : enumerate_all_canonical(diags)) {
                std::vector<double> fault(7);
                for (auto& x : fault) x = u(rng);
                AxiomSet q = select_queries(node, fault, {})[0];
                auto e = enrich_query(dpi, dpi.axioms(q), diags, types);
                if (e.query.size() > 10) continue;
                QPartition part = node.partition();

                // Sorted list: implied formulas, then Q ascending by fault.
                std::vector<Formula> order(e.implied.begin(), e.implied.end());
                AxiomSet qs = q;
                std::stable_sort(qs.begin(), qs.end(), [&](int a, int b) {
                    return fault[static_cast<std::size_t>(a)] < fault[static_cast<std::size_t>(b)];
                });
                for (int a : qs) order.push_back(dpi.K[static_cast<std::size_t>(a)]);
                REQUIRE(order.size() == e.query.size());

                const std::size_t k = order.size();
                std::vector<std::uint32_t> preserving;
                for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
                    FormulaSet s;
                    for (std::size_t i = 0; i < k; ++i)
                        if (mask >> i & 1u) s.insert(order[i]);
                    if (qpartition_of_query(dpi, diags, s) == part) preserving.push_back(mask);
                }
                std::vector<std::uint32_t> minimal;
                for (auto a : preserving) {
                    bool min = true;
                    for (auto b : preserving)
                        if (b != a && (b & a) == b) { min = false; break; }
                    if (min) minimal.push_back(a);
                }
                REQUIRE_FALSE(minimal.empty());
                // Preferred minimal set: smallest index vector sorted descending.
                auto key = [&](std::uint32_t mask) {
                    std::vector<int> v;
                    for (int i = static_cast<int>(k) - 1; i >= 0; --i)
                        if (mask >> i & 1u) v.push_back(i);
                    return v;
                };
                std::uint32_t best = *std::min_element(minimal.begin(), minimal.end(),
                                                       [&](auto a, auto b) { return key(a) < key(b); });

                auto got = optimize_query(e.query, q, part, diags, dpi, fault);
                FormulaSet want;
                for (std::size_t i = 0; i < k; ++i)
                    if (best >> i & 1u) want.insert(order[i]);
                REQUIRE(got.size() == want.size());
                for (const auto& f : want) REQUIRE(got.contains(f));

                // Set-minimal and q-partition preserving.
                REQUIRE(is_qpart_const(got, part, diags, dpi));
                for (const auto& f : got) {
                    FormulaSet less = got;
                    less.erase(f);
                    REQUIRE_FALSE(qpartition_of_query(dpi, diags, less) == part);
                }

                // Disjoint from Q when possible, otherwise minimal maximum fault of retained K axioms.
                FormulaSet qset = dpi.axioms(q);
                auto maxp = [&](std::uint32_t mask) {
                    double v = -1;
                    for (std::size_t i = 0; i < k; ++i)
                        if (mask >> i & 1u) {
                            int idx = dpi.K.index_of(order[i]);
                            if (idx >= 0 && contains(q, idx)) v = std::max(v, fault[static_cast<std::size_t>(idx)]);
                        }
                    return v;
                };
                double got_maxp = -1;
                for (const auto& f : got)
                    if (qset.contains(f)) got_maxp = std::max(got_maxp, fault[static_cast<std::size_t>(dpi.K.index_of(f))]);
                double opt_maxp = 1e9;
                for (auto mk : minimal) opt_maxp = std::min(opt_maxp, maxp(mk));
                REQUIRE(got_maxp == doctest::Approx(opt_maxp));
                if (got_maxp >= 0) ++with_q;
                ++checked;
            }
    CHECK(checked > 30);
    CHECK(with_q > 0);
}

}
