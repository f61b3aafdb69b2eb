#include <doctest.h>

#include "kbd/diagnosis.hpp"
#include "kbd/reasoner.hpp"
#include "support.hpp"

using namespace kbd;
using namespace testutil;

TEST_SUITE("dpi") {

TEST_CASE("example file") {
    DPI dpi = example_dpi();
    CHECK(dpi.K.size() == 7);
    CHECK(dpi.B.size() == 2);
    CHECK(dpi.P.size() == 1);
    CHECK(dpi.N.size() == 3);
    CHECK(dpi.axiom_label(0) == "ax1");
    DPI again = parse_dpi(render_dpi(dpi));
    CHECK(again.K == dpi.K);
    CHECK(again.B == dpi.B);
    CHECK(again.N.size() == 3);
}

TEST_CASE("format errors") {
    CHECK_THROWS_AS(parse_dpi("[K]\na\nb\n[B]\na\n"), DpiError);
    CHECK_THROWS(parse_dpi("[K]\na ->\n"));
    CHECK_THROWS_WITH_AS(parse_dpi("[K]\na\n[R]\ncoherency\n"), doctest::Contains("unsupported requirement"),
                         DpiError);
    CHECK_THROWS_AS(parse_dpi("[Q]\na\n"), DpiError);
    CHECK_THROWS_AS(parse_dpi("[K]\na\n[B]\n!x\n[P]\nx\n"), DpiError);
    DPI ok = parse_dpi("[K]\na # comment\nb\n[N]\n[P]\nc ; d\n");
    CHECK(ok.N.empty());
    REQUIRE(ok.P.size() == 1);
    CHECK(ok.P[0].size() == 2);
}

TEST_CASE("valid KB examples") {
    DPI dpi = example_dpi();
    CHECK(is_valid_kb(dpi.axioms({0, 1}), dpi));
    CHECK_FALSE(is_valid_kb(dpi.axioms({1, 3}), dpi));
    CHECK(is_valid_kb({}, dpi));
}

TEST_CASE("K minus D is valid exactly for supersets of a diagnosis") {
    DPI dpi = example_dpi();
    auto diags = example_diags();
    for (const auto& d : all_subsets(7)) {
        bool expected = false;
        for (const auto& m : diags) expected = expected || is_subset(m, d);
        FormulaSet rest = dpi.K.minus(dpi.axioms(d));
        REQUIRE(is_valid_kb(rest, dpi) == expected);
        REQUIRE(tt_valid_kb(rest, dpi) == expected);
    }
}

TEST_CASE("a set is a conflict iff it is invalid") {
    DPI dpi = example_dpi();
    for (const auto& c : all_subsets(7)) REQUIRE(is_valid_kb(dpi.axioms(c), dpi) == tt_valid_kb(dpi.axioms(c), dpi));
}

TEST_CASE("apply diagnosis") {
    DPI dpi = example_dpi();
    FormulaSet s = apply_diagnosis(dpi, {1, 2});
    FormulaSet expected = dpi.axioms({0, 3, 4, 5, 6}).united(dpi.union_P());
    CHECK(s == expected);
    CHECK(is_solution_kb(s, dpi));
    CHECK(apply_diagnosis(dpi, range_set(7)) == dpi.union_P());
    DPI valid = parse_dpi("[K]\na\na -> b\n[P]\nb\n");
    CHECK(apply_diagnosis(valid, {}) == valid.K.united(valid.union_P()));
}

TEST_CASE("update appends test cases") {
    DPI dpi = example_dpi();
    FormulaSet q{parse_formula("M -> B")};
    DPI t = update_dpi(dpi, q, true);
    REQUIRE(t.P.size() == 2);
    CHECK(t.P[1] == q);
    CHECK(t.N.size() == 3);
    DPI f = update_dpi(t, q, false);
    CHECK(f.N.size() == 4);
    CHECK(f.P.size() == 2);
    CHECK(f.K == dpi.K);
}

}

TEST_SUITE("diagnosis") {

TEST_CASE("conflicts") {
    DPI dpi = example_dpi();
    const std::vector<AxiomSet> expected{{1, 3}, {1, 6}, {0, 1, 2}, {2, 4, 5, 6}};
    CHECK(brute_conflicts(dpi) == expected);
    CHECK(compute_all_conflicts(dpi) == expected);

    auto one = quick_xplain(dpi, range_set(7));
    REQUIRE(one);
    CHECK(std::find(expected.begin(), expected.end(), *one) != expected.end());
    CHECK(quick_xplain(dpi, {1, 3}) == std::optional<AxiomSet>(AxiomSet{1, 3}));
    CHECK_FALSE(quick_xplain(dpi, {0, 1}));
}

TEST_CASE("quick_xplain returns minimal conflicts") {
    DPI dpi = example_dpi();
    for (const auto& c : all_subsets(7)) {
        auto got = quick_xplain(dpi, c);
        REQUIRE(got.has_value() == !is_valid_kb(dpi.axioms(c), dpi));
        if (!got) continue;
        REQUIRE(is_subset(*got, c));
        REQUIRE_FALSE(is_valid_kb(dpi.axioms(*got), dpi));
        for (int a : *got) REQUIRE(is_valid_kb(dpi.axioms(set_minus(*got, {a})), dpi));
    }
}

TEST_CASE("leading diagnoses") {
    DPI dpi = example_dpi();
    auto uniform = FaultModel::uniform(7);
    auto all = compute_leading_diagnoses(dpi, uniform, 0);
    auto diags = example_diags();
    CHECK(all == diags);
    CHECK(brute_diagnoses(dpi) == diags);
    CHECK(compute_leading_diagnoses(dpi, uniform, 6) == diags);
    CHECK(compute_leading_diagnoses(dpi, uniform, 4) == std::vector<AxiomSet>(diags.begin(), diags.begin() + 4));

    for (const auto& d : all)
        for (const auto& c : brute_conflicts(dpi)) REQUIRE(intersects(d, c));

    FormulaSet q{parse_formula("M -> B")};
    auto after = compute_leading_diagnoses(update_dpi(dpi, q, true), uniform, 0);
    CHECK(std::find(after.begin(), after.end(), diags[3]) == after.end());
}

TEST_CASE("best-first order follows the fault product") {
    DPI dpi = example_dpi();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.02, 0.45);
    auto brute = brute_diagnoses(dpi);
    for (int round = 0; round < 30; ++round) {
        FaultModel fm = FaultModel::uniform(7);
        for (auto& f : fm.fault) f = u(rng);
        auto sorted = brute;
        std::stable_sort(sorted.begin(), sorted.end(), [&](const AxiomSet& a, const AxiomSet& b) {
            return diagnosis_weight(fm, a) > diagnosis_weight(fm, b);
        });
        for (std::size_t n = 1; n <= brute.size(); ++n) {
            auto got = compute_leading_diagnoses(dpi, fm, n);
            REQUIRE(got.size() == n);
            for (std::size_t i = 0; i < n; ++i)
                REQUIRE(diagnosis_weight(fm, got[i]) == doctest::Approx(diagnosis_weight(fm, sorted[i])));
        }
    }
}

TEST_CASE("random small DPIs agree with brute force") {
    std::mt19937 rng(23);
    std::vector<std::string> atoms{"a", "b", "c", "d"};
    const char* ops[] = {" -> ", " & ", " | "};
    std::uniform_int_distribution<int> pa(0, 3), po(0, 2), coin(0, 1);
    int tested = 0;
    for (int round = 0; round < 200 && tested < 25; ++round) {
        std::string text = "[K]\n";
        std::uniform_int_distribution<int> nk(3, 7);
        int k = nk(rng);
        for (int i = 0; i < k; ++i) {
            std::string l = (coin(rng) ? "!" : "") + atoms[static_cast<std::size_t>(pa(rng))];
            std::string r = (coin(rng) ? "!" : "") + atoms[static_cast<std::size_t>(pa(rng))];
            text += l + ops[po(rng)] + r + "\n";
        }
        text += "[N]\n" + atoms[static_cast<std::size_t>(pa(rng))] + "\n";
        DPI dpi;
        try {
            dpi = parse_dpi(text);
        } catch (const DpiError&) {
            continue;
        }
        if (is_valid_kb(dpi.K, dpi)) continue;
        ++tested;
        auto brute = brute_diagnoses(dpi);
        auto got = compute_leading_diagnoses(dpi, FaultModel::uniform(dpi.K.size()), 0);
        std::sort(got.begin(), got.end());
        std::sort(brute.begin(), brute.end());
        REQUIRE(got == brute);
        auto conflicts = compute_all_conflicts(dpi);
        auto bc = brute_conflicts(dpi);
        std::sort(conflicts.begin(), conflicts.end());
        std::sort(bc.begin(), bc.end());
        REQUIRE(conflicts == bc);
    }
    CHECK(tested >= 10);
}

TEST_CASE("minimal hitting sets") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> elem(0, 7), size(1, 4), count(1, 5);
    for (int round = 0; round < 300; ++round) {
        std::vector<IndexSet> family;
        int c = count(rng);
        for (int i = 0; i < c; ++i) {
            IndexSet s;
            int n = size(rng);
            for (int j = 0; j < n; ++j) s.push_back(elem(rng));
            family.push_back(normalized(s));
        }
        REQUIRE(minimal_hitting_sets(family) == brute_mhs(family));
    }
}

TEST_CASE("probabilities") {
    FaultModel fm = FaultModel::uniform(7);
    for (const auto& d : example_diags()) CHECK(diagnosis_weight(fm, d) == doctest::Approx(std::pow(0.5, 7)));
    auto p = diagnosis_probabilities(fm, example_diags());
    for (double x : p) CHECK(x == doctest::Approx(1.0 / 6));
    CHECK_THROWS(parse_fault_file("1 0\n", 7));
    CHECK_THROWS(parse_fault_file("9 0.1\n", 7));
    FaultModel f = parse_fault_file("# c\n2 0.1\n", 3);
    CHECK(f.fault == std::vector<double>{0.5, 0.1, 0.5});
}

TEST_CASE("bayesian update") {
    std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    QPartition part{{0, 1}, {2, 3}, {}};
    auto post = bayesian_update(p, part, true);
    CHECK(post[2] == 0.0);
    CHECK(post[3] == 0.0);
    CHECK(post[0] == doctest::Approx(0.1 / 0.3));
    std::vector<double> u(4, 0.25);
    auto half = bayesian_update(u, part, true);
    CHECK(half[0] == doctest::Approx(0.5));
    CHECK(half[1] == doctest::Approx(0.5));

    QPartition with_zero{{0}, {1}, {2, 3}};
    auto z = bayesian_update(p, with_zero, false);
    double pf = 0.2 + 0.5 * 0.7;
    CHECK(z[0] == 0.0);
    CHECK(z[1] == doctest::Approx(0.2 / pf));
    CHECK(z[2] == doctest::Approx(0.15 / pf));

    std::mt19937 rng(31);
    for (int i = 0; i < 500; ++i) {
        auto q = random_probs(rng, 6);
        auto part2 = random_partition(rng, 6, false);
        bool a = i % 2 == 0;
        auto r = bayesian_update(q, part2, a);
        double s = 0;
        for (double x : r) s += x;
        REQUIRE(s == doctest::Approx(1.0));
        for (int d : (a ? part2.dminus : part2.dplus)) REQUIRE(r[static_cast<std::size_t>(d)] == 0.0);
        for (int d : (a ? part2.dplus : part2.dminus)) REQUIRE(r[static_cast<std::size_t>(d)] > 0.0);
    }
}

}
