#include <doctest.h>

#include <chrono>
#include <set>

#include "kbd/session.hpp"
#include "support.hpp"

using namespace kbd;
using namespace testutil;

namespace {

SessionConfig config(const std::string& measure) {
    SessionConfig cfg;
    cfg.measure = parse_measure(measure);
    return cfg;
}

const char* const kMeasures[] = {"ENT", "SPL", "RIO:c=0.25", "MPS", "BME", "EMCb", "KL"};

}  // namespace

TEST_SUITE("session") {

TEST_CASE("first query with explicit diagnosis probabilities") {
    DPI dpi = example_dpi();
    Session s(dpi, FaultModel::uniform(7), config("ENT:t=0.05"), example_weights());
    const PendingQuery* q = s.next_query();
    REQUIRE(q);
    CHECK(s.state() == SessionState::AwaitingAnswer);
    CHECK(q->part.dplus == DiagSet{3, 4});
    CHECK(q->part.dminus == DiagSet{0, 1, 2, 5});
    CHECK(q->part.dzero.empty());
    CHECK(q->p_true == doctest::Approx(0.48));
    CHECK(s.next_query() == q);
    CHECK(s.diagnoses() == example_diags());
    CHECK(s.probabilities()[4] == doctest::Approx(0.41));
}

TEST_CASE("simulated sessions reach every true diagnosis") {
    DPI dpi = example_dpi();
    for (const auto& weights : {DiagnosisWeights{}, example_weights()})
        for (const char* m : kMeasures)
            for (bool enrich : {false, true})
                for (const auto& dt : example_diags()) {
                    SessionConfig cfg = config(m);
                    cfg.enrich = enrich;
                    auto t0 = std::chrono::steady_clock::now();
                    auto r = run_simulated(dpi, dt, cfg, FaultModel::uniform(7), weights);
                    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    INFO(std::string(m), " ", to_string(dt), " enrich=", enrich);
                    REQUIRE(r.diagnosis == dt);
                    REQUIRE(secs < 5.0);
                    REQUIRE(r.query_count >= 1);
                    REQUIRE(r.rounds.size() == r.query_count);
                }
}

TEST_CASE("answers keep exactly the consistent side of the leading diagnoses") {
    DPI dpi = example_dpi();
    std::mt19937 rng(89);
    for (const char* m : kMeasures)
        for (const auto& dt : example_diags()) {
            FaultModel fm = FaultModel::uniform(7);
            std::uniform_real_distribution<double> u(0.05, 0.45);
            for (auto& f : fm.fault) f = u(rng);
            Session s(dpi, fm, config(m));
            while (const PendingQuery* q = s.next_query()) {
                REQUIRE(q->part.dzero.empty());
                REQUIRE_FALSE(q->part.dplus.empty());
                REQUIRE_FALSE(q->part.dminus.empty());
                auto before = s.diagnoses();
                auto probs = s.probabilities();
                bool ans = simulated_answer(dpi, dt, q->query);
                const DiagSet keep = ans ? q->part.dplus : q->part.dminus;
                s.answer(ans);
                const auto& h = s.history().back();
                REQUIRE(h.posterior == bayesian_update(probs, h.part, ans));
                s.refresh();
                for (std::size_t i = 0; i < before.size(); ++i) {
                    const bool kept = contains(keep, static_cast<int>(i));
                    const auto& now = s.diagnoses();
                    REQUIRE((std::find(now.begin(), now.end(), before[i]) != now.end()) == kept);
                }
            }
            REQUIRE(s.result() == dt);
            REQUIRE(is_solution_kb(s.solution_kb(), s.dpi()));
        }
}

TEST_CASE("rejecting a query") {
    DPI dpi = example_dpi();
    Session s(dpi, FaultModel::uniform(7), config("ENT"));
    const PendingQuery* q = s.next_query();
    REQUIRE(q);
    std::set<std::pair<DiagSet, AxiomSet>> seen{{q->part.dplus, q->explicit_query}};
    std::size_t rejections = 0;
    for (;;) {
        try {
            s.reject();
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "no alternative query exists");
            break;
        }
        ++rejections;
        const PendingQuery* alt = s.next_query();
        REQUIRE(alt);
        REQUIRE(seen.insert({alt->part.dplus, alt->explicit_query}).second);
        REQUIRE(s.state() == SessionState::AwaitingAnswer);
        REQUIRE(s.history().empty());
        REQUIRE(rejections < 200);
    }
    CHECK(rejections >= 10);
    CHECK(s.state() == SessionState::AwaitingAnswer);
    s.answer(true);
    CHECK(s.history().size() == 1);
    CHECK_THROWS_AS(s.answer(true), std::logic_error);
    CHECK_THROWS_AS(s.reject(), std::logic_error);
}

TEST_CASE("restore continues from the saved state") {
    DPI dpi = example_dpi();
    Session s(dpi, FaultModel::uniform(7), config("SPL"), example_weights());
    const PendingQuery* q = s.next_query();
    REQUIRE(q);
    s.answer(simulated_answer(dpi, {2, 3, 6}, q->query));
    Session r = Session::restore(s.dpi(), s.faults(), s.config(), s.weights(), s.history());
    CHECK(r.state() == SessionState::Active);
    CHECK(r.history().size() == 1);
    const PendingQuery* a = s.next_query();
    const PendingQuery* b = r.next_query();
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->part == b->part);
    CHECK(a->query == b->query);
    CHECK(r.diagnoses() == s.diagnoses());
}

TEST_CASE("stopping rules") {
    DPI dpi = example_dpi();
    SessionConfig cfg = config("ENT");
    cfg.sigma = 0.6;
    Session s(dpi, FaultModel::uniform(7), cfg, example_weights());
    CHECK(s.next_query() == nullptr);
    CHECK(s.state() == SessionState::Finished);
    CHECK(s.result() == AxiomSet{0, 3, 6});

    DPI single = parse_dpi("[K]\na\nb\n[N]\na\n");
    auto r = run_simulated(single, {0}, config("ENT"), FaultModel::uniform(2));
    CHECK(r.query_count == 0);
    CHECK(r.diagnosis == AxiomSet{0});

    CHECK_THROWS(Session(dpi, FaultModel::uniform(6), config("ENT")));
    SessionConfig bad = config("ENT");
    bad.sigma = 1.0;
    CHECK_THROWS(Session(dpi, FaultModel::uniform(7), bad));
}

TEST_CASE("simulated oracle and round log") {
    DPI dpi = example_dpi();
    FormulaSet mb{parse_formula("M -> B")};
    CHECK(simulated_answer(dpi, {1, 2}, mb));
    CHECK(simulated_answer(dpi, {1, 4}, mb));
    CHECK_FALSE(simulated_answer(dpi, {1, 5}, mb));
    CHECK_FALSE(simulated_answer(dpi, {2, 3, 6}, mb));

    auto r = run_simulated(dpi, {2, 3, 6}, config("RIO:c=0.25"), FaultModel::uniform(7), example_weights());
    std::string csv = rounds_csv(r.rounds);
    CHECK(csv.rfind("round,measure,|D+|,|D-|,p(Q=t),answer,remaining,elapsed_ms\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rounds.size() + 1));
    CHECK(r.rounds.back().remaining >= 1);

    auto w = parse_diagnosis_weights(read_data("example_diag_probs.txt"), 7);
    CHECK(w == example_weights());
    CHECK_THROWS(parse_diagnosis_weights("1,9 0.2\n", 7));
    CHECK_THROWS(parse_diagnosis_weights("1 -2\n", 7));
}

}
