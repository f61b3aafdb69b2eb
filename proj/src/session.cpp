#include "kbd/session.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "kbd/enrich.hpp"
#include "kbd/optimize.hpp"

namespace kbd {

DiagnosisWeights parse_diagnosis_weights(const std::string& text, std::size_t num_axioms) {
    DiagnosisWeights out;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::stringstream ls(line);
        std::string axioms;
        double w = 0;
        if (!(ls >> axioms)) continue;
        if (!(ls >> w) || !(w > 0.0))
            throw std::invalid_argument("weights line " + std::to_string(lineno) + ": expected a positive weight");
        AxiomSet d;
        std::stringstream as(axioms);
        std::string item;
        while (std::getline(as, item, ',')) {
            if (item.rfind("ax", 0) == 0) item = item.substr(2);
            std::size_t idx = 0;
            try {
                idx = std::stoul(item);
            } catch (const std::exception&) {
                throw std::invalid_argument("weights line " + std::to_string(lineno) + ": bad axiom index");
            }
            if (idx < 1 || idx > num_axioms)
                throw std::invalid_argument("weights line " + std::to_string(lineno) + ": axiom index out of range");
            d.push_back(static_cast<int>(idx - 1));
        }
        out[normalized(d)] = w;
    }
    return out;
}

std::string to_string(SessionState s) {
    switch (s) {
        case SessionState::Active: return "active";
        case SessionState::AwaitingAnswer: return "awaiting_answer";
        case SessionState::Finished: return "finished";
    }
    return "?";
}

Session::Session(DPI dpi, FaultModel faults, SessionConfig cfg, DiagnosisWeights weights)
    : dpi_(std::move(dpi)), faults_(std::move(faults)), cfg_(std::move(cfg)), weights_(std::move(weights)) {
    if (faults_.fault.size() != dpi_.K.size()) throw std::invalid_argument("fault model size does not match K");
    if (!(cfg_.sigma > 0.0 && cfg_.sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0,1)");
    if (cfg_.leading_count < 2) throw std::invalid_argument("leading diagnosis count must be at least 2");
}

Session Session::restore(DPI dpi, FaultModel faults, SessionConfig cfg, DiagnosisWeights weights,
                         std::vector<HistoryEntry> history) {
    Session s(std::move(dpi), std::move(faults), std::move(cfg), std::move(weights));
    s.history_ = std::move(history);
    return s;
}

void Session::refresh() {
    diags_ = compute_leading_diagnoses(dpi_, faults_, cfg_.leading_count);
    if (diags_.empty()) throw std::runtime_error("no diagnosis exists for the current DPI");
    std::vector<double> w;
    for (const auto& d : diags_) {
        auto it = weights_.find(d);
        w.push_back(it != weights_.end() ? it->second : diagnosis_weight(faults_, d));
    }
    probs_ = normalize(std::move(w));
}

bool Session::check_stop() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs_.size(); ++i)
        if (probs_[i] > probs_[best]) best = i;
    if (diags_.size() == 1 || probs_[best] >= 1.0 - cfg_.sigma) {
        result_ = diags_[best];
        state_ = SessionState::Finished;
        return true;
    }
    return false;
}

const PendingQuery* Session::next_query() {
    if (state_ == SessionState::Finished) return nullptr;
    if (state_ == SessionState::AwaitingAnswer) return &*pending_;
    refresh();
    if (check_stop()) return nullptr;
    search_query();
    state_ = SessionState::AwaitingAnswer;
    return &*pending_;
}

void Session::search_query() {
    SearchOptions opts;
    opts.excluded = rejected_;
    opts.rio_method = cfg_.rio_method;
    SearchResult r = find_qpartition(diags_, probs_, cfg_.measure, opts);
    build_pending(r.node, select_queries(r.node, faults_.fault, cfg_.selection), r.stats);
}

void Session::build_pending(const CanonicalNode& node, std::vector<AxiomSet> pool, const SearchStats& stats) {
    if (pool.empty()) throw std::runtime_error("no query exists for the selected q-partition");
    PendingQuery pq;
    pq.node = node;
    pq.part = node.partition();
    pq.stats = stats;
    pq.explicit_query = pool.front();
    pool.erase(pool.begin());
    pq.pool = std::move(pool);
    FormulaSet q = dpi_.axioms(pq.explicit_query);
    FormulaSet enriched = cfg_.enrich ? enrich_query(dpi_, q, diags_, cfg_.entailment_types).query : q;
    pq.query = optimize_query(enriched, pq.explicit_query, pq.part, diags_, dpi_, faults_.fault);
    pq.p_true = answer_probability(pq.part, probs_, true);
    try {
        pq.measure_value = eval_measure(cfg_.measure, pq.part, probs_);
    } catch (const MeasureUndefined&) {
        pq.measure_value = 0.0;
    }
    pending_ = std::move(pq);
}

void Session::answer(bool value) {
    if (state_ != SessionState::AwaitingAnswer) throw std::logic_error("session is not awaiting an answer");
    const PendingQuery& pq = *pending_;
    HistoryEntry h;
    h.query = pq.query;
    h.part = pq.part;
    h.diagnoses = diags_;
    h.prior = probs_;
    h.posterior = bayesian_update(probs_, pq.part, value);
    h.answer = value;
    dpi_ = update_dpi(dpi_, pq.query, value);
    if (search_family(cfg_.measure.kind) == SearchFamily::Rio)
        cfg_.measure = update_cautiousness(cfg_.measure, pq.part, value);
    history_.push_back(std::move(h));
    pending_.reset();
    rejected_.clear();
    state_ = SessionState::Active;
}

void Session::reject() {
    if (state_ != SessionState::AwaitingAnswer) throw std::logic_error("session is not awaiting an answer");
    PendingQuery current = *pending_;
    if (!current.pool.empty()) {
        build_pending(current.node, current.pool, current.stats);
        return;
    }
    rejected_.push_back(current.node.dplus);
    try {
        search_query();
    } catch (const std::runtime_error&) {
        rejected_.pop_back();
        pending_ = std::move(current);
        throw std::runtime_error("no alternative query exists");
    }
}

FormulaSet Session::solution_kb() const {
    if (!result_) throw std::logic_error("session has not finished");
    return apply_diagnosis(dpi_, *result_);
}

bool simulated_answer(const DPI& initial, const AxiomSet& true_diagnosis, const FormulaSet& query) {
    return entails(apply_diagnosis(initial, true_diagnosis).united(initial.B), query);
}

SimulationResult run_simulated(const DPI& dpi, const AxiomSet& true_diagnosis, const SessionConfig& cfg,
                               const FaultModel& faults, const DiagnosisWeights& weights, std::size_t max_rounds) {
    Session s(dpi, faults, cfg, weights);
    SimulationResult out;
    for (std::size_t round = 1;; ++round) {
        if (round > max_rounds) throw std::runtime_error("simulation exceeded the round limit");
        auto t0 = std::chrono::steady_clock::now();
        const PendingQuery* q = s.next_query();
        if (!q) break;
        bool ans = simulated_answer(dpi, true_diagnosis, q->query);
        RoundRecord r;
        r.round = round;
        r.measure = to_string(s.config().measure);
        r.dplus = q->part.dplus.size();
        r.dminus = q->part.dminus.size();
        r.p_true = q->p_true;
        r.answer = ans;
        r.remaining = ans ? q->part.dplus.size() : q->part.dminus.size();
        for (const auto& f : q->query) r.query += (r.query.empty() ? "" : "; ") + f.str();
        s.answer(ans);
        r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.rounds.push_back(std::move(r));
    }
    out.diagnosis = *s.result();
    out.query_count = out.rounds.size();
    return out;
}

std::string rounds_csv(const std::vector<RoundRecord>& rounds) {
    std::ostringstream out;
    out << "round,measure,|D+|,|D-|,p(Q=t),answer,remaining,elapsed_ms\n";
    for (const auto& r : rounds) {
        std::string m = r.measure;
        if (m.find(',') != std::string::npos) m = "\"" + m + "\"";
        out << r.round << "," << m << "," << r.dplus << "," << r.dminus << "," << std::fixed << std::setprecision(4)
            << r.p_true << "," << (r.answer ? "true" : "false") << "," << r.remaining << "," << std::setprecision(3)
            << r.elapsed_ms << "\n";
        out.unsetf(std::ios::fixed);
    }
    return out.str();
}

}  // namespace kbd
