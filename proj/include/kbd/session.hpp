#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kbd/diagnosis.hpp"
#include "kbd/dpi.hpp"
#include "kbd/measures.hpp"
#include "kbd/qpartition.hpp"
#include "kbd/queryselect.hpp"
#include "kbd/reasoner.hpp"

namespace kbd {

struct SessionConfig {
    MeasureConfig measure;
    double sigma = 0.05;
    std::size_t leading_count = 6;
    bool enrich = false;
    EntailmentTypeSet entailment_types{EntailmentType::AtomImplications};
    SelectionParams selection;
    RioMethod rio_method = RioMethod::Gated;
};

// Diagnosis weights given directly (e.g. from a table), used instead of the
// fault product for the listed diagnoses.
using DiagnosisWeights = std::map<AxiomSet, double>;

DiagnosisWeights parse_diagnosis_weights(const std::string& text, std::size_t num_axioms);

enum class SessionState { Active, AwaitingAnswer, Finished };
std::string to_string(SessionState s);

struct PendingQuery {
    FormulaSet query;          // final, optimised query
    AxiomSet explicit_query;   // the K-axiom query it was derived from
    CanonicalNode node;
    QPartition part;
    double measure_value = 0.0;
    double p_true = 0.0;
    std::vector<AxiomSet> pool;  // remaining alternatives for the same q-partition
    SearchStats stats;
};

struct HistoryEntry {
    FormulaSet query;
    QPartition part;
    std::vector<AxiomSet> diagnoses;
    std::vector<double> prior;
    std::vector<double> posterior;
    bool answer = false;
};

class Session {
public:
    Session(DPI dpi, FaultModel faults, SessionConfig cfg, DiagnosisWeights weights = {});

    // Computes the next query, or finishes. Idempotent while awaiting an answer.
    const PendingQuery* next_query();
    void answer(bool value);
    // Replaces the pending query by an alternative with the same or another q-partition.
    void reject();

    SessionState state() const { return state_; }
    const DPI& dpi() const { return dpi_; }
    const FaultModel& faults() const { return faults_; }
    const DiagnosisWeights& weights() const { return weights_; }
    const SessionConfig& config() const { return cfg_; }
    const std::vector<AxiomSet>& diagnoses() const { return diags_; }
    const std::vector<double>& probabilities() const { return probs_; }
    const std::optional<PendingQuery>& pending() const { return pending_; }
    const std::vector<HistoryEntry>& history() const { return history_; }
    const std::optional<AxiomSet>& result() const { return result_; }
    FormulaSet solution_kb() const;

    // Recomputes leading diagnoses and probabilities for the current DPI.
    void refresh();

    // Restores a session from persisted parts; the state becomes Active or Finished.
    static Session restore(DPI dpi, FaultModel faults, SessionConfig cfg, DiagnosisWeights weights,
                           std::vector<HistoryEntry> history);

private:
    DPI dpi_;
    FaultModel faults_;
    SessionConfig cfg_;
    DiagnosisWeights weights_;
    SessionState state_ = SessionState::Active;
    std::vector<AxiomSet> diags_;
    std::vector<double> probs_;
    std::optional<PendingQuery> pending_;
    std::vector<DiagSet> rejected_;
    std::vector<HistoryEntry> history_;
    std::optional<AxiomSet> result_;

    bool check_stop();
    void search_query();
    void build_pending(const CanonicalNode& node, std::vector<AxiomSet> pool, const SearchStats& stats);
};

struct RoundRecord {
    std::size_t round = 0;
    std::string measure;
    std::size_t dplus = 0;
    std::size_t dminus = 0;
    double p_true = 0.0;
    bool answer = false;
    std::size_t remaining = 0;
    double elapsed_ms = 0.0;
    std::string query;
};

struct SimulationResult {
    AxiomSet diagnosis;
    std::size_t query_count = 0;
    std::vector<RoundRecord> rounds;
};

// Answers true iff (K \ Dt) u B u U_P entails the query.
bool simulated_answer(const DPI& initial, const AxiomSet& true_diagnosis, const FormulaSet& query);

SimulationResult run_simulated(const DPI& dpi, const AxiomSet& true_diagnosis, const SessionConfig& cfg,
                               const FaultModel& faults, const DiagnosisWeights& weights = {},
                               std::size_t max_rounds = 1000);

std::string rounds_csv(const std::vector<RoundRecord>& rounds);

}  // namespace kbd
