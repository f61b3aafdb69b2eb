#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "kbd/enrich.hpp"
#include "kbd/optimize.hpp"
#include "kbd/session.hpp"

using namespace kbd;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

AxiomSet parse_axiom_list(const std::string& text, std::size_t n) {
    AxiomSet out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.rfind("ax", 0) == 0) item = item.substr(2);
        std::size_t idx = std::stoul(item);
        if (idx < 1 || idx > n) throw std::invalid_argument("axiom index out of range: " + item);
        out.push_back(static_cast<int>(idx - 1));
    }
    return normalized(out);
}

// Options shared by the subcommands that run sessions.
struct Common {
    std::string dpi_path;
    std::string probs_path;
    std::string diag_probs_path;
    std::string measure = "ENT";
    double sigma = 0.05;
    std::size_t leading = 6;
    bool enrich = false;
    std::string entailment_types = "AtomImplications";
    std::string strategy = "MinSum";
    std::string rio_method = "gated";

    DPI dpi;
    FaultModel faults;
    DiagnosisWeights weights;
    SessionConfig cfg;

    void add_to(CLI::App* sub, bool session_opts) {
        sub->add_option("dpi", dpi_path, "DPI file")->required()->check(CLI::ExistingFile);
        sub->add_option("--probs", probs_path, "Per-axiom fault probabilities (\"index prob\" lines)");
        sub->add_option("--diag-probs", diag_probs_path, "Diagnosis weights (\"i,j,k weight\" lines)");
        sub->add_option("-n,--leading", leading, "Number of leading diagnoses");
        if (!session_opts) return;
        sub->add_option("--measure", measure, "Query quality measure, e.g. ENT, SPL, RIO:c=0.4");
        sub->add_option("--sigma", sigma, "Stop when one diagnosis has probability >= 1 - sigma");
        sub->add_flag("--enrich", enrich, "Enrich queries before optimisation");
        sub->add_option("--entailment-types", entailment_types, "Comma-separated entailment types for enrichment");
        sub->add_option("--strategy", strategy, "Query selection strategy: MinSum, MinMax, BreadthFirst");
        sub->add_option("--rio-method", rio_method, "RIO search: gated or ent-first")
            ->check(CLI::IsMember({"gated", "ent-first"}));
    }

    void load() {
        dpi = parse_dpi(read_file(dpi_path));
        faults = probs_path.empty() ? FaultModel::uniform(dpi.K.size())
                                    : parse_fault_file(read_file(probs_path), dpi.K.size());
        if (!diag_probs_path.empty()) weights = parse_diagnosis_weights(read_file(diag_probs_path), dpi.K.size());
        cfg.measure = parse_measure(measure);
        cfg.sigma = sigma;
        cfg.leading_count = leading;
        cfg.enrich = enrich;
        cfg.entailment_types = parse_entailment_types(entailment_types);
        cfg.selection.strategy = parse_strategy(strategy);
        cfg.rio_method = rio_method == "gated" ? RioMethod::Gated : RioMethod::EntFirst;
    }

    std::vector<double> probabilities(const std::vector<AxiomSet>& diags) const {
        std::vector<double> w;
        for (const auto& d : diags) {
            auto it = weights.find(d);
            w.push_back(it != weights.end() ? it->second : diagnosis_weight(faults, d));
        }
        return normalize(std::move(w));
    }
};

void print_sets(const std::vector<AxiomSet>& sets, const std::string& name, const std::vector<double>* probs) {
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::cout << name << (i + 1) << " = " << to_string(sets[i], "ax");
        if (probs) std::cout << "  p=" << std::fixed << std::setprecision(4) << (*probs)[i] << std::defaultfloat;
        std::cout << "\n";
    }
}

void print_query(const PendingQuery& q) {
    std::cout << "q-partition  " << standard_representation(q.node) << "\n";
    std::cout << "D+ = " << to_string(q.part.dplus, "D") << "  D- = " << to_string(q.part.dminus, "D") << "\n";
    std::cout << "measure " << q.measure_value << "  p(Q=t) " << q.p_true << "\n";
    std::cout << "query:\n";
    for (const auto& f : q.query) std::cout << "  " << f.str() << "\n";
}

int run_bench(Common& c, const std::string& measures, std::size_t samples, unsigned seed, unsigned jobs) {
    auto all = compute_leading_diagnoses(c.dpi, c.faults, 0);
    if (all.empty()) throw std::runtime_error("the DPI has no diagnosis");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::vector<AxiomSet> truths;
    for (std::size_t i = 0; i < samples; ++i) truths.push_back(all[pick(rng)]);

    std::vector<std::string> names;
    std::stringstream ms(measures);
    for (std::string m; std::getline(ms, m, ';');)
        if (!m.empty()) names.push_back(m);

    std::cout << "measure,mean_queries,failures\n";
    for (const auto& name : names) {
        SessionConfig cfg = c.cfg;
        cfg.measure = parse_measure(name);
        std::vector<std::future<std::pair<std::size_t, bool>>> runs;
        std::vector<std::pair<std::size_t, bool>> results;
        for (const auto& t : truths) {
            if (runs.size() >= std::max(1u, jobs)) {
                results.push_back(runs.front().get());
                runs.erase(runs.begin());
            }
            runs.push_back(std::async(std::launch::async, [&, t] {
                auto r = run_simulated(c.dpi, t, cfg, c.faults, c.weights);
                return std::make_pair(r.query_count, r.diagnosis == t);
            }));
        }
        for (auto& f : runs) results.push_back(f.get());
        double total = 0;
        std::size_t failures = 0;
        for (const auto& [count, ok] : results) {
            total += static_cast<double>(count);
            if (!ok) ++failures;
        }
        std::string shown = name.find(',') != std::string::npos ? "\"" + name + "\"" : name;
        std::cout << shown << "," << std::setprecision(4) << total / static_cast<double>(results.size()) << ","
                  << failures << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive propositional KB debugger"};
    app.require_subcommand(1);

    Common c;

    bool diag_all = false;
    auto* diagnose = app.add_subcommand("diagnose", "List leading (or all) minimal diagnoses");
    c.add_to(diagnose, false);
    diagnose->add_flag("--all", diag_all, "List every minimal diagnosis");

    bool conf_all = false;
    auto* conflicts = app.add_subcommand("conflicts", "Compute one (or all) minimal conflicts");
    c.add_to(conflicts, false);
    conflicts->add_flag("--all", conf_all, "List every minimal conflict");

    std::string true_diag, csv_path;
    auto* simulate = app.add_subcommand("simulate", "Run a session answered by a simulated oracle");
    c.add_to(simulate, true);
    simulate->add_option("--true-diag", true_diag, "Target diagnosis as 1-based axiom indices, e.g. 3,4,7")
        ->required();
    simulate->add_option("--csv", csv_path, "Write per-round CSV here");

    auto* query = app.add_subcommand("query", "Compute one query for the current leading diagnoses");
    c.add_to(query, true);

    std::string subset;
    auto* enumerate = app.add_subcommand("enumerate-canonical", "Count all canonical q-partitions");
    c.add_to(enumerate, false);
    enumerate->add_option("--subset", subset, "Restrict to these leading diagnoses (1-based, e.g. 1,5,6)");
    bool list_nodes = false;
    enumerate->add_flag("--list", list_nodes, "Print each q-partition");

    auto* session = app.add_subcommand("session", "Interactive debugging session on the terminal");
    c.add_to(session, true);

    std::string bench_measures = "ENT;SPL;RIO:c=0.25;MPS;BME;EMCb;KL";
    std::size_t samples = 20;
    unsigned seed = 1;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* bench = app.add_subcommand("bench", "Mean number of queries per measure over sampled target diagnoses");
    c.add_to(bench, true);
    bench->add_option("--measures", bench_measures, "Semicolon-separated measures");
    bench->add_option("--samples", samples, "Number of sampled target diagnoses");
    bench->add_option("--seed", seed, "Sampling seed");
    bench->add_option("-j,--jobs", jobs, "Parallel simulations");

    CLI11_PARSE(app, argc, argv);

    try {
        c.load();
        if (*diagnose) {
            auto diags = compute_leading_diagnoses(c.dpi, c.faults, diag_all ? 0 : c.leading);
            auto probs = c.probabilities(diags);
            print_sets(diags, "D", &probs);
        } else if (*conflicts) {
            if (conf_all) {
                print_sets(compute_all_conflicts(c.dpi), "C", nullptr);
            } else {
                auto conflict = quick_xplain(c.dpi, range_set(static_cast<int>(c.dpi.K.size())));
                if (!conflict) std::cout << "no conflict\n";
                else print_sets({*conflict}, "C", nullptr);
            }
        } else if (*simulate) {
            AxiomSet t = parse_axiom_list(true_diag, c.dpi.K.size());
            auto r = run_simulated(c.dpi, t, c.cfg, c.faults, c.weights);
            std::cout << "diagnosis " << to_string(r.diagnosis, "ax") << " after " << r.query_count
                      << " queries\n";
            for (const auto& rr : r.rounds)
                std::cout << "  " << rr.round << ": " << rr.query << " -> " << (rr.answer ? "true" : "false") << "\n";
            if (!csv_path.empty()) {
                std::ofstream out(csv_path);
                if (!out) throw std::runtime_error("cannot write " + csv_path);
                out << rounds_csv(r.rounds);
            }
            if (r.diagnosis != t) return 2;
        } else if (*query) {
            Session s(c.dpi, c.faults, c.cfg, c.weights);
            const PendingQuery* q = s.next_query();
            print_sets(s.diagnoses(), "D", &s.probabilities());
            if (!q) std::cout << "finished: " << to_string(*s.result(), "ax") << "\n";
            else print_query(*q);
        } else if (*enumerate) {
            auto diags = compute_leading_diagnoses(c.dpi, c.faults, c.leading);
            if (!subset.empty()) {
                std::vector<AxiomSet> picked;
                for (int i : parse_axiom_list(subset, diags.size())) picked.push_back(diags[static_cast<std::size_t>(i)]);
                diags = picked;
            }
            auto nodes = enumerate_all_canonical(diags);
            if (list_nodes)
                for (const auto& n : nodes) std::cout << standard_representation(n) << "\n";
            std::cout << nodes.size() << "\n";
        } else if (*session) {
            Session s(c.dpi, c.faults, c.cfg, c.weights);
            while (const PendingQuery* q = s.next_query()) {
                print_sets(s.diagnoses(), "D", &s.probabilities());
                print_query(*q);
                std::cout << "Is this true in the intended KB? [y/n/r(eject)/q] " << std::flush;
                std::string line;
                if (!std::getline(std::cin, line) || line == "q") return 1;
                if (line == "y") s.answer(true);
                else if (line == "n") s.answer(false);
                else if (line == "r") {
                    try {
                        s.reject();
                    } catch (const std::runtime_error& e) {
                        std::cout << e.what() << "\n";
                    }
                }
            }
            std::cout << "diagnosis " << to_string(*s.result(), "ax") << "\nrepaired KB:\n";
            for (const auto& f : s.solution_kb()) std::cout << "  " << f.str() << "\n";
        } else if (*bench) {
            return run_bench(c, bench_measures, samples, seed, jobs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
