#include "kbd/service.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace kbd {

namespace {

json index_json(const IndexSet& s) {
    json a = json::array();
    for (int i : s) a.push_back(i + 1);
    return a;
}

IndexSet index_from_json(const json& a) {
    IndexSet s;
    for (const auto& v : a) s.push_back(v.get<int>() - 1);
    return normalized(s);
}

json measure_json(const MeasureConfig& m) {
    return {{"kind", kind_name(m.kind)}, {"z", m.z},         {"c", m.rio.c},         {"cl", m.rio.c_low},
            {"ch", m.rio.c_high},        {"tm", m.t_m},      {"tcard", m.t_card},    {"tent", m.t_ent}};
}

MeasureConfig measure_from_json(const json& j) {
    MeasureConfig m = parse_measure(j.at("kind").get<std::string>() + ":z=" + std::to_string(j.at("z").get<double>()));
    m.rio.c = j.at("c").get<double>();
    m.rio.c_low = j.at("cl").get<double>();
    m.rio.c_high = j.at("ch").get<double>();
    m.t_m = j.at("tm").get<double>();
    m.t_card = j.at("tcard").get<double>();
    m.t_ent = j.at("tent").get<double>();
    return m;
}

FormulaSet formulas_from_json(const json& a) {
    FormulaSet fs;
    for (const auto& v : a) fs.insert(parse_formula(v.get<std::string>()));
    return fs;
}

std::vector<double> doubles(const json& a) { return a.get<std::vector<double>>(); }

FaultModel faults_from_request(const json& v, std::size_t n) {
    if (v.is_null()) return FaultModel::uniform(n);
    if (v.is_string()) return parse_fault_file(v.get<std::string>(), n);
    FaultModel fm = FaultModel::uniform(n);
    if (v.is_array()) {
        if (v.size() != n) throw std::invalid_argument("faultProbs must list one probability per axiom of K");
        for (std::size_t i = 0; i < n; ++i) fm.fault[i] = v[i].get<double>();
    } else if (v.is_object()) {
        for (const auto& [k, p] : v.items()) {
            std::string key = k.rfind("ax", 0) == 0 ? k.substr(2) : k;
            std::size_t idx = std::stoul(key);
            if (idx < 1 || idx > n) throw std::invalid_argument("faultProbs refers to an unknown axiom: " + k);
            fm.fault[idx - 1] = p.get<double>();
        }
    } else {
        throw std::invalid_argument("faultProbs must be an array, object or fault-file text");
    }
    for (double f : fm.fault)
        if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("fault probabilities must lie in (0,1)");
    return fm;
}

ServiceResponse error(int status, const std::string& msg) { return {status, json{{"error", msg}}}; }

}  // namespace

json diagnoses_json(const std::vector<AxiomSet>& diags, const std::vector<double>& probs) {
    json a = json::array();
    for (std::size_t i = 0; i < diags.size(); ++i)
        a.push_back({{"axioms", index_json(diags[i])}, {"probability", i < probs.size() ? probs[i] : 0.0}});
    return a;
}

json formulas_json(const FormulaSet& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back(f.str());
    return a;
}

json query_json(const Session& s) {
    if (s.state() == SessionState::Finished) {
        return {{"finished", true},
                {"diagnosis", index_json(*s.result())},
                {"solutionKB", formulas_json(s.solution_kb())}};
    }
    const PendingQuery& q = *s.pending();
    std::string text;
    for (const auto& f : q.query) text += (text.empty() ? "" : "\n") + f.str();
    return {{"finished", false},
            {"formulas", formulas_json(q.query)},
            {"renderedText", text},
            {"qpartition", {{"dplus", index_json(q.part.dplus)}, {"dminus", index_json(q.part.dminus)}}},
            {"measureValue", q.measure_value},
            {"diagnoses", diagnoses_json(s.diagnoses(), s.probabilities())}};
}

json session_summary_json(const std::string& id, const Session& s) {
    return {{"sessionId", id},
            {"state", to_string(s.state())},
            {"measure", to_string(s.config().measure)},
            {"sigma", s.config().sigma},
            {"leadingCount", s.config().leading_count},
            {"queriesAnswered", s.history().size()}};
}

json session_to_json(const Session& s) {
    const SessionConfig& c = s.config();
    json weights = json::array();
    for (const auto& [d, w] : s.weights()) weights.push_back({{"axioms", index_json(d)}, {"weight", w}});
    json history = json::array();
    for (const auto& h : s.history()) {
        history.push_back({{"query", formulas_json(h.query)},
                           {"dplus", index_json(h.part.dplus)},
                           {"dminus", index_json(h.part.dminus)},
                           {"diagnoses", diagnoses_json(h.diagnoses, h.prior)},
                           {"posterior", h.posterior},
                           {"answer", h.answer}});
    }
    return {{"dpiText", render_dpi(s.dpi())},
            {"faults", s.faults().fault},
            {"weights", weights},
            {"config",
             {{"measure", measure_json(c.measure)},
              {"sigma", c.sigma},
              {"leadingCount", c.leading_count},
              {"enrich", c.enrich},
              {"rioMethod", c.rio_method == RioMethod::Gated ? "gated" : "ent-first"},
              {"selection",
               {{"strategy", to_string(c.selection.strategy)},
                {"timeMs", c.selection.time_budget.count()},
                {"nMin", c.selection.n_min},
                {"nMax", c.selection.n_max}}}}},
            {"history", history}};
}

Session session_from_json(const json& j) {
    DPI dpi = parse_dpi(j.at("dpiText").get<std::string>());
    FaultModel fm{doubles(j.at("faults"))};
    DiagnosisWeights weights;
    for (const auto& w : j.at("weights")) weights[index_from_json(w.at("axioms"))] = w.at("weight").get<double>();
    const json& c = j.at("config");
    SessionConfig cfg;
    cfg.measure = measure_from_json(c.at("measure"));
    cfg.sigma = c.at("sigma").get<double>();
    cfg.leading_count = c.at("leadingCount").get<std::size_t>();
    cfg.enrich = c.at("enrich").get<bool>();
    cfg.rio_method = c.value("rioMethod", "gated") == "gated" ? RioMethod::Gated : RioMethod::EntFirst;
    const json& sel = c.at("selection");
    cfg.selection.strategy = parse_strategy(sel.at("strategy").get<std::string>());
    cfg.selection.time_budget = std::chrono::milliseconds(sel.at("timeMs").get<long long>());
    cfg.selection.n_min = sel.at("nMin").get<std::size_t>();
    cfg.selection.n_max = sel.at("nMax").get<std::size_t>();
    std::vector<HistoryEntry> history;
    for (const auto& h : j.at("history")) {
        HistoryEntry e;
        e.query = formulas_from_json(h.at("query"));
        e.part.dplus = index_from_json(h.at("dplus"));
        e.part.dminus = index_from_json(h.at("dminus"));
        for (const auto& d : h.at("diagnoses")) {
            e.diagnoses.push_back(index_from_json(d.at("axioms")));
            e.prior.push_back(d.at("probability").get<double>());
        }
        e.posterior = doubles(h.at("posterior"));
        e.answer = h.at("answer").get<bool>();
        history.push_back(std::move(e));
    }
    return Session::restore(std::move(dpi), std::move(fm), std::move(cfg), std::move(weights), std::move(history));
}

Session session_from_request(const json& body) {
    if (!body.is_object()) throw std::invalid_argument("request body must be a JSON object");
    if (!body.contains("dpiText")) throw std::invalid_argument("missing field 'dpiText'");
    DPI dpi = parse_dpi(body.at("dpiText").get<std::string>());
    FaultModel fm = faults_from_request(body.value("faultProbs", json()), dpi.K.size());
    DiagnosisWeights weights;
    if (body.contains("diagnosisProbs")) {
        const json& dp = body.at("diagnosisProbs");
        if (dp.is_string()) {
            weights = parse_diagnosis_weights(dp.get<std::string>(), dpi.K.size());
        } else {
            for (const auto& w : dp) {
                AxiomSet d = index_from_json(w.at("axioms"));
                for (int a : d)
                    if (a < 0 || static_cast<std::size_t>(a) >= dpi.K.size())
                        throw std::invalid_argument("diagnosisProbs refers to an unknown axiom");
                weights[d] = w.at("probability").get<double>();
            }
        }
    }
    SessionConfig cfg;
    cfg.measure = parse_measure(body.value("measure", std::string("ENT")));
    cfg.sigma = body.value("sigma", 0.05);
    cfg.leading_count = body.value("leadingCount", std::size_t{6});
    cfg.enrich = body.value("enrich", false);
    if (body.contains("entailmentTypes"))
        cfg.entailment_types = parse_entailment_types(body.at("entailmentTypes").get<std::string>());
    if (body.contains("rioMethod"))
        cfg.rio_method = body.at("rioMethod").get<std::string>() == "ent-first" ? RioMethod::EntFirst : RioMethod::Gated;
    if (body.contains("selection")) {
        const json& sel = body.at("selection");
        if (sel.contains("strategy")) cfg.selection.strategy = parse_strategy(sel.at("strategy").get<std::string>());
        if (sel.contains("timeMs")) cfg.selection.time_budget = std::chrono::milliseconds(sel.at("timeMs").get<long long>());
        cfg.selection.n_min = sel.value("nMin", cfg.selection.n_min);
        cfg.selection.n_max = sel.value("nMax", cfg.selection.n_max);
        if (cfg.selection.n_min < 1 || cfg.selection.n_min > cfg.selection.n_max)
            throw std::invalid_argument("selection requires 1 <= nMin <= nMax");
    }
    return Session(std::move(dpi), std::move(fm), std::move(cfg), std::move(weights));
}

SessionService::SessionService(std::optional<std::filesystem::path> snapshot_dir, std::chrono::seconds ttl)
    : snapshot_dir_(std::move(snapshot_dir)), ttl_(ttl) {
    if (snapshot_dir_) std::filesystem::create_directories(*snapshot_dir_);
}

std::size_t SessionService::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return sessions_.size();
}

std::string SessionService::new_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream out;
    out << std::hex << next_id_++ << "-" << (rng() & 0xffffffu);
    return out.str();
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return nullptr;
    it->second->last_access = std::chrono::steady_clock::now();
    return it->second;
}

void SessionService::evict_expired() {
    if (ttl_.count() <= 0) return;
    auto now = std::chrono::steady_clock::now();
    std::lock_guard<std::mutex> lock(mu_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
        if (now - it->second->last_access > ttl_) it = sessions_.erase(it);
        else ++it;
    }
}

void SessionService::snapshot(const std::string& id, const Session& s) const {
    if (!snapshot_dir_) return;
    auto path = *snapshot_dir_ / (id + ".json");
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << session_to_json(s).dump(2);
    }
    std::filesystem::rename(tmp, path);
}

std::size_t SessionService::load_snapshots() {
    if (!snapshot_dir_) return 0;
    std::size_t loaded = 0;
    for (const auto& e : std::filesystem::directory_iterator(*snapshot_dir_)) {
        if (e.path().extension() != ".json") continue;
        std::ifstream in(e.path());
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded()) continue;
        try {
            auto entry = std::make_shared<Entry>(session_from_json(j));
            std::lock_guard<std::mutex> lock(mu_);
            sessions_[e.path().stem().string()] = std::move(entry);
            ++loaded;
        } catch (const std::exception&) {
            continue;
        }
    }
    return loaded;
}

ServiceResponse SessionService::create(const std::string& body) {
    evict_expired();
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return error(400, "request body is not valid JSON");
    try {
        auto entry = std::make_shared<Entry>(session_from_request(j));
        std::string id;
        {
            std::lock_guard<std::mutex> lock(mu_);
            id = new_id();
            sessions_[id] = entry;
        }
        std::lock_guard<std::mutex> lock(entry->mu);
        snapshot(id, entry->session);
        return {201, json{{"sessionId", id}}};
    } catch (const std::exception& e) {
        return error(400, e.what());
    }
}

ServiceResponse SessionService::get(const std::string& id) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    std::lock_guard<std::mutex> lock(entry->mu);
    return {200, session_summary_json(id, entry->session)};
}

ServiceResponse SessionService::query(const std::string& id) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    std::lock_guard<std::mutex> lock(entry->mu);
    try {
        SessionState before = entry->session.state();
        entry->session.next_query();
        if (entry->session.state() != before) snapshot(id, entry->session);
        return {200, query_json(entry->session)};
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

ServiceResponse SessionService::answer(const std::string& id, const std::string& body) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return error(400, "request body is not a JSON object");
    std::lock_guard<std::mutex> lock(entry->mu);
    Session& s = entry->session;
    if (s.state() != SessionState::AwaitingAnswer) return error(409, "session is not awaiting an answer");
    if (j.contains("reject") && j.at("reject").is_boolean() && j.at("reject").get<bool>()) {
        try {
            s.reject();
        } catch (const std::exception& e) {
            return error(409, e.what());
        }
        snapshot(id, s);
        json out = query_json(s);
        out["state"] = to_string(s.state());
        return {200, out};
    }
    if (!j.contains("answer") || !j.at("answer").is_boolean())
        return error(400, "expected {\"answer\": true|false} or {\"reject\": true}");
    s.answer(j.at("answer").get<bool>());
    snapshot(id, s);
    const HistoryEntry& h = s.history().back();
    return {200, json{{"state", to_string(s.state())},
                      {"queriesAnswered", s.history().size()},
                      {"answer", h.answer},
                      {"posterior", diagnoses_json(h.diagnoses, h.posterior)}}};
}

ServiceResponse SessionService::diagnoses(const std::string& id) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    std::lock_guard<std::mutex> lock(entry->mu);
    try {
        if (entry->session.diagnoses().empty()) entry->session.refresh();
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
    return {200, json{{"diagnoses", diagnoses_json(entry->session.diagnoses(), entry->session.probabilities())}}};
}

ServiceResponse SessionService::result(const std::string& id) {
    auto entry = find(id);
    if (!entry) return error(404, "unknown session " + id);
    std::lock_guard<std::mutex> lock(entry->mu);
    if (entry->session.state() != SessionState::Finished) return error(409, "session has not finished");
    return {200, query_json(entry->session)};
}

ServiceResponse SessionService::remove(const std::string& id) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!sessions_.erase(id)) return error(404, "unknown session " + id);
    if (snapshot_dir_) std::filesystem::remove(*snapshot_dir_ / (id + ".json"));
    return {204, json()};
}

}  // namespace kbd
