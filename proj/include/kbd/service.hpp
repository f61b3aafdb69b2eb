#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "kbd/session.hpp"

namespace kbd {

using json = nlohmann::json;

json diagnoses_json(const std::vector<AxiomSet>& diags, const std::vector<double>& probs);
json formulas_json(const FormulaSet& fs);
json query_json(const Session& s);
json session_summary_json(const std::string& id, const Session& s);

// Full persisted form of a session.
json session_to_json(const Session& s);
Session session_from_json(const json& j);

// Parses a createSession request body into a fresh session.
Session session_from_request(const json& body);

struct ServiceResponse {
    int status = 200;
    json body;
};

// Transport-independent session store behind the HTTP endpoints. Requests on
// distinct sessions run concurrently; requests on one session are serialised.
class SessionService {
public:
    explicit SessionService(std::optional<std::filesystem::path> snapshot_dir = std::nullopt,
                            std::chrono::seconds ttl = std::chrono::seconds{0});

    ServiceResponse create(const std::string& body);
    ServiceResponse get(const std::string& id);
    ServiceResponse query(const std::string& id);
    ServiceResponse answer(const std::string& id, const std::string& body);
    ServiceResponse diagnoses(const std::string& id);
    ServiceResponse result(const std::string& id);
    ServiceResponse remove(const std::string& id);

    // Loads every snapshot in the snapshot directory; returns how many.
    std::size_t load_snapshots();
    std::size_t size() const;

private:
    struct Entry {
        explicit Entry(Session s) : session(std::move(s)) {}
        std::mutex mu;
        Session session;
        std::chrono::steady_clock::time_point last_access = std::chrono::steady_clock::now();
    };

    std::shared_ptr<Entry> find(const std::string& id);
    void snapshot(const std::string& id, const Session& s) const;
    void evict_expired();
    std::string new_id();

    std::optional<std::filesystem::path> snapshot_dir_;
    std::chrono::seconds ttl_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::uint64_t next_id_ = 1;
};

}  // namespace kbd
