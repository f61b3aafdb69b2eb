#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <httplib.h>

#include "kbd/service.hpp"

namespace {

void send(httplib::Response& res, const kbd::ServiceResponse& r) {
    res.status = r.status;
    if (r.status != 204) res.set_content(r.body.dump(), "application/json");
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"KB debugging session service"};
    std::string snapshot_dir;
    long ttl = 0;
    app.add_option("--snapshot-dir", snapshot_dir, "Directory for per-session JSON snapshots");
    app.add_option("--ttl", ttl, "Evict sessions idle for this many seconds (0 = never)");
    CLI11_PARSE(app, argc, argv);

    std::string host = env_or("KBD_BIND", "127.0.0.1");
    int port = std::stoi(env_or("KBD_PORT", "8080"));

    std::optional<std::filesystem::path> dir;
    if (!snapshot_dir.empty()) dir = snapshot_dir;
    kbd::SessionService service(dir, std::chrono::seconds{ttl});
    if (dir) std::cerr << "restored " << service.load_snapshots() << " session(s) from " << *dir << "\n";

    httplib::Server svr;
    svr.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.create(req.body));
    });
    svr.Get(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.get(req.matches[1]));
    });
    svr.Get(R"(/sessions/([^/]+)/query)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.query(req.matches[1]));
    });
    svr.Post(R"(/sessions/([^/]+)/answer)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.answer(req.matches[1], req.body));
    });
    svr.Get(R"(/sessions/([^/]+)/diagnoses)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.diagnoses(req.matches[1]));
    });
    svr.Get(R"(/sessions/([^/]+)/result)", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.result(req.matches[1]));
    });
    svr.Delete(R"(/sessions/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
        send(res, service.remove(req.matches[1]));
    });
    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    svr.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    std::cerr << "listening on " << host << ":" << port << "\n";
    if (!svr.listen(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}
