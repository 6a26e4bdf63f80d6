#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bqr/engine.hpp"
#include "bqr/eval.hpp"

namespace bqr {

using nlohmann::json;

// ---- JSON views of the domain types -------------------------------------

json to_json(const Distribution& d);
json to_json(const DimensionSpec& d);
json dim_scores_json(const ScoredQuery& q);
// Hits with title, url and attributes resolved against the corpus.
json hits_json(const ResultSet& rs, const Corpus& corpus);
json distributions_json(const ResultSet& rs, const Corpus& corpus, UnlabeledPolicy policy);

json search_response(const ResultSet& rs, const Corpus& corpus, UnlabeledPolicy policy);
json recommend_response(const Recommendation& rec, const Corpus& corpus, UnlabeledPolicy policy);
json matrix_json(const DominationMatrix& m);

// ---- configuration -------------------------------------------------------

// Accepts a DimensionSpec object or a bare name ("relevance" or an entropy
// dimension).
DimensionSpec dimension_from_json(const json& j);

// JSON config mirroring EngineConfig. Unknown keys are rejected.
struct AppConfig {
    EngineConfig engine;
    IndexParams index;
    std::string provider = "replay";   // "replay" | "live"
    std::string model;                 // live provider model name
    std::size_t max_in_flight = 4;
};

AppConfig parse_config(const json& j, AppConfig base = {});
AppConfig load_config(const std::filesystem::path& path);
json config_json(const AppConfig& cfg);

// Applies a recommend request body {query, k, n, method, dims, keywords,
// max_iter} on top of `base`.
EngineConfig engine_config_from_request(const json& body, const EngineConfig& base);

// ---- service --------------------------------------------------------------

struct ApiResponse {
    int status = 200;
    json body;
};

// Request handlers over an immutable snapshot. Thread-safe.
class Service {
public:
    Service(const Corpus& corpus, const Index& index, const EmbeddingStore* store,
            LlmProvider* provider, std::vector<QueryTopic> topics, EngineConfig config);

    ApiResponse health() const;
    ApiResponse search(const std::string& query, std::size_t n) const;
    ApiResponse recommend(const json& body) const;
    ApiResponse topics() const;

    const EngineConfig& config() const { return config_; }

private:
    const Corpus& corpus_;
    const Index& index_;
    const EmbeddingStore* store_;
    LlmProvider* provider_;
    std::vector<QueryTopic> topics_;
    EngineConfig config_;
};

// HTTP binding for a Service. listen() blocks; stop() may be called from
// another thread.
class HttpServer {
public:
    explicit HttpServer(const Service& service);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Binds to `port` (0 picks a free port) and returns the bound port.
    int bind(const std::string& host, int port);
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace bqr
