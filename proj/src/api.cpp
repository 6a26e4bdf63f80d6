#include "bqr/api.hpp"

#include <fstream>
#include <set>

#include "bqr/error.hpp"

namespace bqr {

json to_json(const Distribution& d) {
    json probs = json::object();
    for (const auto& [k, v] : d.probs) probs[k] = v;
    return {{"probs", std::move(probs)},
            {"support_count", d.support_count},
            {"policy", std::string(to_string(d.policy))}};
}

json to_json(const DimensionSpec& d) {
    return {{"name", d.name},
            {"kind", std::string(to_string(d.kind))},
            {"orientation", std::string(to_string(d.orientation))}};
}

json dim_scores_json(const ScoredQuery& q) {
    json arr = json::array();
    for (const auto& [name, value] : q.dim_scores) arr.push_back({{"name", name}, {"value", value}});
    return arr;
}

json hits_json(const ResultSet& rs, const Corpus& corpus) {
    json arr = json::array();
    for (const auto& hit : rs.hits) {
        const auto& doc = corpus.at(hit.doc_id);
        json attrs = json::object();
        for (const auto& [dim, labels] : doc.attributes) attrs[dim] = labels;
        arr.push_back({{"doc_id", hit.doc_id},
                       {"title", doc.title},
                       {"url", doc.url},
                       {"score", hit.score},
                       {"attributes", std::move(attrs)}});
    }
    return arr;
}

json distributions_json(const ResultSet& rs, const Corpus& corpus, UnlabeledPolicy policy) {
    const auto docs = resolve(rs, corpus);
    json out = json::object();
    for (const auto& dim : corpus.schema().dimensions) {
        out[dim] = to_json(attribute_distribution(docs, dim, corpus.schema(), policy));
    }
    return out;
}

json search_response(const ResultSet& rs, const Corpus& corpus, UnlabeledPolicy policy) {
    return {{"query", rs.query},
            {"n", rs.n_requested},
            {"hits", hits_json(rs, corpus)},
            {"distributions", distributions_json(rs, corpus, policy)}};
}

namespace {

json scored_entry(const ScoredQuery& q, const Corpus& corpus, UnlabeledPolicy policy) {
    return {{"query", q.query},
            {"dim_scores", dim_scores_json(q)},
            {"hits", hits_json(q.result_set, corpus)},
            {"distributions", distributions_json(q.result_set, corpus, policy)}};
}

}  // namespace

json recommend_response(const Recommendation& rec, const Corpus& corpus, UnlabeledPolicy policy) {
    json recs = json::array();
    for (const auto& q : rec.recs) recs.push_back(scored_entry(q, corpus, policy));
    json dims = json::array();
    for (const auto& d : rec.dims) dims.push_back(to_json(d));
    json iterations = json::array();
    for (const auto& t : rec.trace) {
        iterations.push_back({{"iteration", t.iteration},
                              {"words", t.words},
                              {"generated", t.generated.size()},
                              {"scored", t.scored},
                              {"added", t.added},
                              {"evicted", t.evicted},
                              {"rejected", t.rejected},
                              {"no_results", t.no_results}});
    }
    return {{"original", scored_entry(rec.original, corpus, policy)},
            {"dims", std::move(dims)},
            {"recommendations", std::move(recs)},
            {"trace_summary",
             {{"iterations_used", rec.iterations_used},
              {"candidates_scored", rec.candidates.size()},
              {"iterations", std::move(iterations)}}}};
}

json matrix_json(const DominationMatrix& m) {
    json methods = json::array();
    for (auto x : m.methods) methods.push_back(std::string(to_string(x)));
    json cells = json::array();
    for (const auto& c : m.cells) {
        cells.push_back({{"topic_id", c.topic_id},
                         {"method_a", std::string(to_string(c.method_a))},
                         {"method_b", std::string(to_string(c.method_b))},
                         {"score", c.score ? json(*c.score) : json(nullptr)},
                         {"self", c.self()}});
    }
    json runs = json::array();
    for (const auto& r : m.runs) {
        json entry = {{"topic_id", r.topic_id},
                      {"method", std::string(to_string(r.method))},
                      {"status", r.status}};
        if (!r.detail.empty()) entry["detail"] = r.detail;
        if (r.recommendation) {
            json recs = json::array();
            for (const auto& q : r.recommendation->recs)
                recs.push_back({{"query", q.query}, {"dim_scores", dim_scores_json(q)}});
            entry["recommendations"] = std::move(recs);
        }
        runs.push_back(std::move(entry));
    }
    json totals = json::array();
    for (auto a : m.methods) {
        for (auto b : m.methods) {
            totals.push_back({{"method_a", std::string(to_string(a))},
                              {"method_b", std::string(to_string(b))},
                              {"total", m.total(a, b)}});
        }
    }
    return {{"methods", std::move(methods)},
            {"topics", m.topics},
            {"cells", std::move(cells)},
            {"totals", std::move(totals)},
            {"runs", std::move(runs)}};
}

DimensionSpec dimension_from_json(const json& j) {
    if (j.is_string()) {
        auto name = j.get<std::string>();
        return name == "relevance" ? DimensionSpec::relevance() : DimensionSpec::entropy(name);
    }
    if (!j.is_object()) throw InvalidArgument("dimension must be a name or an object");
    DimensionSpec d;
    d.name = j.at("name").get<std::string>();
    d.kind = j.contains("kind") ? parse_dimension_kind(j.at("kind").get<std::string>())
                                : (d.name == "relevance" ? DimensionKind::Relevance : DimensionKind::Entropy);
    if (j.contains("orientation")) {
        d.orientation = parse_orientation(j.at("orientation").get<std::string>());
    } else {
        d.orientation = d.kind == DimensionKind::SignedMean ? Orientation::MinimizeAbs : Orientation::Maximize;
    }
    return d;
}

namespace {

std::size_t positive(const json& j, const char* key) {
    if (!j.is_number_integer() || j.get<long long>() < 1)
        throw InvalidArgument(std::string("'") + key + "' must be an integer >= 1");
    return j.get<std::size_t>();
}

}  // namespace

AppConfig parse_config(const json& j, AppConfig cfg) {
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    static const std::set<std::string> kKeys = {
        "k", "n", "max_iter", "method", "dims", "unlabeled_policy", "literal_llm_branch",
        "pseudo_pareto", "threads", "index", "provider", "model", "max_in_flight"};
    try {
        for (const auto& [key, value] : j.items()) {
            if (!kKeys.count(key)) throw InvalidArgument("unknown config key: " + key);
        }
        auto& e = cfg.engine;
        if (j.contains("k")) e.k = positive(j["k"], "k");
        if (j.contains("n")) e.n = positive(j["n"], "n");
        if (j.contains("max_iter")) e.max_iter = positive(j["max_iter"], "max_iter");
        if (j.contains("threads")) e.threads = positive(j["threads"], "threads");
        if (j.contains("method")) e.method = parse_method(j["method"].get<std::string>());
        if (j.contains("unlabeled_policy"))
            e.policy = parse_unlabeled_policy(j["unlabeled_policy"].get<std::string>());
        if (j.contains("literal_llm_branch")) e.literal_llm_branch = j["literal_llm_branch"].get<bool>();
        if (j.contains("pseudo_pareto")) e.pseudo_pareto = j["pseudo_pareto"].get<bool>();
        if (j.contains("dims")) {
            e.dims.clear();
            for (const auto& d : j["dims"]) e.dims.push_back(dimension_from_json(d));
        }
        if (j.contains("index")) {
            const auto& ix = j["index"];
            if (ix.contains("k1")) cfg.index.k1 = ix["k1"].get<double>();
            if (ix.contains("b")) cfg.index.b = ix["b"].get<double>();
            if (ix.contains("lowercase")) cfg.index.lowercase = ix["lowercase"].get<bool>();
        }
        if (j.contains("provider")) {
            cfg.provider = j["provider"].get<std::string>();
            if (cfg.provider != "replay" && cfg.provider != "live")
                throw InvalidArgument("provider must be 'replay' or 'live'");
        }
        if (j.contains("model")) cfg.model = j["model"].get<std::string>();
        if (j.contains("max_in_flight")) cfg.max_in_flight = positive(j["max_in_flight"], "max_in_flight");
    } catch (const json::exception& ex) {
        throw InvalidArgument(std::string("invalid config: ") + ex.what());
    }
    cfg.engine.validate();
    cfg.index.validate();
    return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    try {
        return parse_config(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

json config_json(const AppConfig& cfg) {
    const auto& e = cfg.engine;
    json dims = json::array();
    for (const auto& d : e.dims) dims.push_back(to_json(d));
    return {{"k", e.k},
            {"n", e.n},
            {"max_iter", e.max_iter},
            {"method", std::string(to_string(e.method))},
            {"dims", std::move(dims)},
            {"unlabeled_policy", std::string(to_string(e.policy))},
            {"literal_llm_branch", e.literal_llm_branch},
            {"pseudo_pareto", e.pseudo_pareto},
            {"threads", e.threads},
            {"index", {{"k1", cfg.index.k1}, {"b", cfg.index.b}, {"lowercase", cfg.index.lowercase}}},
            {"provider", cfg.provider},
            {"model", cfg.model},
            {"max_in_flight", cfg.max_in_flight}};
}

EngineConfig engine_config_from_request(const json& body, const EngineConfig& base) {
    if (!body.is_object()) throw InvalidArgument("request body must be a JSON object");
    static const std::set<std::string> kKeys = {"query", "k", "n", "max_iter", "method", "dims", "keywords", "topic_id"};
    for (const auto& [key, value] : body.items()) {
        if (!kKeys.count(key)) throw InvalidArgument("unknown request field: " + key);
    }
    json overrides = json::object();
    for (const char* key : {"k", "n", "max_iter", "method", "dims"}) {
        if (body.contains(key)) overrides[key] = body[key];
    }
    AppConfig app;
    app.engine = base;
    return parse_config(overrides, app).engine;
}

Service::Service(const Corpus& corpus, const Index& index, const EmbeddingStore* store,
                 LlmProvider* provider, std::vector<QueryTopic> topics, EngineConfig config)
    : corpus_(corpus), index_(index), store_(store), provider_(provider),
      topics_(std::move(topics)), config_(std::move(config)) {
    config_.validate();
}

namespace {

template <typename Fn>
ApiResponse guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ProviderError& e) {
        return {502, {{"error", "provider_error"}, {"detail", e.what()}}};
    } catch (const OutOfVocabulary& e) {
        return {422, {{"error", "out_of_vocabulary"}, {"detail", e.what()}}};
    } catch (const InapplicableMethod& e) {
        return {422, {{"error", "inapplicable_method"}, {"detail", e.what()}}};
    } catch (const Error& e) {
        return {400, {{"error", "bad_request"}, {"detail", e.what()}}};
    } catch (const json::exception& e) {
        return {400, {{"error", "bad_request"}, {"detail", e.what()}}};
    } catch (const std::exception& e) {
        return {500, {{"error", "internal_error"}, {"detail", e.what()}}};
    }
}

}  // namespace

ApiResponse Service::health() const {
    return {200, {{"status", "ok"}, {"docs", corpus_.size()}}};
}

ApiResponse Service::search(const std::string& query, std::size_t n) const {
    return guarded([&]() -> ApiResponse {
        if (n == 0) throw InvalidArgument("n must be >= 1");
        auto rs = index_.search(query, n);
        return {200, search_response(rs, corpus_, config_.policy)};
    });
}

ApiResponse Service::recommend(const json& body) const {
    return guarded([&]() -> ApiResponse {
        auto cfg = engine_config_from_request(body, config_);
        RecommendRequest req;
        req.query = body.at("query").get<std::string>();
        if (body.contains("keywords")) req.keywords = body["keywords"].get<std::vector<std::string>>();
        if (body.contains("topic_id")) req.topic_id = body["topic_id"].get<std::string>();
        if (req.keywords.empty() && cfg.method == Method::LlmKeywords) {
            for (const auto& t : topics_) {
                if (t.title == req.query || (!req.topic_id.empty() && t.topic_id == req.topic_id)) {
                    req.keywords = t.keywords;
                    if (req.topic_id.empty()) req.topic_id = t.topic_id;
                    break;
                }
            }
        }
        auto rec = bqr::recommend(req, cfg, Resources{corpus_, index_, store_, provider_});
        return {200, recommend_response(rec, corpus_, cfg.policy)};
    });
}

ApiResponse Service::topics() const {
    json arr = json::array();
    for (const auto& t : topics_) {
        arr.push_back({{"id", t.topic_id},
                       {"title", t.title},
                       {"keywords", t.keywords},
                       {"relevant_docs", t.relevant_docs}});
    }
    return {200, {{"topics", std::move(arr)}}};
}

}  // namespace bqr
