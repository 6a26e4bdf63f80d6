// bqr: command-line front end for indexing, search, balanced query
// recommendation, method evaluation and the JSON service.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bqr/api.hpp"
#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::string corpus;
    std::string schema;
    std::string topics;
    std::string embeddings;
    std::string fixtures;
    std::string config;
    std::string index;
    std::string format = "json";
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw bqr::Error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Lazily loaded inputs shared by the subcommands.
class Workspace {
public:
    explicit Workspace(const GlobalOptions& g) : g_(g) {
        if (!g.config.empty()) app_ = bqr::load_config(g.config);
    }

    bqr::AppConfig& app() { return app_; }

    const bqr::Corpus& corpus() {
        if (!corpus_) {
            if (g_.corpus.empty()) throw bqr::InvalidArgument("--corpus is required");
            fs::path schema_path = g_.schema;
            if (schema_path.empty()) schema_path = fs::path(g_.corpus).parent_path() / "schema.json";
            if (!fs::exists(schema_path))
                throw bqr::InvalidArgument("no schema file; pass --schema (looked for " +
                                           schema_path.string() + ")");
            corpus_.emplace(bqr::load_corpus(g_.corpus, bqr::load_schema(schema_path)));
        }
        return *corpus_;
    }

    const bqr::Index& index() {
        if (!index_) {
            if (!g_.index.empty()) {
                index_.emplace(bqr::Index::load(g_.index));
                if (index_->stats().num_docs != corpus().size())
                    throw bqr::InvalidArgument("index " + g_.index + " does not match the corpus");
            } else {
                index_.emplace(bqr::Index::build(corpus(), app_.index));
            }
        }
        return *index_;
    }

    const bqr::EmbeddingStore* store() {
        if (!store_ && !g_.embeddings.empty()) store_.emplace(bqr::load_vectors(g_.embeddings));
        return store_ ? &*store_ : nullptr;
    }

    bqr::LlmProvider* provider() {
        if (!provider_) {
            if (app_.provider == "live") {
                auto cfg = bqr::HttpProviderConfig::from_env(app_.model);
                cfg.max_in_flight = static_cast<std::ptrdiff_t>(app_.max_in_flight);
                provider_ = std::make_unique<bqr::HttpProvider>(cfg);
            } else if (!g_.fixtures.empty()) {
                provider_ = std::make_unique<bqr::ReplayProvider>(bqr::ReplayProvider::from_file(g_.fixtures));
            }
        }
        return provider_.get();
    }

    const std::vector<bqr::QueryTopic>& topics() {
        if (!topics_) {
            if (g_.topics.empty()) {
                topics_.emplace();
            } else {
                topics_.emplace(bqr::load_queries(g_.topics, &corpus()));
            }
        }
        return *topics_;
    }

    bqr::Resources resources() { return {corpus(), index(), store(), provider()}; }

    const GlobalOptions& options() const { return g_; }

private:
    const GlobalOptions& g_;
    bqr::AppConfig app_;
    std::optional<bqr::Corpus> corpus_;
    std::optional<bqr::Index> index_;
    std::optional<bqr::EmbeddingStore> store_;
    std::unique_ptr<bqr::LlmProvider> provider_;
    std::optional<std::vector<bqr::QueryTopic>> topics_;
};

struct EngineOverrides {
    std::optional<std::size_t> k, n, max_iter;
    std::string method;

    void add_to(CLI::App* cmd, bool with_method = true) {
        cmd->add_option("-k,--k", k, "Number of desired recommendations");
        cmd->add_option("-n,--n", n, "Documents retrieved per query");
        cmd->add_option("--max-iter", max_iter, "Maximum expansion iterations");
        if (with_method) cmd->add_option("--method", method, "Candidate method: m1, m2 or m3");
    }

    bqr::EngineConfig apply(bqr::EngineConfig cfg) const {
        if (k) cfg.k = *k;
        if (n) cfg.n = *n;
        if (max_iter) cfg.max_iter = *max_iter;
        if (!method.empty()) cfg.method = bqr::parse_method(method);
        cfg.validate();
        return cfg;
    }
};

bqr::RecommendRequest make_request(Workspace& ws, const std::string& query, const std::string& topic_id,
                                   const std::vector<std::string>& keywords) {
    bqr::RecommendRequest req;
    req.query = query;
    req.topic_id = topic_id;
    req.keywords = keywords;
    if (!topic_id.empty()) {
        const bqr::QueryTopic* found = nullptr;
        for (const auto& t : ws.topics()) {
            if (t.topic_id == topic_id) found = &t;
        }
        if (found == nullptr) throw bqr::InvalidArgument("unknown topic id: " + topic_id);
        if (req.query.empty()) req.query = found->title;
        if (req.keywords.empty()) req.keywords = found->keywords;
    } else if (req.keywords.empty()) {
        for (const auto& t : ws.topics()) {
            if (t.title == query) {
                req.keywords = t.keywords;
                req.topic_id = t.topic_id;
                break;
            }
        }
    }
    if (req.query.empty()) throw bqr::InvalidArgument("--query or --topic is required");
    return req;
}

std::vector<bqr::Method> parse_methods(const std::vector<std::string>& names) {
    std::vector<bqr::Method> out;
    for (const auto& n : names) out.push_back(bqr::parse_method(n));
    if (out.empty()) throw bqr::InvalidArgument("at least one method is required");
    return out;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw bqr::Error("cannot write " + p.string());
    out << content;
}

bqr::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Balanced query recommendation over an attribute-labeled corpus"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--corpus", g.corpus, "Corpus JSON-Lines file")->check(CLI::ExistingFile);
    app.add_option("--schema", g.schema, "Schema JSON (default: schema.json next to the corpus)");
    app.add_option("--topics", g.topics, "Topics JSON-Lines file")->check(CLI::ExistingFile);
    app.add_option("--embeddings", g.embeddings, "GloVe-format word vectors")->check(CLI::ExistingFile);
    app.add_option("--fixtures", g.fixtures, "Replay fixtures (prompt hash -> response)")->check(CLI::ExistingFile);
    app.add_option("--config", g.config, "Engine config JSON")->check(CLI::ExistingFile);
    app.add_option("--index", g.index, "Prebuilt index file (default: build in memory)");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    // index
    auto* cmd_index = app.add_subcommand("index", "Build an index and optionally persist it");
    std::string index_out;
    cmd_index->add_option("-o,--out", index_out, "Write the index to this file");

    // search
    auto* cmd_search = app.add_subcommand("search", "Run a BM25 query");
    std::string search_query;
    std::size_t search_n = 20;
    cmd_search->add_option("-q,--query", search_query, "Query text")->required();
    cmd_search->add_option("-n,--n", search_n, "Number of results")->check(CLI::PositiveNumber);

    // recommend
    auto* cmd_rec = app.add_subcommand("recommend", "Recommend balanced alternative queries");
    std::string rec_query, rec_topic;
    std::vector<std::string> rec_keywords;
    EngineOverrides rec_over;
    cmd_rec->add_option("-q,--query", rec_query, "Original query");
    cmd_rec->add_option("--topic", rec_topic, "Topic id (query and keywords from --topics)");
    cmd_rec->add_option("--keywords", rec_keywords, "Keywords for method m3")->delimiter(',');
    rec_over.add_to(cmd_rec);

    // export-plot
    auto* cmd_plot = app.add_subcommand("export-plot", "Relevance/entropy scatter rows for one query");
    std::string plot_query, plot_topic, plot_out;
    EngineOverrides plot_over;
    cmd_plot->add_option("-q,--query", plot_query, "Original query");
    cmd_plot->add_option("--topic", plot_topic, "Topic id");
    cmd_plot->add_option("-o,--out", plot_out, "Write CSV here instead of stdout");
    plot_over.add_to(cmd_plot);

    // evaluate
    auto* cmd_eval = app.add_subcommand("evaluate", "Domination matrix across candidate methods");
    std::vector<std::string> eval_methods{"m1", "m2", "m3"};
    std::vector<std::string> eval_topics;
    std::string eval_out_dir;
    EngineOverrides eval_over;
    cmd_eval->add_option("--methods", eval_methods, "Methods to compare")->delimiter(',');
    cmd_eval->add_option("--topic-ids", eval_topics, "Restrict to these topic ids")->delimiter(',');
    cmd_eval->add_option("--out-dir", eval_out_dir, "Write matrix.csv, summary.csv and manifest.json here");
    eval_over.add_to(cmd_eval, false);

    // prompts
    auto* cmd_prompts = app.add_subcommand("prompts", "List every LLM prompt a run would send (for recording fixtures)");
    std::vector<std::string> prompt_methods{"m2", "m3"};
    EngineOverrides prompt_over;
    cmd_prompts->add_option("--methods", prompt_methods, "Methods")->delimiter(',');
    prompt_over.add_to(cmd_prompts, false);

    // serve
    auto* cmd_serve = app.add_subcommand("serve", "Serve the JSON API");
    std::string host = "127.0.0.1";
    int port = 8080;
    cmd_serve->add_option("--host", host, "Bind address");
    cmd_serve->add_option("--port", port, "Port (0 picks a free one)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        if (e.get_exit_code() != 0) std::cerr << app.help();
        return 1;
    }

    try {
        Workspace ws(g);
        auto& cfg = ws.app();
        const bool csv = g.format == "csv";

        if (*cmd_index) {
            const auto& index = ws.index();
            if (!index_out.empty()) index.save(index_out);
            std::cout << index.report() << '\n';
        } else if (*cmd_search) {
            auto rs = ws.index().search(search_query, search_n);
            if (csv) {
                std::cout << "rank,doc_id,score\n";
                for (std::size_t i = 0; i < rs.hits.size(); ++i)
                    std::cout << i + 1 << ',' << rs.hits[i].doc_id << ',' << bqr::format_double(rs.hits[i].score) << '\n';
            } else {
                std::cout << bqr::search_response(rs, ws.corpus(), cfg.engine.policy).dump(2) << '\n';
            }
        } else if (*cmd_rec || *cmd_plot) {
            const bool plot = cmd_plot->parsed();
            const auto& over = plot ? plot_over : rec_over;
            auto engine = over.apply(cfg.engine);
            auto req = plot ? make_request(ws, plot_query, plot_topic, {})
                            : make_request(ws, rec_query, rec_topic, rec_keywords);
            auto rec = bqr::recommend(req, engine, ws.resources());
            if (plot || csv) {
                auto rows = bqr::scatter_csv(rec);
                if (plot && !plot_out.empty()) {
                    write_file(plot_out, rows);
                } else {
                    std::cout << rows;
                }
            } else {
                std::cout << bqr::recommend_response(rec, ws.corpus(), engine.policy).dump(2) << '\n';
            }
        } else if (*cmd_eval) {
            auto engine = eval_over.apply(cfg.engine);
            auto methods = parse_methods(eval_methods);
            std::vector<bqr::QueryTopic> topics;
            for (const auto& t : ws.topics()) {
                if (eval_topics.empty() ||
                    std::find(eval_topics.begin(), eval_topics.end(), t.topic_id) != eval_topics.end())
                    topics.push_back(t);
            }
            if (topics.empty()) throw bqr::InvalidArgument("no topics to evaluate (pass --topics)");
            auto matrix = bqr::method_matrix(topics, methods, engine, ws.resources());

            if (!eval_out_dir.empty()) {
                fs::create_directories(eval_out_dir);
                write_file(fs::path(eval_out_dir) / "matrix.csv", bqr::to_csv(matrix));
                write_file(fs::path(eval_out_dir) / "summary.csv", bqr::summary_csv(matrix));
                auto app_cfg = cfg;
                app_cfg.engine = engine;
                bqr::json manifest = {
                    {"config", bqr::config_json(app_cfg)},
                    {"corpus_hash", bqr::prompt_hash(read_file(g.corpus))},
                    {"topics_hash", g.topics.empty() ? "" : bqr::prompt_hash(read_file(g.topics))},
                    {"embeddings_hash", g.embeddings.empty() ? "" : bqr::prompt_hash(read_file(g.embeddings))},
                    {"fixtures_hash", g.fixtures.empty() ? "" : bqr::prompt_hash(read_file(g.fixtures))},
                    {"prompt_template_hash", bqr::prompt_hash(bqr::prompt_template())},
                    {"methods", eval_methods},
                    {"topics", matrix.topics}};
                write_file(fs::path(eval_out_dir) / "manifest.json", manifest.dump(2) + "\n");
            }
            if (csv) {
                std::cout << bqr::to_csv(matrix);
            } else {
                std::cout << bqr::matrix_json(matrix).dump(2) << '\n';
            }
            for (const auto& r : matrix.runs) {
                if (r.status != "ok")
                    std::cerr << "topic " << r.topic_id << " method " << bqr::to_string(r.method) << ": "
                              << r.status << ": " << r.detail << '\n';
            }
        } else if (*cmd_prompts) {
            auto engine = prompt_over.apply(cfg.engine);
            for (auto method : parse_methods(prompt_methods)) {
                engine.method = method;
                for (const auto& t : ws.topics()) {
                    std::vector<bqr::PlannedPrompt> planned;
                    try {
                        planned = bqr::planned_prompts({t.title, t.keywords, t.topic_id}, engine, ws.resources());
                    } catch (const bqr::Error& e) {
                        std::cerr << "topic " << t.topic_id << " method " << bqr::to_string(method)
                                  << ": " << e.what() << '\n';
                        continue;
                    }
                    for (const auto& p : planned) {
                        bqr::json line = {{"topic_id", t.topic_id},
                                          {"method", std::string(bqr::to_string(method))},
                                          {"iteration", p.iteration},
                                          {"hash", bqr::prompt_hash(p.prompt)},
                                          {"prompt", p.prompt}};
                        std::cout << line.dump() << '\n';
                    }
                }
            }
        } else if (*cmd_serve) {
            bqr::Service service(ws.corpus(), ws.index(), ws.store(), ws.provider(), ws.topics(), cfg.engine);
            bqr::HttpServer server(service);
            const int bound = server.bind(host, port);
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << "listening on http://" << host << ':' << bound << '\n';
            server.listen();
            g_server = nullptr;
        }
    } catch (const bqr::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
