#include "bqr/engine.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <mutex>
#include <set>

#include "bqr/error.hpp"
#include "bqr/pareto.hpp"
#include "bqr/tokenizer.hpp"

namespace bqr {

void EngineConfig::validate() const {
    if (k == 0) throw InvalidArgument("k must be >= 1");
    if (n == 0) throw InvalidArgument("n must be >= 1");
    if (max_iter == 0) throw InvalidArgument("max_iter must be >= 1");
    if (!dims.empty()) validate_dimensions(dims);
}

std::vector<DimensionSpec> EngineConfig::resolved_dims(const Schema& schema) const {
    auto out = dims.empty() ? default_dimensions(schema) : dims;
    validate_dimensions(out);
    for (const auto& d : out) {
        if (d.kind != DimensionKind::Relevance && !schema.contains(d.name))
            throw InvalidArgument("dimension '" + d.name + "' is not in the corpus schema");
    }
    return out;
}

namespace {

bool has_vocab_token(const EmbeddingStore& store, std::string_view query) {
    for (const auto& t : tokenize(query)) {
        if (store.contains(t)) return true;
    }
    return false;
}

std::vector<std::string> neighbor_words(const EmbeddingStore& store, std::string_view query,
                                        std::size_t count, const std::set<std::string>& exclude = {}) {
    std::vector<std::string> out;
    for (auto& [w, s] : nearest_words(store, query, count, exclude)) out.push_back(w);
    return out;
}

// Produces the candidate pool for each iteration. Iteration 0 uses the k
// nearest neighbors (or the dataset keywords); every later iteration grows
// the pool by the next most similar embedding word.
class CandidateSource {
public:
    CandidateSource(const RecommendRequest& req, const EngineConfig& cfg, const Resources& res)
        : req_(req), cfg_(cfg), res_(res) {
        const bool needs_store = cfg.method != Method::LlmKeywords;
        const bool needs_llm = cfg.method != Method::Embedding;
        if (needs_store && res.store == nullptr)
            throw InvalidArgument("method " + std::string(to_string(cfg.method)) + " needs word embeddings");
        if (needs_llm && res.provider == nullptr)
            throw InvalidArgument("method " + std::string(to_string(cfg.method)) + " needs an LLM provider");
        if (cfg.method == Method::LlmKeywords && req.keywords.empty())
            throw InapplicableMethod("method 3 needs dataset keywords; topic '" +
                                     (req.topic_id.empty() ? req.query : req.topic_id) + "' has none");
        if (needs_store && !has_vocab_token(*res.store, req.query))
            throw OutOfVocabulary("no token of query '" + req.query + "' is in the embedding vocabulary");
    }

    // Returns false when the pool could not grow (nothing new to generate).
    bool next(std::size_t iteration, IterationTrace& trace, std::vector<std::string>& out) {
        switch (cfg_.method) {
            case Method::Embedding: return next_embedding(iteration, trace, out);
            case Method::LlmSimilar: return next_similar(iteration, trace, out);
            case Method::LlmKeywords: return next_keywords(iteration, trace, out);
        }
        return false;
    }

private:
    std::vector<std::string> grow_pool(std::size_t iteration) {
        auto pool = neighbor_words(*res_.store, req_.query, cfg_.k + iteration);
        const std::size_t before = pool_size_;
        pool_size_ = pool.size();
        fresh_.assign(pool.begin() + static_cast<std::ptrdiff_t>(std::min(before, pool.size())), pool.end());
        return pool;
    }

    bool next_embedding(std::size_t iteration, IterationTrace& trace, std::vector<std::string>& out) {
        auto pool = grow_pool(iteration);
        trace.words = pool;
        if (fresh_.empty()) return false;
        auto batch = make_batch(Method::Embedding, req_.query, fresh_);
        out = std::move(batch.queries);
        return true;
    }

    bool next_similar(std::size_t iteration, IterationTrace& trace, std::vector<std::string>& out) {
        auto pool = grow_pool(iteration);
        trace.words = pool;
        if (fresh_.empty()) return false;
        if (cfg_.literal_llm_branch) {
            if (tokenize(req_.query).size() <= 1) {
                out = make_batch(Method::LlmSimilar, req_.query, fresh_).queries;
            } else {
                out = llm_per_word(*res_.provider, req_.query, fresh_, cfg_.k).queries;
            }
            return true;
        }
        out = method2_llm_with_similar(*res_.provider, req_.query, pool, cfg_.k).queries;
        return true;
    }

    bool next_keywords(std::size_t iteration, IterationTrace& trace, std::vector<std::string>& out) {
        std::vector<std::string> pool = req_.keywords;
        if (iteration > 0) {
            if (res_.store == nullptr || !has_vocab_token(*res_.store, req_.query)) return false;
            const std::set<std::string> exclude(req_.keywords.begin(), req_.keywords.end());
            auto extra = neighbor_words(*res_.store, req_.query, iteration, exclude);
            if (extra.size() <= pool_size_) {
                trace.words = pool;
                return false;
            }
            pool_size_ = extra.size();
            pool.insert(pool.end(), extra.begin(), extra.end());
        }
        trace.words = pool;
        out = prompt_and_parse(*res_.provider, Method::LlmKeywords, req_.query, pool, cfg_.k).queries;
        return true;
    }

    const RecommendRequest& req_;
    const EngineConfig& cfg_;
    const Resources& res_;
    std::size_t pool_size_ = 0;
    std::vector<std::string> fresh_;
};

std::vector<ScoredQuery> score_all(const std::vector<std::string>& queries, const ResultSet& original,
                                   const std::vector<DimensionSpec>& dims, const ScoringContext& ctx,
                                   std::size_t threads) {
    std::vector<ScoredQuery> out(queries.size());
    if (threads <= 1 || queries.size() <= 1) {
        for (std::size_t i = 0; i < queries.size(); ++i) {
            out[i] = score_results(ctx.index.search(queries[i], ctx.n), original, dims, ctx);
        }
        return out;
    }
    const std::size_t workers = std::min(threads, queries.size());
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < queries.size(); i += workers) {
                out[i] = score_results(ctx.index.search(queries[i], ctx.n), original, dims, ctx);
            }
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

class RecordingProvider final : public LlmProvider {
public:
    std::string complete(const std::string& prompt) override {
        std::lock_guard lock(mutex_);
        prompts.push_back(prompt);
        return "1. " + std::to_string(prompts.size());
    }

    std::vector<std::string> prompts;

private:
    std::mutex mutex_;
};

}  // namespace

std::vector<PlannedPrompt> planned_prompts(const RecommendRequest& request,
                                           const EngineConfig& config, const Resources& resources) {
    config.validate();
    if (config.method == Method::Embedding) return {};
    RecordingProvider recorder;
    Resources dry{resources.corpus, resources.index, resources.store, &recorder};
    CandidateSource source(request, config, dry);
    std::vector<PlannedPrompt> out;
    for (std::size_t it = 0; it < config.max_iter; ++it) {
        IterationTrace trace;
        std::vector<std::string> generated;
        recorder.prompts.clear();
        source.next(it, trace, generated);
        // Per-word prompting runs concurrently; order by text for stability.
        std::sort(recorder.prompts.begin(), recorder.prompts.end());
        for (auto& p : recorder.prompts) out.push_back({it, std::move(p)});
    }
    return out;
}

Recommendation recommend(const RecommendRequest& request, const EngineConfig& config,
                         const Resources& resources) {
    config.validate();
    if (trim(request.query).empty()) throw InvalidArgument("query must not be empty");

    Recommendation rec;
    rec.dims = config.resolved_dims(resources.corpus.schema());
    const auto& dims = rec.dims;

    std::map<std::string, SignedLabeling> labelings;
    std::optional<std::size_t> signed_col;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i].kind == DimensionKind::SignedMean) {
            labelings.emplace(dims[i].name, signed_labeling(resources.corpus, dims[i].name));
            if (!signed_col) signed_col = i;
        }
    }
    const ScoringContext ctx{resources.index, resources.corpus, config.n, config.policy, &labelings};

    auto original_results = resources.index.search(request.query, config.n);
    if (original_results.empty())
        throw InvalidArgument("query '" + request.query +
                              "' retrieves no documents; there is no baseline to compare against");
    rec.original = score_results(original_results, original_results, dims, ctx);
    const auto original_point = canonical_scores(rec.original, dims);

    CandidateSource source(request, config, resources);

    std::set<std::string> seen{to_lower(trim(request.query))};
    std::vector<std::vector<double>> points;  // canonical, parallel to rec.candidates
    std::vector<std::size_t> live;             // indices into rec.candidates

    std::size_t iteration = 0;
    while (iteration < config.max_iter && live.size() < config.k) {
        IterationTrace trace;
        trace.iteration = iteration;
        std::vector<std::string> generated;
        try {
            source.next(iteration, trace, generated);
        } catch (const ProviderError& e) {
            throw ProviderError("iteration " + std::to_string(iteration) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("iteration " + std::to_string(iteration) + ": " + e.what(), e.raw());
        }
        trace.generated = generated;

        std::vector<std::string> fresh;
        for (auto& q : generated) {
            if (seen.insert(q).second) fresh.push_back(q);
        }
        std::sort(fresh.begin(), fresh.end());

        for (auto& sq : score_all(fresh, rec.original.result_set, dims, ctx, config.threads)) {
            if (sq.result_set.empty() && signed_col) {
                // Signed bias is undefined without documents.
                trace.no_results.push_back(sq.query);
                continue;
            }
            if (sq.result_set.empty()) trace.no_results.push_back(sq.query);
            trace.scored.push_back(sq.query);
            auto point = canonical_scores(sq, dims);

            bool dominated = point == original_point || dominates_canonical(original_point, point);
            for (std::size_t i = 0; i < live.size() && !dominated; ++i) {
                dominated = dominates_canonical(points[live[i]], point);
            }
            const std::size_t idx = rec.candidates.size();
            if (dominated) {
                trace.rejected.push_back(sq.query);
            } else {
                std::erase_if(live, [&](std::size_t j) {
                    if (!dominates_canonical(point, points[j])) return false;
                    trace.evicted.push_back(rec.candidates[j].query);
                    return true;
                });
                live.push_back(idx);
                trace.added.push_back(sq.query);
            }
            points.push_back(std::move(point));
            rec.candidates.push_back(std::move(sq));
        }
        rec.trace.push_back(std::move(trace));
        ++iteration;
    }
    rec.iterations_used = iteration;

    // Final pass over everything scored plus the original as a baseline, so
    // the output is a true front rather than an artifact of insertion order.
    std::vector<ScoredQuery> pool;
    std::vector<std::size_t> pool_to_candidate;
    for (std::size_t i = 0; i < rec.candidates.size(); ++i) {
        if (points[i] == original_point) continue;
        pool.push_back(rec.candidates[i]);
        pool_to_candidate.push_back(i);
    }
    pool.push_back(rec.original);
    const std::size_t original_slot = pool.size() - 1;

    std::vector<std::size_t> front;
    if (config.pseudo_pareto && signed_col) {
        front = pseudo_pareto_front_indices(pool, dims, dims[*signed_col].name,
                                            rec.original.dim_scores[*signed_col].second);
    } else {
        std::vector<std::vector<double>> pts;
        for (const auto& q : pool) pts.push_back(canonical_scores(q, dims));
        front = pareto_front_indices(pts);
    }
    for (auto i : front) {
        if (i == original_slot) continue;
        rec.recs.push_back(rec.candidates[pool_to_candidate[i]]);
    }
    return rec;
}

}  // namespace bqr
