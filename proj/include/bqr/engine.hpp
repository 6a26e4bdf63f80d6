#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bqr/candidates.hpp"
#include "bqr/corpus.hpp"
#include "bqr/embedding.hpp"
#include "bqr/scoring.hpp"
#include "bqr/text_index.hpp"

namespace bqr {

struct EngineConfig {
    std::size_t k = 10;         // desired recommendations
    std::size_t n = 20;         // documents retrieved per query
    std::size_t max_iter = 5;
    Method method = Method::LlmSimilar;
    // Empty means default_dimensions(corpus schema).
    std::vector<DimensionSpec> dims;
    UnlabeledPolicy policy = UnlabeledPolicy::Exclude;
    // Single-word queries use embedding neighbors directly and multi-word
    // queries prompt once per neighbor, instead of the per-method prompting.
    bool literal_llm_branch = false;
    // Use the pseudo-Pareto front for the final selection when a signed-mean
    // dimension is configured.
    bool pseudo_pareto = false;
    std::size_t threads = 1;

    void validate() const;
    std::vector<DimensionSpec> resolved_dims(const Schema& schema) const;
};

// Read-only inputs shared by every recommendation. `store` is required for
// methods 1 and 2, `provider` for methods 2 and 3.
struct Resources {
    const Corpus& corpus;
    const Index& index;
    const EmbeddingStore* store = nullptr;
    LlmProvider* provider = nullptr;
};

struct RecommendRequest {
    std::string query;
    std::vector<std::string> keywords;  // dataset keywords, used by method 3
    std::string topic_id;
};

struct IterationTrace {
    std::size_t iteration = 0;
    std::vector<std::string> words;       // neighbor/keyword pool used for generation
    std::vector<std::string> generated;   // candidates produced this iteration
    std::vector<std::string> scored;      // new candidates scored, in update order
    std::vector<std::string> added;
    std::vector<std::string> evicted;
    std::vector<std::string> rejected;    // dominated or tied with the original
    std::vector<std::string> no_results;
};

struct Recommendation {
    ScoredQuery original;
    std::vector<ScoredQuery> recs;
    std::size_t iterations_used = 0;
    std::vector<IterationTrace> trace;
    // Every scored candidate, in scoring order.
    std::vector<ScoredQuery> candidates;
    std::vector<DimensionSpec> dims;
};

Recommendation recommend(const RecommendRequest& request, const EngineConfig& config,
                         const Resources& resources);

struct PlannedPrompt {
    std::size_t iteration = 0;
    std::string prompt;
};

// Every prompt recommend() may send for this request, over all max_iter
// iterations. Prompts depend only on the query, keywords and embeddings, so
// this is the complete set a replay fixture file has to cover.
std::vector<PlannedPrompt> planned_prompts(const RecommendRequest& request,
                                           const EngineConfig& config, const Resources& resources);

}  // namespace bqr
