#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bqr/corpus.hpp"
#include "bqr/embedding.hpp"

namespace bqr {

enum class Method {
    Embedding,        // M1: nearest embedding words used directly
    LlmSimilar,       // M2: LLM prompted with the topic and embedding neighbors
    LlmKeywords,      // M3: LLM prompted with the topic and dataset keywords
};

Method parse_method(std::string_view s);   // "m1" | "m2" | "m3"
std::string_view to_string(Method m);        // "m1" | "m2" | "m3"

struct CandidateBatch {
    Method method = Method::Embedding;
    std::string origin_query;
    std::vector<std::string> queries;
};

// Text-completion backend. Implementations must be safe to call from several
// threads at once.
class LlmProvider {
public:
    virtual ~LlmProvider() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

// 64-bit FNV-1a of the exact prompt bytes, as 16 lowercase hex digits.
std::string prompt_hash(std::string_view prompt);

// Serves canned responses keyed by prompt_hash. Unknown prompts are errors.
class ReplayProvider final : public LlmProvider {
public:
    explicit ReplayProvider(std::map<std::string, std::string> responses);
    // JSON object: prompt-hash -> response text.
    static ReplayProvider from_file(const std::filesystem::path& path);

    std::string complete(const std::string& prompt) override;
    std::size_t size() const { return responses_.size(); }

private:
    std::map<std::string, std::string> responses_;
};

struct HttpProviderConfig {
    std::string endpoint;      // e.g. https://host/v1/chat/completions
    std::string model;
    std::string api_key;       // sent as a bearer token when non-empty
    std::chrono::seconds timeout{60};
    std::ptrdiff_t max_in_flight = 4;

    // Endpoint and key from BQR_LLM_ENDPOINT / BQR_LLM_KEY.
    static HttpProviderConfig from_env(std::string model);
};

// Minimal chat-completion client: POSTs {"model", "messages": [user prompt]}
// and reads choices[0].message.content.
class HttpProvider final : public LlmProvider {
public:
    explicit HttpProvider(HttpProviderConfig config);
    ~HttpProvider() override;

    std::string complete(const std::string& prompt) override;

private:
    HttpProviderConfig config_;
    std::counting_semaphore<> in_flight_;
};

// The frozen rewrite prompt with topic and comma-joined keywords filled in.
std::string build_prompt(std::string_view query, std::span<const std::string> keywords);
std::string_view prompt_template();

// Numbered ("1. q", "1) q"), bulleted ("- q", "* q") or bare lines. Strips
// enclosing quotes, lowercases, drops empties and duplicates.
std::vector<std::string> parse_query_list(std::string_view text);

// Normalizes and deduplicates queries, dropping any equal to the origin.
CandidateBatch make_batch(Method method, std::string_view origin,
                          std::span<const std::string> queries);

CandidateBatch method1_embedding(const EmbeddingStore& store, std::string_view query,
                                 std::size_t k = 10);

CandidateBatch method2_llm_with_similar(LlmProvider& provider, std::string_view query,
                                        std::span<const std::string> similar,
                                        std::size_t k = 10);

CandidateBatch method3_llm_with_keywords(LlmProvider& provider, const QueryTopic& topic,
                                         std::size_t k = 10);

// One prompt per related word (topic + that single word), results merged in
// word order. Calls run concurrently.
CandidateBatch llm_per_word(LlmProvider& provider, std::string_view query,
                            std::span<const std::string> words, std::size_t k = 10);

// Prompt text plus the response-truncation rule shared by methods 2 and 3.
CandidateBatch prompt_and_parse(LlmProvider& provider, Method method, std::string_view query,
                                std::span<const std::string> keywords, std::size_t k);

}  // namespace bqr
