#include "bqr/candidates.hpp"

#include <cstdlib>
#include <fstream>
#include <future>
#include <set>

#include <nlohmann/json.hpp>

#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"
#include "prompt_template.inc"

namespace bqr {

using nlohmann::json;

Method parse_method(std::string_view s) {
    const auto lower = to_lower(s);
    if (lower == "m1" || lower == "embedding") return Method::Embedding;
    if (lower == "m2" || lower == "llm-similar") return Method::LlmSimilar;
    if (lower == "m3" || lower == "llm-keywords") return Method::LlmKeywords;
    throw InvalidArgument("unknown method: " + std::string(s) + " (expected m1, m2 or m3)");
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::Embedding: return "m1";
        case Method::LlmSimilar: return "m2";
        case Method::LlmKeywords: return "m3";
    }
    return "?";
}

std::string prompt_hash(std::string_view prompt) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : prompt) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
        h >>= 4;
    }
    return out;
}

ReplayProvider::ReplayProvider(std::map<std::string, std::string> responses)
    : responses_(std::move(responses)) {}

ReplayProvider ReplayProvider::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open fixtures " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(path.string() + ": fixtures must be a JSON object");
    std::map<std::string, std::string> responses;
    for (const auto& [key, value] : j.items()) {
        if (!value.is_string())
            throw ParseError(path.string() + ": fixture '" + key + "' is not a string");
        responses.emplace(key, value.get<std::string>());
    }
    return ReplayProvider(std::move(responses));
}

std::string ReplayProvider::complete(const std::string& prompt) {
    const auto key = prompt_hash(prompt);
    auto it = responses_.find(key);
    if (it == responses_.end())
        throw ProviderError("replay: no fixture for prompt hash " + key + ":\n" + prompt);
    return it->second;
}

HttpProviderConfig HttpProviderConfig::from_env(std::string model) {
    HttpProviderConfig cfg;
    if (const char* e = std::getenv("BQR_LLM_ENDPOINT")) cfg.endpoint = e;
    if (const char* k = std::getenv("BQR_LLM_KEY")) cfg.api_key = k;
    cfg.model = std::move(model);
    return cfg;
}

std::string_view prompt_template() { return kPromptTemplate; }

std::string build_prompt(std::string_view query, std::span<const std::string> keywords) {
    std::string joined;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        if (i) joined += ", ";
        joined += keywords[i];
    }
    std::string out(kPromptTemplate);
    auto replace = [&out](std::string_view key, std::string_view value) {
        auto pos = out.find(key);
        if (pos != std::string::npos) out.replace(pos, key.size(), value);
    };
    replace("{query}", query);
    replace("{keywords}", joined);
    return out;
}

namespace {

std::string strip_marker(std::string_view line, bool& marked) {
    std::size_t i = 0;
    if (i < line.size() && (line[i] == '-' || line[i] == '*' || line[i] == '+')) {
        ++i;
    } else {
        std::size_t d = 0;
        while (d < line.size() && std::isdigit(static_cast<unsigned char>(line[d]))) ++d;
        if (d > 0 && d < line.size() && (line[d] == '.' || line[d] == ')' || line[d] == ':')) i = d + 1;
    }
    marked = i > 0;
    return trim(line.substr(i));
}

std::string strip_quotes(std::string s) {
    static const std::pair<std::string_view, std::string_view> kPairs[] = {
        {"\"", "\""}, {"'", "'"}, {"`", "`"}, {"“", "”"}, {"‘", "’"},
        {"**", "**"}};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [open, close] : kPairs) {
            if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
                s = trim(std::string_view(s).substr(open.size(), s.size() - open.size() - close.size()));
                changed = true;
            }
        }
    }
    return s;
}

}  // namespace

std::vector<std::string> parse_query_list(std::string_view text) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = trim(text.substr(pos, nl - pos));
        pos = nl + 1;
        if (line.empty()) continue;
        bool marked = false;
        auto item = strip_marker(line, marked);
        // Headings ("Here are ten queries:") and unmarked prose sentences are
        // not queries; a list item may carry a trailing period.
        if (item.ends_with(':')) continue;
        if (item.ends_with('.') || item.ends_with('!') || item.ends_with('?')) {
            if (!marked) continue;
            item = trim(std::string_view(item).substr(0, item.size() - 1));
        }
        auto q = to_lower(strip_quotes(item));
        if (q.empty()) continue;
        if (seen.insert(q).second) out.push_back(std::move(q));
    }
    if (out.empty()) throw ParseError("no queries found in response", std::string(text));
    return out;
}

CandidateBatch make_batch(Method method, std::string_view origin,
                          std::span<const std::string> queries) {
    CandidateBatch batch;
    batch.method = method;
    batch.origin_query = std::string(origin);
    const auto origin_norm = to_lower(trim(origin));
    std::set<std::string> seen;
    for (const auto& q : queries) {
        auto norm = to_lower(trim(q));
        if (norm.empty() || norm == origin_norm) continue;
        if (seen.insert(norm).second) batch.queries.push_back(std::move(norm));
    }
    return batch;
}

CandidateBatch method1_embedding(const EmbeddingStore& store, std::string_view query,
                                 std::size_t k) {
    if (k == 0) throw InvalidArgument("method 1: k must be >= 1");
    std::vector<std::string> words;
    for (auto& [word, sim] : nearest_words(store, query, k)) words.push_back(word);
    return make_batch(Method::Embedding, query, words);
}

CandidateBatch prompt_and_parse(LlmProvider& provider, Method method, std::string_view query,
                                std::span<const std::string> keywords, std::size_t k) {
    const auto prompt = build_prompt(query, keywords);
    std::string response;
    try {
        response = provider.complete(prompt);
    } catch (const ProviderError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProviderError(std::string("provider failure: ") + e.what());
    }
    auto queries = parse_query_list(response);
    auto batch = make_batch(method, query, queries);
    if (batch.queries.size() > k) batch.queries.resize(k);
    return batch;
}

CandidateBatch method2_llm_with_similar(LlmProvider& provider, std::string_view query,
                                        std::span<const std::string> similar, std::size_t k) {
    if (similar.empty()) throw InvalidArgument("method 2: similar-word list is empty");
    return prompt_and_parse(provider, Method::LlmSimilar, query, similar, k);
}

CandidateBatch method3_llm_with_keywords(LlmProvider& provider, const QueryTopic& topic,
                                         std::size_t k) {
    if (topic.keywords.empty())
        throw InapplicableMethod("method 3 needs dataset keywords; topic '" + topic.topic_id +
                                 "' has none");
    return prompt_and_parse(provider, Method::LlmKeywords, topic.title, topic.keywords, k);
}

CandidateBatch llm_per_word(LlmProvider& provider, std::string_view query,
                            std::span<const std::string> words, std::size_t k) {
    std::vector<std::future<CandidateBatch>> pending;
    pending.reserve(words.size());
    for (const auto& w : words) {
        pending.push_back(std::async(std::launch::async, [&provider, query, w, k] {
            return prompt_and_parse(provider, Method::LlmSimilar, query,
                                    std::span<const std::string>(&w, 1), k);
        }));
    }
    std::vector<std::string> merged;
    for (auto& f : pending) {
        auto batch = f.get();
        merged.insert(merged.end(), batch.queries.begin(), batch.queries.end());
    }
    return make_batch(Method::LlmSimilar, query, merged);
}

}  // namespace bqr
