#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bqr/corpus.hpp"

namespace bqr {

struct IndexParams {
    double k1 = 0.9;
    double b = 0.4;
    bool lowercase = true;

    void validate() const;
};

struct Hit {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const Hit&) const = default;
};

// Ranked hits, score descending, ties by doc_id ascending.
struct ResultSet {
    std::string query;
    std::vector<Hit> hits;
    std::size_t n_requested = 0;

    bool empty() const { return hits.empty(); }
    std::size_t size() const { return hits.size(); }
};

struct IndexStats {
    std::size_t num_docs = 0;
    std::size_t vocab_size = 0;
    std::uint64_t total_length = 0;
    double avg_doc_length = 0.0;
};

// Inverted index over title + text with Lucene-style BM25 ranking:
//   idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5))
//   w(t,d) = idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
class Index {
public:
    struct Posting {
        std::uint32_t doc = 0;
        std::uint32_t tf = 0;
    };

    static Index build(const Corpus& corpus, IndexParams params = {});

    // Versioned JSON postings dump.
    void save(const std::filesystem::path& path) const;
    static Index load(const std::filesystem::path& path);

    ResultSet search(std::string_view query, std::size_t n) const;

    const IndexParams& params() const { return params_; }
    IndexStats stats() const;
    // Canonical JSON rendering of stats(); byte-stable across builds.
    std::string report() const;

    std::span<const std::string> doc_ids() const { return doc_ids_; }
    double idf(const std::string& term) const;
    std::uint32_t doc_length(std::size_t doc) const { return doc_lengths_.at(doc); }

private:
    Index() = default;

    IndexParams params_;
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    std::uint64_t total_length_ = 0;
    double avgdl_ = 0.0;
    // Postings per term sorted by document ordinal.
    std::unordered_map<std::string, std::vector<Posting>> postings_;
};

// Resolve a result set against the corpus in rank order.
std::vector<const Document*> resolve(const ResultSet& results, const Corpus& corpus);

}  // namespace bqr
