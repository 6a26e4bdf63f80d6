#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bqr {

// Category name used for unlabeled documents under UnlabeledPolicy::AsCategory.
inline constexpr std::string_view kUnlabeledCategory = "⟂unlabeled";

enum class UnlabeledPolicy {
    Exclude,     // unlabeled documents contribute nothing
    AsCategory,  // each unlabeled document adds one count to kUnlabeledCategory
};

UnlabeledPolicy parse_unlabeled_policy(std::string_view s);
std::string_view to_string(UnlabeledPolicy p);

// Attribute dimensions known to a corpus, e.g. {"geography", "gender"}.
struct Schema {
    std::vector<std::string> dimensions;

    bool contains(std::string_view dim) const;
};

Schema load_schema(const std::filesystem::path& path);

struct Document {
    std::string doc_id;
    std::string title;
    std::string url;
    std::string text;
    // dimension -> labels; a missing or empty entry means unlabeled.
    std::map<std::string, std::vector<std::string>> attributes;
    std::optional<double> quality;

    const std::vector<std::string>& labels(const std::string& dimension) const;
};

struct QueryTopic {
    std::string topic_id;
    std::string title;
    std::vector<std::string> keywords;
    std::vector<std::string> relevant_docs;
};

struct Distribution {
    std::map<std::string, double> probs;
    std::size_t support_count = 0;
    UnlabeledPolicy policy = UnlabeledPolicy::Exclude;

    bool empty() const { return support_count == 0; }
};

// Immutable, validated document collection.
class Corpus {
public:
    Corpus(Schema schema, std::vector<Document> docs);

    const Schema& schema() const { return schema_; }
    std::span<const Document> documents() const { return docs_; }
    std::size_t size() const { return docs_.size(); }

    const Document* find(std::string_view doc_id) const;
    const Document& at(std::string_view doc_id) const;

private:
    Schema schema_;
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

// JSON-Lines, one document per line. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path, Schema schema);

// JSON-Lines topics. When `validate_against` is given, every relevant doc id
// must exist in it.
std::vector<QueryTopic> load_queries(const std::filesystem::path& path,
                                     const Corpus* validate_against = nullptr);

// Label-occurrence distribution over one dimension; a document carrying two
// labels counts twice.
Distribution attribute_distribution(std::span<const Document* const> docs,
                                    const std::string& dimension,
                                    const Schema& schema,
                                    UnlabeledPolicy policy = UnlabeledPolicy::Exclude);

}  // namespace bqr
