#include "bqr/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"

namespace bqr {

using nlohmann::json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return in;
}

std::string string_field(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return {};
    if (!it->is_string()) throw InvalidArgument(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::string> string_list(const json& value, const char* key) {
    std::vector<std::string> out;
    if (value.is_null()) return out;
    if (value.is_string()) {
        out.push_back(value.get<std::string>());
        return out;
    }
    if (!value.is_array()) throw InvalidArgument(std::string("field '") + key + "' must be a list of strings");
    for (const auto& v : value) {
        if (!v.is_string()) throw InvalidArgument(std::string("field '") + key + "' must be a list of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

Document parse_document(const json& obj, const Schema& schema) {
    if (!obj.is_object()) throw InvalidArgument("document must be a JSON object");
    Document doc;
    doc.doc_id = string_field(obj, "doc_id");
    if (doc.doc_id.empty()) throw InvalidArgument("missing or empty doc_id");
    doc.title = string_field(obj, "title");
    doc.url = string_field(obj, "url");
    doc.text = string_field(obj, "text");

    for (const auto& dim : schema.dimensions) doc.attributes[dim];
    if (auto it = obj.find("attributes"); it != obj.end() && !it->is_null()) {
        if (!it->is_object()) throw InvalidArgument("'attributes' must be an object");
        for (const auto& [dim, labels] : it->items()) {
            // Columns outside the schema are not scored and are dropped.
            if (!schema.contains(dim)) continue;
            auto list = string_list(labels, "attributes");
            std::erase_if(list, [](const std::string& s) { return s.empty(); });
            doc.attributes[dim] = std::move(list);
        }
    }

    if (auto it = obj.find("quality"); it != obj.end() && !it->is_null()) {
        if (!it->is_number()) throw InvalidArgument("'quality' must be a number");
        double q = it->get<double>();
        if (q < 0.0 || q > 1.0) throw InvalidArgument("'quality' must lie in [0,1]");
        doc.quality = q;
    }
    return doc;
}

}  // namespace

UnlabeledPolicy parse_unlabeled_policy(std::string_view s) {
    if (s == "exclude" || s == "exclude-unlabeled") return UnlabeledPolicy::Exclude;
    if (s == "category" || s == "unlabeled-as-category") return UnlabeledPolicy::AsCategory;
    throw InvalidArgument("unknown unlabeled policy: " + std::string(s));
}

std::string_view to_string(UnlabeledPolicy p) {
    return p == UnlabeledPolicy::Exclude ? "exclude" : "category";
}

bool Schema::contains(std::string_view dim) const {
    return std::find(dimensions.begin(), dimensions.end(), dim) != dimensions.end();
}

Schema load_schema(const std::filesystem::path& path) {
    auto in = open_input(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    const json* dims = &j;
    if (j.is_object()) {
        auto it = j.find("dimensions");
        if (it == j.end()) throw ParseError(path.string() + ": missing 'dimensions'");
        dims = &*it;
    }
    Schema schema;
    schema.dimensions = string_list(*dims, "dimensions");
    std::set<std::string> seen;
    for (const auto& d : schema.dimensions) {
        if (d.empty() || !seen.insert(d).second)
            throw InvalidArgument("schema dimensions must be unique and non-empty");
    }
    return schema;
}

const std::vector<std::string>& Document::labels(const std::string& dimension) const {
    static const std::vector<std::string> kNone;
    auto it = attributes.find(dimension);
    return it == attributes.end() ? kNone : it->second;
}

Corpus::Corpus(Schema schema, std::vector<Document> docs)
    : schema_(std::move(schema)), docs_(std::move(docs)) {
    by_id_.reserve(docs_.size());
    for (std::size_t i = 0; i < docs_.size(); ++i) {
        if (docs_[i].doc_id.empty()) throw InvalidArgument("document with empty doc_id");
        if (!by_id_.emplace(docs_[i].doc_id, i).second)
            throw InvalidArgument("duplicate doc_id: " + docs_[i].doc_id);
    }
}

const Document* Corpus::find(std::string_view doc_id) const {
    auto it = by_id_.find(std::string(doc_id));
    return it == by_id_.end() ? nullptr : &docs_[it->second];
}

const Document& Corpus::at(std::string_view doc_id) const {
    if (const auto* d = find(doc_id)) return *d;
    throw InvalidArgument("unknown doc_id: " + std::string(doc_id));
}

Corpus load_corpus(const std::filesystem::path& path, Schema schema) {
    auto in = open_input(path);
    std::vector<Document> docs;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(line_no);
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": malformed JSON: " + e.what(), line);
        }
        Document doc;
        try {
            doc = parse_document(obj, schema);
        } catch (const InvalidArgument& e) {
            throw ParseError(where + ": " + e.what(), line);
        }
        if (!seen.insert(doc.doc_id).second)
            throw InvalidArgument(where + ": duplicate doc_id: " + doc.doc_id);
        docs.push_back(std::move(doc));
    }
    return Corpus(std::move(schema), std::move(docs));
}

std::vector<QueryTopic> load_queries(const std::filesystem::path& path,
                                     const Corpus* validate_against) {
    auto in = open_input(path);
    std::vector<QueryTopic> topics;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto where = path.string() + ":" + std::to_string(line_no);
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": malformed JSON: " + e.what(), line);
        }
        if (!obj.is_object()) throw ParseError(where + ": topic must be a JSON object", line);

        QueryTopic t;
        if (auto it = obj.find("id"); it != obj.end()) {
            t.topic_id = it->is_string() ? it->get<std::string>() : it->dump();
        } else if (auto it2 = obj.find("topic_id"); it2 != obj.end()) {
            t.topic_id = it2->is_string() ? it2->get<std::string>() : it2->dump();
        }
        t.title = trim(string_field(obj, "title"));
        if (t.title.empty())
            throw ParseError(where + ": topic '" + t.topic_id + "' has no title", line);
        if (auto it = obj.find("keywords"); it != obj.end()) {
            for (auto& kw : string_list(*it, "keywords")) {
                auto norm = to_lower(trim(kw));
                if (!norm.empty()) t.keywords.push_back(std::move(norm));
            }
        }
        if (auto it = obj.find("relevant_docs"); it != obj.end()) {
            t.relevant_docs = string_list(*it, "relevant_docs");
        }
        if (validate_against != nullptr) {
            for (const auto& id : t.relevant_docs) {
                if (validate_against->find(id) == nullptr)
                    throw InvalidArgument(where + ": topic '" + t.topic_id +
                                          "' references unknown doc_id: " + id);
            }
        }
        topics.push_back(std::move(t));
    }
    return topics;
}

Distribution attribute_distribution(std::span<const Document* const> docs,
                                    const std::string& dimension,
                                    const Schema& schema,
                                    UnlabeledPolicy policy) {
    if (!schema.contains(dimension)) throw InvalidArgument("unknown dimension: " + dimension);

    std::map<std::string, std::size_t> counts;
    std::size_t total = 0;
    for (const Document* doc : docs) {
        const auto& labels = doc->labels(dimension);
        if (labels.empty()) {
            if (policy == UnlabeledPolicy::AsCategory) {
                ++counts[std::string(kUnlabeledCategory)];
                ++total;
            }
            continue;
        }
        for (const auto& label : labels) {
            ++counts[label];
            ++total;
        }
    }

    Distribution dist;
    dist.policy = policy;
    dist.support_count = total;
    for (const auto& [label, count] : counts) {
        dist.probs[label] = static_cast<double>(count) / static_cast<double>(total);
    }
    return dist;
}

}  // namespace bqr
