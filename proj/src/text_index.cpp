#include "bqr/text_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"

namespace bqr {

using nlohmann::json;

namespace {

constexpr int kIndexFormatVersion = 1;

}  // namespace

void IndexParams::validate() const {
    if (!(k1 > 0.0) || !std::isfinite(k1)) throw InvalidArgument("BM25 k1 must be > 0");
    if (!(b >= 0.0 && b <= 1.0)) throw InvalidArgument("BM25 b must lie in [0,1]");
}

Index Index::build(const Corpus& corpus, IndexParams params) {
    params.validate();
    if (corpus.size() == 0) throw InvalidArgument("cannot index an empty corpus");

    Index index;
    index.params_ = params;
    const auto docs = corpus.documents();
    index.doc_ids_.reserve(docs.size());
    index.doc_lengths_.reserve(docs.size());

    for (std::uint32_t ord = 0; ord < docs.size(); ++ord) {
        const auto& doc = docs[ord];
        auto tokens = tokenize(doc.title + " " + doc.text, params.lowercase);
        std::map<std::string, std::uint32_t> tf;
        for (auto& t : tokens) ++tf[std::move(t)];

        index.doc_ids_.push_back(doc.doc_id);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        index.total_length_ += tokens.size();
        for (const auto& [term, count] : tf) index.postings_[term].push_back({ord, count});
    }
    index.avgdl_ = static_cast<double>(index.total_length_) / static_cast<double>(docs.size());
    return index;
}

double Index::idf(const std::string& term) const {
    auto it = postings_.find(term);
    const double n = static_cast<double>(doc_ids_.size());
    const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

ResultSet Index::search(std::string_view query, std::size_t n) const {
    if (n == 0) throw InvalidArgument("search: n must be >= 1");
    ResultSet rs;
    rs.query = std::string(query);
    rs.n_requested = n;

    auto tokens = tokenize(query, params_.lowercase);
    // Repeated query terms count once.
    std::set<std::string> terms(tokens.begin(), tokens.end());

    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double w = idf(term);
        for (const auto& p : it->second) {
            const double tf = p.tf;
            const double norm =
                params_.k1 * (1.0 - params_.b + params_.b * doc_lengths_[p.doc] / avgdl_);
            acc[p.doc] += w * tf * (params_.k1 + 1.0) / (tf + norm);
        }
    }

    std::vector<std::pair<std::uint32_t, double>> scored(acc.begin(), acc.end());
    auto better = [this](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return doc_ids_[a.first] < doc_ids_[b.first];
    };
    const auto keep = std::min(n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);
    rs.hits.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
        rs.hits.push_back({doc_ids_[scored[i].first], scored[i].second});
    }
    return rs;
}

IndexStats Index::stats() const {
    return {doc_ids_.size(), postings_.size(), total_length_, avgdl_};
}

std::string Index::report() const {
    const auto s = stats();
    json j = {{"num_docs", s.num_docs},
              {"vocab_size", s.vocab_size},
              {"total_length", s.total_length},
              {"avg_doc_length", s.avg_doc_length},
              {"k1", params_.k1},
              {"b", params_.b}};
    return j.dump();
}

void Index::save(const std::filesystem::path& path) const {
    json j;
    j["format"] = "bqr-index";
    j["version"] = kIndexFormatVersion;
    j["params"] = {{"k1", params_.k1}, {"b", params_.b}, {"lowercase", params_.lowercase}};
    j["doc_ids"] = doc_ids_;
    j["doc_lengths"] = doc_lengths_;
    // Sorted by term so identical indexes produce identical files.
    std::vector<const std::string*> terms;
    terms.reserve(postings_.size());
    for (const auto& kv : postings_) terms.push_back(&kv.first);
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
    json postings = json::object();
    for (const auto* term : terms) {
        json list = json::array();
        for (const auto& p : postings_.at(*term)) list.push_back({p.doc, p.tf});
        postings[*term] = std::move(list);
    }
    j["postings"] = std::move(postings);

    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump() << '\n';
}

Index Index::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
        if (j.value("format", "") != "bqr-index") throw ParseError("not a bqr index file");
        if (j.at("version").get<int>() != kIndexFormatVersion)
            throw ParseError("unsupported index version " + j.at("version").dump());

        Index index;
        const auto& p = j.at("params");
        index.params_.k1 = p.at("k1").get<double>();
        index.params_.b = p.at("b").get<double>();
        index.params_.lowercase = p.at("lowercase").get<bool>();
        index.params_.validate();
        index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
        index.doc_lengths_ = j.at("doc_lengths").get<std::vector<std::uint32_t>>();
        if (index.doc_ids_.empty() || index.doc_ids_.size() != index.doc_lengths_.size())
            throw ParseError("inconsistent document tables");
        for (auto len : index.doc_lengths_) index.total_length_ += len;
        index.avgdl_ = static_cast<double>(index.total_length_) /
                       static_cast<double>(index.doc_ids_.size());
        for (const auto& [term, list] : j.at("postings").items()) {
            auto& dst = index.postings_[term];
            for (const auto& entry : list) {
                Posting posting{entry.at(0).get<std::uint32_t>(), entry.at(1).get<std::uint32_t>()};
                if (posting.doc >= index.doc_ids_.size() || posting.tf == 0)
                    throw ParseError("posting out of range for term '" + term + "'");
                dst.push_back(posting);
            }
        }
        return index;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<const Document*> resolve(const ResultSet& results, const Corpus& corpus) {
    std::vector<const Document*> docs;
    docs.reserve(results.hits.size());
    for (const auto& hit : results.hits) docs.push_back(&corpus.at(hit.doc_id));
    return docs;
}

}  // namespace bqr
