#include "bqr/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"

namespace bqr {

EmbeddingStore::EmbeddingStore(std::size_t dimension, std::vector<std::string> words,
                               std::vector<double> flat_vectors)
    : dimension_(dimension), words_(std::move(words)), data_(std::move(flat_vectors)) {
    if (dimension_ == 0) throw InvalidArgument("embedding dimension must be >= 1");
    if (data_.size() != words_.size() * dimension_)
        throw InvalidArgument("embedding data size does not match vocabulary x dimension");
    index_.reserve(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (!index_.emplace(words_[i], i).second)
            throw InvalidArgument("duplicate embedding word: " + words_[i]);
    }
}

bool EmbeddingStore::contains(std::string_view word) const {
    return index_.count(std::string(word)) != 0;
}

std::span<const double> EmbeddingStore::vector(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return {};
    return vector(it->second);
}

std::span<const double> EmbeddingStore::vector(std::size_t i) const {
    return std::span<const double>(data_).subspan(i * dimension_, dimension_);
}

namespace {

bool parse_double(std::string_view s, double& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

EmbeddingStore load_vectors(const std::filesystem::path& path,
                            std::optional<std::size_t> expected_dim) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    std::optional<std::size_t> dim = expected_dim;
    std::vector<std::string> words;
    std::vector<double> data;
    std::unordered_map<std::string, std::size_t> seen;
    std::size_t skipped = 0;
    std::size_t first_arity = 0;

    std::string line;
    std::vector<std::string_view> fields;
    std::vector<double> row;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        fields.clear();
        std::string_view sv(line);
        std::size_t pos = 0;
        while (pos < sv.size()) {
            while (pos < sv.size() && std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < sv.size() && !std::isspace(static_cast<unsigned char>(sv[pos]))) ++pos;
            if (pos > start) fields.push_back(sv.substr(start, pos - start));
        }
        if (fields.size() < 2) {
            ++skipped;
            continue;
        }
        const std::size_t arity = fields.size() - 1;
        if (!dim) {
            dim = arity;
        }
        if (arity != *dim) {
            if (first_arity == 0) first_arity = arity;
            ++skipped;
            continue;
        }
        row.assign(arity, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < arity && ok; ++i) ok = parse_double(fields[i + 1], row[i]);
        auto word = to_lower(fields[0]);
        if (!ok || !seen.emplace(word, words.size()).second) {
            ++skipped;
            continue;
        }
        words.push_back(std::move(word));
        data.insert(data.end(), row.begin(), row.end());
    }

    if (words.empty()) {
        if (expected_dim && first_arity != 0) {
            throw InvalidArgument(path.string() + ": vectors have dimension " +
                                  std::to_string(first_arity) + ", expected " +
                                  std::to_string(*expected_dim));
        }
        throw ParseError(path.string() + ": no valid embedding lines");
    }
    EmbeddingStore store(*dim, std::move(words), std::move(data));
    store.skipped_lines = skipped;
    return store;
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size())
        throw InvalidArgument("cosine: length mismatch (" + std::to_string(u.size()) + " vs " +
                              std::to_string(v.size()) + ")");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return std::clamp(dot / std::sqrt(nu * nv), -1.0, 1.0);
}

std::vector<Neighbor> nearest_words(const EmbeddingStore& store, std::string_view query,
                                    std::size_t k, const std::set<std::string>& exclude) {
    if (k == 0) return {};
    const auto tokens = tokenize(query);
    std::vector<double> centroid(store.dimension(), 0.0);
    std::size_t used = 0;
    for (const auto& t : tokens) {
        auto v = store.vector(t);
        if (v.empty()) continue;
        for (std::size_t i = 0; i < v.size(); ++i) centroid[i] += v[i];
        ++used;
    }
    if (used == 0) throw OutOfVocabulary("no token of query '" + std::string(query) +
                                         "' is in the embedding vocabulary");
    for (auto& x : centroid) x /= static_cast<double>(used);

    const std::set<std::string> own(tokens.begin(), tokens.end());
    std::vector<Neighbor> scored;
    scored.reserve(store.size());
    const auto words = store.words();
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (own.count(words[i]) || exclude.count(words[i])) continue;
        scored.emplace_back(words[i], cosine(centroid, store.vector(i)));
    }
    auto better = [](const Neighbor& a, const Neighbor& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    };
    const auto keep = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                      scored.end(), better);
    scored.resize(keep);
    return scored;
}

}  // namespace bqr
