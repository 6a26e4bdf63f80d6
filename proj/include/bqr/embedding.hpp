#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bqr {

// Word vectors in GloVe text layout. Immutable after load.
class EmbeddingStore {
public:
    EmbeddingStore(std::size_t dimension, std::vector<std::string> words,
                   std::vector<double> flat_vectors);

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return words_.size(); }
    std::span<const std::string> words() const { return words_; }

    bool contains(std::string_view word) const;
    // Empty span when the word is not in the vocabulary.
    std::span<const double> vector(std::string_view word) const;
    std::span<const double> vector(std::size_t i) const;

    // Lines rejected at load time (wrong arity, bad number, duplicate word).
    std::size_t skipped_lines = 0;

private:
    std::size_t dimension_;
    std::vector<std::string> words_;
    std::vector<double> data_;
    std::unordered_map<std::string, std::size_t> index_;
};

// "word v1 ... vd" per line. The dimension is taken from expected_dim or,
// when absent, from the first well-formed line.
EmbeddingStore load_vectors(const std::filesystem::path& path,
                            std::optional<std::size_t> expected_dim = std::nullopt);

// dot(u,v) / (|u| |v|); 0 when either vector is all zeros.
double cosine(std::span<const double> u, std::span<const double> v);

using Neighbor = std::pair<std::string, double>;

// Top-k vocabulary words by cosine to the mean vector of the query's
// in-vocabulary tokens. Query tokens and `exclude` are never returned.
// Ties are broken lexicographically.
std::vector<Neighbor> nearest_words(const EmbeddingStore& store, std::string_view query,
                                    std::size_t k, const std::set<std::string>& exclude = {});

}  // namespace bqr
