#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bqr/corpus.hpp"
#include "bqr/text_index.hpp"

namespace bqr {

using BowVector = std::map<std::string, int>;

enum class DimensionKind {
    Entropy,     // JSD between candidate and original attribute distributions
    SignedMean,  // mean of +1/-1 document labels
    Relevance,   // set-level cosine relevance to the original results
};

enum class Orientation {
    Maximize,
    Minimize,
    MinimizeAbs,  // smaller |value| is better
};

DimensionKind parse_dimension_kind(std::string_view s);
std::string_view to_string(DimensionKind k);
Orientation parse_orientation(std::string_view s);
std::string_view to_string(Orientation o);

struct DimensionSpec {
    std::string name;  // attribute dimension, or "relevance"
    DimensionKind kind = DimensionKind::Entropy;
    Orientation orientation = Orientation::Maximize;

    static DimensionSpec entropy(std::string name) {
        return {std::move(name), DimensionKind::Entropy, Orientation::Maximize};
    }
    static DimensionSpec signed_mean(std::string name) {
        return {std::move(name), DimensionKind::SignedMean, Orientation::MinimizeAbs};
    }
    static DimensionSpec relevance() {
        return {"relevance", DimensionKind::Relevance, Orientation::Maximize};
    }

    bool operator==(const DimensionSpec&) const = default;
};

// Throws unless exactly one relevance spec is present and names are unique.
void validate_dimensions(std::span<const DimensionSpec> dims);

// One entropy dimension per schema dimension, then relevance.
std::vector<DimensionSpec> default_dimensions(const Schema& schema);

struct ScoredQuery {
    std::string query;
    ResultSet result_set;
    // Same order as the engine's DimensionSpec list.
    std::vector<std::pair<std::string, double>> dim_scores;

    std::vector<double> values() const;
    double score(std::string_view dimension) const;
};

BowVector bow_vector(const Document& doc);

double cosine(const BowVector& a, const BowVector& b);

// Harmonic mean of the two directed mean-of-max cosine similarities.
double doc_set_relevance(std::span<const Document* const> a, std::span<const Document* const> b);
double bow_set_relevance(std::span<const BowVector> a, std::span<const BowVector> b);

// Jensen-Shannon divergence with base-2 logarithms; within [0,1].
double jsd(const Distribution& p, const Distribution& q);

// JSD between the dimension's distribution over the candidate's and the
// original's documents. Both empty gives 0, exactly one empty gives 1.
double entropy_score(const ResultSet& candidate, const ResultSet& original,
                     const std::string& dimension, const Corpus& corpus,
                     UnlabeledPolicy policy = UnlabeledPolicy::Exclude);

using SignedLabeling = std::map<std::string, int, std::less<>>;

// doc_id -> +1/-1 from the corpus labels for `dimension` ("+1", "1", "-1",
// "+", "-"). Documents without a usable label are left out.
SignedLabeling signed_labeling(const Corpus& corpus, const std::string& dimension);

double signed_bias(const ResultSet& results, const SignedLabeling& labeling);

struct ScoringContext {
    const Index& index;
    const Corpus& corpus;
    std::size_t n = 20;
    UnlabeledPolicy policy = UnlabeledPolicy::Exclude;
    // Signed labelings per signed-mean dimension, filled lazily by callers.
    const std::map<std::string, SignedLabeling>* labelings = nullptr;
};

// Search the candidate and score it in the order of `dims`.
ScoredQuery dim_scores(std::string_view candidate_query, const ResultSet& original,
                       std::span<const DimensionSpec> dims, const ScoringContext& ctx);

// Score an already retrieved result set.
ScoredQuery score_results(ResultSet candidate, const ResultSet& original,
                          std::span<const DimensionSpec> dims, const ScoringContext& ctx);

}  // namespace bqr
