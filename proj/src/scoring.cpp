#include "bqr/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bqr/error.hpp"
#include "bqr/tokenizer.hpp"

namespace bqr {

DimensionKind parse_dimension_kind(std::string_view s) {
    if (s == "entropy" || s == "entropy-vs-original") return DimensionKind::Entropy;
    if (s == "signed-mean" || s == "signed") return DimensionKind::SignedMean;
    if (s == "relevance") return DimensionKind::Relevance;
    throw InvalidArgument("unknown dimension kind: " + std::string(s));
}

std::string_view to_string(DimensionKind k) {
    switch (k) {
        case DimensionKind::Entropy: return "entropy";
        case DimensionKind::SignedMean: return "signed-mean";
        case DimensionKind::Relevance: return "relevance";
    }
    return "?";
}

Orientation parse_orientation(std::string_view s) {
    if (s == "maximize" || s == "max") return Orientation::Maximize;
    if (s == "minimize" || s == "min") return Orientation::Minimize;
    if (s == "minimize-abs" || s == "min-abs") return Orientation::MinimizeAbs;
    throw InvalidArgument("unknown orientation: " + std::string(s));
}

std::string_view to_string(Orientation o) {
    switch (o) {
        case Orientation::Maximize: return "maximize";
        case Orientation::Minimize: return "minimize";
        case Orientation::MinimizeAbs: return "minimize-abs";
    }
    return "?";
}

void validate_dimensions(std::span<const DimensionSpec> dims) {
    std::size_t relevance = 0;
    std::set<std::string> names;
    for (const auto& d : dims) {
        if (d.kind == DimensionKind::Relevance) ++relevance;
        if (d.name.empty() || !names.insert(d.name).second)
            throw InvalidArgument("dimension names must be unique and non-empty: '" + d.name + "'");
    }
    if (relevance != 1)
        throw InvalidArgument("exactly one relevance dimension is required, got " +
                              std::to_string(relevance));
}

std::vector<DimensionSpec> default_dimensions(const Schema& schema) {
    std::vector<DimensionSpec> dims;
    for (const auto& d : schema.dimensions) dims.push_back(DimensionSpec::entropy(d));
    dims.push_back(DimensionSpec::relevance());
    return dims;
}

std::vector<double> ScoredQuery::values() const {
    std::vector<double> v;
    v.reserve(dim_scores.size());
    for (const auto& [name, value] : dim_scores) v.push_back(value);
    return v;
}

double ScoredQuery::score(std::string_view dimension) const {
    for (const auto& [name, value] : dim_scores) {
        if (name == dimension) return value;
    }
    throw InvalidArgument("query '" + query + "' has no score for dimension " + std::string(dimension));
}

BowVector bow_vector(const Document& doc) {
    BowVector v;
    for (auto& t : tokenize(doc.title + " " + doc.text)) ++v[std::move(t)];
    return v;
}

double cosine(const BowVector& a, const BowVector& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, c] : a) na += static_cast<double>(c) * c;
    for (const auto& [t, c] : b) nb += static_cast<double>(c) * c;
    if (na == 0.0 || nb == 0.0) return 0.0;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& [t, c] : small) {
        auto it = large.find(t);
        if (it != large.end()) dot += static_cast<double>(c) * it->second;
    }
    return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

namespace {

double directed_mean_max(std::span<const BowVector> from, std::span<const BowVector> to) {
    double sum = 0.0;
    for (const auto& a : from) {
        double best = 0.0;
        for (const auto& b : to) best = std::max(best, cosine(a, b));
        sum += best;
    }
    return sum / static_cast<double>(from.size());
}

}  // namespace

double bow_set_relevance(std::span<const BowVector> a, std::span<const BowVector> b) {
    if (a.empty() || b.empty()) return 0.0;
    const double ab = directed_mean_max(a, b);
    const double ba = directed_mean_max(b, a);
    if (ab + ba == 0.0) return 0.0;
    return std::clamp(2.0 * ab * ba / (ab + ba), 0.0, 1.0);
}

double doc_set_relevance(std::span<const Document* const> a, std::span<const Document* const> b) {
    std::vector<BowVector> va, vb;
    va.reserve(a.size());
    vb.reserve(b.size());
    for (const auto* d : a) va.push_back(bow_vector(*d));
    for (const auto* d : b) vb.push_back(bow_vector(*d));
    return bow_set_relevance(va, vb);
}

double jsd(const Distribution& p, const Distribution& q) {
    if (p.empty() || q.empty()) throw InvalidArgument("jsd: both distributions must be non-empty");

    // p * log2(p / m) with m = (p + q) / 2; zero when p is zero.
    auto term = [](double x, double y) { return x > 0.0 ? x * std::log2(2.0 * x / (x + y)) : 0.0; };

    double total = 0.0;
    bool overlap = false;
    auto ip = p.probs.begin();
    auto iq = q.probs.begin();
    // Sorted merge over the union support keeps the summation order
    // identical for jsd(p,q) and jsd(q,p).
    while (ip != p.probs.end() || iq != q.probs.end()) {
        double x = 0.0, y = 0.0;
        if (iq == q.probs.end() || (ip != p.probs.end() && ip->first < iq->first)) {
            x = (ip++)->second;
        } else if (ip == p.probs.end() || iq->first < ip->first) {
            y = (iq++)->second;
        } else {
            x = (ip++)->second;
            y = (iq++)->second;
        }
        if (x > 0.0 && y > 0.0) overlap = true;
        total += 0.5 * term(x, y) + 0.5 * term(y, x);
    }
    if (!overlap) return 1.0;
    return std::clamp(total, 0.0, 1.0);
}

double entropy_score(const ResultSet& candidate, const ResultSet& original,
                     const std::string& dimension, const Corpus& corpus, UnlabeledPolicy policy) {
    const auto& schema = corpus.schema();
    if (!schema.contains(dimension)) throw InvalidArgument("unknown dimension: " + dimension);
    const auto cand_docs = resolve(candidate, corpus);
    const auto orig_docs = resolve(original, corpus);
    const auto c = attribute_distribution(cand_docs, dimension, schema, policy);
    const auto o = attribute_distribution(orig_docs, dimension, schema, policy);
    if (c.empty() && o.empty()) return 0.0;
    if (c.empty() || o.empty()) return 1.0;
    return jsd(c, o);
}

SignedLabeling signed_labeling(const Corpus& corpus, const std::string& dimension) {
    if (!corpus.schema().contains(dimension)) throw InvalidArgument("unknown dimension: " + dimension);
    SignedLabeling out;
    for (const auto& doc : corpus.documents()) {
        const auto& labels = doc.labels(dimension);
        if (labels.empty()) continue;
        const auto& l = labels.front();
        if (l == "+1" || l == "1" || l == "+") {
            out.emplace(doc.doc_id, +1);
        } else if (l == "-1" || l == "-") {
            out.emplace(doc.doc_id, -1);
        }
    }
    return out;
}

double signed_bias(const ResultSet& results, const SignedLabeling& labeling) {
    if (results.empty()) throw InvalidArgument("signed bias of an empty result set is undefined");
    long sum = 0;
    for (const auto& hit : results.hits) {
        auto it = labeling.find(hit.doc_id);
        if (it == labeling.end())
            throw InvalidArgument("document '" + hit.doc_id + "' has no signed label");
        sum += it->second;
    }
    return static_cast<double>(sum) / static_cast<double>(results.size());
}

ScoredQuery score_results(ResultSet candidate, const ResultSet& original,
                          std::span<const DimensionSpec> dims, const ScoringContext& ctx) {
    validate_dimensions(dims);
    ScoredQuery sq;
    sq.query = candidate.query;
    sq.dim_scores.reserve(dims.size());
    for (const auto& d : dims) {
        double value = 0.0;
        switch (d.kind) {
            case DimensionKind::Entropy:
                value = entropy_score(candidate, original, d.name, ctx.corpus, ctx.policy);
                break;
            case DimensionKind::SignedMean: {
                SignedLabeling local;
                const SignedLabeling* labels = nullptr;
                if (ctx.labelings != nullptr) {
                    if (auto it = ctx.labelings->find(d.name); it != ctx.labelings->end())
                        labels = &it->second;
                }
                if (labels == nullptr) {
                    local = signed_labeling(ctx.corpus, d.name);
                    labels = &local;
                }
                value = signed_bias(candidate, *labels);
                break;
            }
            case DimensionKind::Relevance: {
                const auto a = resolve(candidate, ctx.corpus);
                const auto b = resolve(original, ctx.corpus);
                value = doc_set_relevance(a, b);
                break;
            }
        }
        sq.dim_scores.emplace_back(d.name, value);
    }
    sq.result_set = std::move(candidate);
    return sq;
}

ScoredQuery dim_scores(std::string_view candidate_query, const ResultSet& original,
                       std::span<const DimensionSpec> dims, const ScoringContext& ctx) {
    return score_results(ctx.index.search(candidate_query, ctx.n), original, dims, ctx);
}

}  // namespace bqr
