#include "bqr/pareto.hpp"

#include <algorithm>
#include <cmath>

#include "bqr/error.hpp"

namespace bqr {

OrientedVector::OrientedVector(std::vector<double> v, std::vector<Orientation> o)
    : values(std::move(v)), orientations(std::move(o)) {
    if (values.size() != orientations.size())
        throw InvalidArgument("oriented vector: values and orientations differ in length");
}

std::vector<double> OrientedVector::canonical() const {
    return canonicalize(values, orientations);
}

double canonicalize(double value, Orientation o) {
    switch (o) {
        case Orientation::Maximize: return value;
        case Orientation::Minimize: return -value;
        case Orientation::MinimizeAbs: return -std::abs(value);
    }
    return value;
}

std::vector<double> canonicalize(std::span<const double> values, std::span<const Orientation> o) {
    if (values.size() != o.size())
        throw InvalidArgument("canonicalize: values and orientations differ in length");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = canonicalize(values[i], o[i]);
    return out;
}

bool dominates_canonical(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("dominates: vectors differ in length");
    bool strictly = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strictly = true;
    }
    return strictly;
}

bool dominates(const OrientedVector& a, const OrientedVector& b) {
    if (a.values.size() != b.values.size()) throw InvalidArgument("dominates: vectors differ in length");
    if (a.orientations != b.orientations) throw InvalidArgument("dominates: orientations differ");
    return dominates_canonical(a.canonical(), b.canonical());
}

std::vector<std::size_t> pareto_front_indices(std::span<const std::vector<double>> points) {
    std::vector<std::size_t> front;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
            dominated = j != i && dominates_canonical(points[j], points[i]);
        }
        if (!dominated) front.push_back(i);
    }
    return front;
}

std::vector<Orientation> orientations_of(std::span<const DimensionSpec> specs) {
    std::vector<Orientation> o;
    o.reserve(specs.size());
    for (const auto& s : specs) o.push_back(s.orientation);
    return o;
}

std::vector<double> canonical_scores(const ScoredQuery& q, std::span<const DimensionSpec> specs) {
    if (q.dim_scores.size() != specs.size())
        throw InvalidArgument("query '" + q.query + "' has " + std::to_string(q.dim_scores.size()) +
                              " scores, layout has " + std::to_string(specs.size()));
    std::vector<double> out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (q.dim_scores[i].first != specs[i].name)
            throw InvalidArgument("query '" + q.query + "' score layout does not match at '" +
                                  specs[i].name + "'");
        out[i] = canonicalize(q.dim_scores[i].second, specs[i].orientation);
    }
    return out;
}

namespace {

std::vector<std::vector<double>> canonical_points(std::span<const ScoredQuery> candidates,
                                                  std::span<const DimensionSpec> specs) {
    std::vector<std::vector<double>> pts;
    pts.reserve(candidates.size());
    for (const auto& c : candidates) pts.push_back(canonical_scores(c, specs));
    return pts;
}

std::vector<ScoredQuery> select(std::span<const ScoredQuery> candidates,
                                const std::vector<std::size_t>& idx) {
    std::vector<ScoredQuery> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(candidates[i]);
    return out;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::vector<ScoredQuery> pareto_front(std::span<const ScoredQuery> candidates,
                                      std::span<const DimensionSpec> specs) {
    return select(candidates, pareto_front_indices(canonical_points(candidates, specs)));
}

std::vector<std::size_t> pseudo_pareto_front_indices(std::span<const ScoredQuery> candidates,
                                                     std::span<const DimensionSpec> specs,
                                                     const std::string& signed_dim,
                                                     double original_bias) {
    auto pos = std::find_if(specs.begin(), specs.end(),
                            [&](const DimensionSpec& s) { return s.name == signed_dim; });
    if (pos == specs.end()) throw InvalidArgument("unknown dimension: " + signed_dim);
    if (pos->kind != DimensionKind::SignedMean)
        throw InvalidArgument("pseudo-Pareto front needs a signed-mean dimension, '" + signed_dim +
                              "' is " + std::string(to_string(pos->kind)));
    const auto col = static_cast<std::size_t>(pos - specs.begin());

    std::vector<DimensionSpec> abs_specs(specs.begin(), specs.end());
    abs_specs[col].orientation = Orientation::MinimizeAbs;
    auto main = pareto_front_indices(canonical_points(candidates, abs_specs));

    const int s = sign_of(original_bias);
    std::vector<std::size_t> opposite;
    std::vector<std::vector<double>> opposite_pts;
    if (s != 0) {
        std::vector<DimensionSpec> opp_specs(specs.begin(), specs.end());
        opp_specs[col].orientation = s > 0 ? Orientation::Minimize : Orientation::Maximize;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (sign_of(candidates[i].dim_scores.at(col).second) == -s) {
                opposite.push_back(i);
                opposite_pts.push_back(canonical_scores(candidates[i], opp_specs));
            }
        }
    }
    std::vector<std::size_t> merged = main;
    for (auto k : pareto_front_indices(opposite_pts)) merged.push_back(opposite[k]);
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
}

std::vector<ScoredQuery> pseudo_pareto_front(std::span<const ScoredQuery> candidates,
                                             std::span<const DimensionSpec> specs,
                                             const std::string& signed_dim,
                                             double original_bias) {
    return select(candidates,
                  pseudo_pareto_front_indices(candidates, specs, signed_dim, original_bias));
}

}  // namespace bqr
