#pragma once

#include <span>
#include <string>
#include <vector>

#include "bqr/scoring.hpp"

namespace bqr {

// Score values with per-coordinate orientation. Comparisons use canonical(),
// where every coordinate is "larger is better".
struct OrientedVector {
    std::vector<double> values;
    std::vector<Orientation> orientations;

    OrientedVector(std::vector<double> v, std::vector<Orientation> o);

    std::vector<double> canonical() const;
};

double canonicalize(double value, Orientation o);
std::vector<double> canonicalize(std::span<const double> values, std::span<const Orientation> o);

// a >= b everywhere and a > b somewhere, in canonical space.
bool dominates(const OrientedVector& a, const OrientedVector& b);
bool dominates_canonical(std::span<const double> a, std::span<const double> b);

// Indices of non-dominated points, ascending.
std::vector<std::size_t> pareto_front_indices(std::span<const std::vector<double>> canonical_points);

std::vector<Orientation> orientations_of(std::span<const DimensionSpec> specs);
std::vector<double> canonical_scores(const ScoredQuery& q, std::span<const DimensionSpec> specs);

// Non-dominated candidates in input order; equal score vectors are all kept.
std::vector<ScoredQuery> pareto_front(std::span<const ScoredQuery> candidates,
                                      std::span<const DimensionSpec> specs);

// Union of the |bias|-minimizing front and the non-dominated subset of
// candidates whose bias has the opposite sign of the original query's
// (larger opposite bias counts as better there).
std::vector<ScoredQuery> pseudo_pareto_front(std::span<const ScoredQuery> candidates,
                                             std::span<const DimensionSpec> specs,
                                             const std::string& signed_dim,
                                             double original_bias);

std::vector<std::size_t> pseudo_pareto_front_indices(std::span<const ScoredQuery> candidates,
                                                     std::span<const DimensionSpec> specs,
                                                     const std::string& signed_dim,
                                                     double original_bias);

}  // namespace bqr
