#include "doctest.h"

#include <algorithm>
#include <random>

#include "bqr/error.hpp"
#include "bqr/pareto.hpp"
#include "oracles.hpp"

using namespace bqr;

namespace {

constexpr auto Max = Orientation::Maximize;

ScoredQuery sq(std::string name, std::vector<std::pair<std::string, double>> scores) {
    ScoredQuery q;
    q.query = std::move(name);
    q.dim_scores = std::move(scores);
    return q;
}

std::vector<std::string> names(const std::vector<ScoredQuery>& qs) {
    std::vector<std::string> out;
    for (auto& q : qs) out.push_back(q.query);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_SUITE("pareto") {

TEST_CASE("dominance") {
    OrientedVector a({0.5, 0.5}, {Max, Max}), b({0.4, 0.4}, {Max, Max}), c({0.9, 0.1}, {Max, Max});
    CHECK(dominates(a, b));
    CHECK_FALSE(dominates(b, a));
    CHECK_FALSE(dominates(a, a));
    CHECK_FALSE(dominates(c, a));
    CHECK_FALSE(dominates(a, c));
    OrientedVector lo({0.1}, {Orientation::Minimize}), hi({0.3}, {Orientation::Minimize});
    CHECK(dominates(lo, hi));
    OrientedVector s1({-0.1}, {Orientation::MinimizeAbs}), s2({0.4}, {Orientation::MinimizeAbs});
    CHECK(dominates(s1, s2));
    CHECK_THROWS_AS(dominates(a, OrientedVector({1.0}, {Max})), InvalidArgument);
    CHECK_THROWS_AS(dominates(a, OrientedVector({1.0, 1.0}, {Max, Orientation::Minimize})), InvalidArgument);
}

TEST_CASE("front of a small set") {
    std::vector<DimensionSpec> specs{DimensionSpec::entropy("g"), DimensionSpec::entropy("h"),
                                     DimensionSpec::relevance()};
    std::vector<ScoredQuery> qs{sq("a", {{"g", 0.9}, {"h", 0.1}, {"relevance", 0.5}}),
                                sq("b", {{"g", 0.5}, {"h", 0.5}, {"relevance", 0.5}}),
                                sq("c", {{"g", 0.4}, {"h", 0.4}, {"relevance", 0.4}})};
    CHECK(names(pareto_front(qs, specs)) == std::vector<std::string>{"a", "b"});
    CHECK(names(pareto_front(std::span(qs).first(1), specs)) == std::vector<std::string>{"a"});
    std::vector<ScoredQuery> same{qs[1], qs[1]};
    same[1].query = "b2";
    CHECK(pareto_front(same, specs).size() == 2);
    CHECK(pareto_front(std::span<const ScoredQuery>{}, specs).empty());
    std::vector<ScoredQuery> wrong{sq("x", {{"relevance", 0.5}, {"g", 0.1}, {"h", 0.1}})};
    CHECK_THROWS_AS(pareto_front(wrong, specs), InvalidArgument);
}

TEST_CASE("front equals the brute-force reference on random points") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> grid(0, 9);  // coarse grid so ties happen
    for (int t = 0; t < 50; ++t) {
        std::vector<std::vector<double>> pts(60, std::vector<double>(3));
        for (auto& p : pts)
            for (auto& x : p) x = grid(rng) / 10.0;
        auto got = pareto_front_indices(pts);
        std::sort(got.begin(), got.end());
        CHECK(got == oracle::front(pts));
    }
}

TEST_CASE("pseudo front keeps opposite-sign alternatives") {
    std::vector<DimensionSpec> specs{DimensionSpec::signed_mean("lean"), DimensionSpec::relevance()};
    std::vector<ScoredQuery> qs{sq("mild", {{"lean", 0.2}, {"relevance", 0.3}}),
                                sq("flip", {{"lean", -0.9}, {"relevance", 0.9}})};
    CHECK(names(pareto_front(qs, specs)) == std::vector<std::string>{"flip", "mild"});
    CHECK(names(pseudo_pareto_front(qs, specs, "lean", 0.8)) == std::vector<std::string>{"flip", "mild"});

    // Here the plain front drops "flip" but the pseudo front keeps it.
    std::vector<ScoredQuery> qs2{sq("mild", {{"lean", 0.1}, {"relevance", 0.9}}),
                                 sq("flip", {{"lean", -0.6}, {"relevance", 0.5}})};
    CHECK(names(pareto_front(qs2, specs)) == std::vector<std::string>{"mild"});
    CHECK(names(pseudo_pareto_front(qs2, specs, "lean", 0.8)) == std::vector<std::string>{"flip", "mild"});

    std::vector<ScoredQuery> same_sign{sq("a", {{"lean", 0.5}, {"relevance", 0.3}}),
                                       sq("b", {{"lean", 0.3}, {"relevance", 0.2}})};
    CHECK(names(pseudo_pareto_front(same_sign, specs, "lean", 0.8)) == names(pareto_front(same_sign, specs)));
    std::vector<ScoredQuery> ident{sq("a", {{"lean", 0.5}, {"relevance", 0.3}}),
                                   sq("b", {{"lean", 0.5}, {"relevance", 0.3}})};
    CHECK(pseudo_pareto_front(ident, specs, "lean", 0.8).size() == 2);
    CHECK_THROWS_AS(pseudo_pareto_front(qs, specs, "relevance", 0.8), InvalidArgument);
}

}
