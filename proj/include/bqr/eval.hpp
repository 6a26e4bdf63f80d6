#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bqr/candidates.hpp"
#include "bqr/engine.hpp"

namespace bqr {

// Number of (q_dominating, q_dominated) pairs where the first dominates the
// second: how many of `dominated`'s queries `dominating`'s queries beat,
// counted once per dominating query.
std::size_t domination_score(std::span<const ScoredQuery> dominated,
                             std::span<const ScoredQuery> dominating,
                             std::span<const DimensionSpec> specs);

struct MatrixCell {
    std::string topic_id;
    Method method_a;  // dominating side
    Method method_b;  // dominated side
    std::optional<std::size_t> score;  // empty when either side is unavailable
    bool self() const { return method_a == method_b; }
};

struct MethodRun {
    std::string topic_id;
    Method method;
    std::optional<Recommendation> recommendation;
    std::string status;  // "ok", "inapplicable" or "failed"
    std::string detail;
};

struct DominationMatrix {
    std::vector<Method> methods;
    std::vector<std::string> topics;
    std::vector<MatrixCell> cells;  // topic-major, then method_a, then method_b
    std::map<std::pair<Method, Method>, std::size_t> totals;
    std::vector<MethodRun> runs;

    const MatrixCell& cell(const std::string& topic, Method a, Method b) const;
    std::size_t total(Method a, Method b) const;
};

// Fills every ordered method pair from per-(topic, method) recommendation
// sets. A missing set marks that topic's cells for the method as unavailable.
DominationMatrix build_matrix(
    const std::vector<std::string>& topics, const std::vector<Method>& methods,
    const std::map<std::pair<std::string, Method>, std::vector<ScoredQuery>>& recs,
    std::span<const DimensionSpec> specs);

// Runs the engine for every topic and method, then scores all method pairs.
// Per-topic failures are recorded in `runs` and do not stop the run.
DominationMatrix method_matrix(const std::vector<QueryTopic>& topics,
                               const std::vector<Method>& methods, const EngineConfig& config,
                               const Resources& resources);

// topic_id,method_a,method_b,score with one TOTAL row per ordered pair.
std::string to_csv(const DominationMatrix& m);

// Per-pair totals with a high/mid/low bucket over the cross-method cells.
std::string summary_csv(const DominationMatrix& m);

// query,dimension,value,on_front rows: the original (on_front = "original")
// followed by every scored candidate.
std::string scatter_csv(const Recommendation& rec);

// Shortest round-trip decimal rendering.
std::string format_double(double v);

}  // namespace bqr
