#include "bqr/eval.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "bqr/error.hpp"
#include "bqr/pareto.hpp"

namespace bqr {

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::size_t domination_score(std::span<const ScoredQuery> dominated,
                             std::span<const ScoredQuery> dominating,
                             std::span<const DimensionSpec> specs) {
    std::vector<std::vector<double>> lhs, rhs;
    for (const auto& q : dominated) lhs.push_back(canonical_scores(q, specs));
    for (const auto& q : dominating) rhs.push_back(canonical_scores(q, specs));
    std::size_t count = 0;
    for (const auto& b : rhs) {
        for (const auto& a : lhs) {
            if (dominates_canonical(b, a)) ++count;
        }
    }
    return count;
}

const MatrixCell& DominationMatrix::cell(const std::string& topic, Method a, Method b) const {
    for (const auto& c : cells) {
        if (c.topic_id == topic && c.method_a == a && c.method_b == b) return c;
    }
    throw InvalidArgument("no matrix cell for topic '" + topic + "'");
}

std::size_t DominationMatrix::total(Method a, Method b) const {
    auto it = totals.find({a, b});
    return it == totals.end() ? 0 : it->second;
}

DominationMatrix build_matrix(
    const std::vector<std::string>& topics, const std::vector<Method>& methods,
    const std::map<std::pair<std::string, Method>, std::vector<ScoredQuery>>& recs,
    std::span<const DimensionSpec> specs) {
    DominationMatrix m;
    m.methods = methods;
    m.topics = topics;
    for (auto a : methods) {
        for (auto b : methods) m.totals[{a, b}] = 0;
    }
    for (const auto& topic : topics) {
        for (auto a : methods) {
            for (auto b : methods) {
                MatrixCell cell{topic, a, b, std::nullopt};
                auto ia = recs.find({topic, a});
                auto ib = recs.find({topic, b});
                if (ia != recs.end() && ib != recs.end()) {
                    cell.score = domination_score(ib->second, ia->second, specs);
                    m.totals[{a, b}] += *cell.score;
                }
                m.cells.push_back(std::move(cell));
            }
        }
    }
    return m;
}

DominationMatrix method_matrix(const std::vector<QueryTopic>& topics,
                               const std::vector<Method>& methods, const EngineConfig& config,
                               const Resources& resources) {
    const auto dims = config.resolved_dims(resources.corpus.schema());
    std::vector<std::string> topic_ids;
    std::map<std::pair<std::string, Method>, std::vector<ScoredQuery>> recs;
    std::vector<MethodRun> runs;

    for (const auto& topic : topics) {
        topic_ids.push_back(topic.topic_id);
        for (auto method : methods) {
            MethodRun run{topic.topic_id, method, std::nullopt, "ok", {}};
            EngineConfig cfg = config;
            cfg.method = method;
            cfg.dims = dims;
            try {
                run.recommendation = recommend({topic.title, topic.keywords, topic.topic_id}, cfg, resources);
                recs[{topic.topic_id, method}] = run.recommendation->recs;
            } catch (const InapplicableMethod& e) {
                run.status = "inapplicable";
                run.detail = e.what();
            } catch (const Error& e) {
                run.status = "failed";
                run.detail = e.what();
            }
            runs.push_back(std::move(run));
        }
    }
    auto m = build_matrix(topic_ids, methods, recs, dims);
    m.runs = std::move(runs);
    return m;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string to_csv(const DominationMatrix& m) {
    std::ostringstream out;
    out << "topic_id,method_a,method_b,score\n";
    for (const auto& c : m.cells) {
        out << csv_field(c.topic_id) << ',' << to_string(c.method_a) << ',' << to_string(c.method_b) << ','
            << (c.score ? std::to_string(*c.score) : "NA") << '\n';
    }
    for (auto a : m.methods) {
        for (auto b : m.methods) {
            out << "TOTAL," << to_string(a) << ',' << to_string(b) << ',' << m.total(a, b) << '\n';
        }
    }
    return out.str();
}

std::string summary_csv(const DominationMatrix& m) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (auto a : m.methods) {
        for (auto b : m.methods) {
            if (a == b) continue;
            lo = std::min(lo, m.total(a, b));
            hi = std::max(hi, m.total(a, b));
        }
    }
    std::ostringstream out;
    out << "method_a,method_b,total,bucket\n";
    for (auto a : m.methods) {
        for (auto b : m.methods) {
            const auto t = m.total(a, b);
            std::string bucket;
            if (a == b) {
                bucket = "self";
            } else if (hi == lo) {
                bucket = "mid";
            } else if (t == hi) {
                bucket = "high";
            } else if (t == lo) {
                bucket = "low";
            } else {
                bucket = "mid";
            }
            out << to_string(a) << ',' << to_string(b) << ',' << t << ',' << bucket << '\n';
        }
    }
    return out.str();
}

std::string scatter_csv(const Recommendation& rec) {
    std::set<std::string> front;
    for (const auto& q : rec.recs) front.insert(q.query);
    std::ostringstream out;
    out << "query,dimension,value,on_front\n";
    auto emit = [&](const ScoredQuery& q, const char* flag) {
        for (const auto& [dim, value] : q.dim_scores) {
            out << csv_field(q.query) << ',' << csv_field(dim) << ',' << format_double(value) << ','
                << flag << '\n';
        }
    };
    emit(rec.original, "original");
    for (const auto& q : rec.candidates) emit(q, front.count(q.query) ? "true" : "false");
    return out.str();
}

}  // namespace bqr
