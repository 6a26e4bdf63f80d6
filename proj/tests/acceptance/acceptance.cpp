// Acceptance gate: one PASS/FAIL line per primary criterion.
// Reference values come from tests/oracles.hpp or hand evaluation, never
// from the library under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "bqr/api.hpp"
#include "bqr/error.hpp"
#include "bqr/eval.hpp"
#include "bqr/pareto.hpp"
#include "bqr/tokenizer.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bqr;
using bqr::testing::doc;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (budget_s > 0) {
        out.require(secs < budget_s, "runtime " + std::to_string(secs) + "s over budget");
    }
    if (!out.ok) ++failures;
    std::printf("%s  %-28s %8.3fs%s%s\n", out.ok ? "PASS" : "FAIL", name, secs, out.ok ? "" : "  ",
                out.detail.c_str());
    std::fflush(stdout);
}

std::string str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ResultSet result_set(const std::vector<std::string>& ids) {
    ResultSet rs;
    for (auto& id : ids) rs.hits.push_back({id, 1.0});
    rs.n_requested = ids.size();
    return rs;
}

// Deterministic stand-in for a chat model: ten queries built from the
// prompt's topic and keywords, varied by the prompt hash.
class SyntheticLlm final : public LlmProvider {
public:
    std::string complete(const std::string& prompt) override {
        std::string topic;
        std::vector<std::string> kw;
        std::istringstream in(prompt);
        for (std::string line; std::getline(in, line);) {
            if (line.rfind("Topic: ", 0) == 0) topic = line.substr(7);
            if (line.rfind("Keywords: ", 0) == 0) {
                std::string rest = line.substr(10), item;
                std::istringstream ks(rest);
                while (std::getline(ks, item, ',')) kw.push_back(trim(item));
            }
        }
        std::mt19937_64 rng(std::stoull(prompt_hash(prompt), nullptr, 16));
        std::string out = "Sure, here are some queries:\n";
        for (int i = 1; i <= 10 && !kw.empty(); ++i) {
            std::string q = rng() % 2 ? topic + " " : "";
            q += kw[rng() % kw.size()];
            if (rng() % 2) q += " " + kw[rng() % kw.size()];
            out += std::to_string(i) + ". " + q + "\n";
        }
        return out;
    }
};

struct Workspace {
    Corpus corpus;
    Index index;
    EmbeddingStore store;
    std::vector<QueryTopic> topics;
};

Workspace load_synthetic() {
    auto dir = bqr::testing::data_dir();
    auto corpus = load_corpus(dir / "corpus.jsonl", load_schema(dir / "schema.json"));
    auto index = Index::build(corpus);
    return {std::move(corpus), std::move(index), load_vectors(dir / "embeddings.txt"),
            load_queries(dir / "topics.jsonl")};
}

// index -> save/load -> recommend with every method -> evaluate, serialized.
std::string full_pipeline() {
    auto dir = bqr::testing::data_dir();
    auto corpus = load_corpus(dir / "corpus.jsonl", load_schema(dir / "schema.json"));
    bqr::testing::TempFile saved("", ".json");
    Index::build(corpus).save(saved.path());
    auto index = Index::load(saved.path());
    auto store = load_vectors(dir / "embeddings.txt");
    auto replay = ReplayProvider::from_file(dir / "fixtures.json");
    auto topics = load_queries(dir / "topics.jsonl", &corpus);
    Resources res{corpus, index, &store, &replay};

    std::string out = index.report() + "\n";
    EngineConfig cfg;
    for (auto m : {Method::Embedding, Method::LlmSimilar, Method::LlmKeywords}) {
        cfg.method = m;
        for (auto& t : topics) {
            if (m == Method::LlmKeywords && t.keywords.empty()) continue;
            auto rec = recommend({t.title, t.keywords, t.topic_id}, cfg, res);
            out += recommend_response(rec, corpus, cfg.policy).dump() + "\n";
            out += scatter_csv(rec);
        }
    }
    auto matrix = method_matrix(topics, {Method::Embedding, Method::LlmSimilar, Method::LlmKeywords}, cfg, res);
    out += to_csv(matrix) + summary_csv(matrix) + matrix_json(matrix).dump() + "\n";
    return out;
}

}  // namespace

int main() {
    std::puts("bqr acceptance suite");

    criterion("self-relevance", 1.0, [](Outcome& o) {
        auto ws = load_synthetic();
        std::mt19937 rng(1);
        auto words = ws.store.words();
        int checked = 0;
        for (int t = 0; t < 200; ++t) {
            std::string q = std::string(words[rng() % words.size()]) + " " + std::string(words[rng() % words.size()]);
            auto rs = ws.index.search(q, 1 + rng() % 20);
            if (rs.empty()) continue;
            ++checked;
            auto docs = resolve(rs, ws.corpus);
            double rel = doc_set_relevance(docs, docs);
            o.require(std::abs(rel - 1.0) <= 1e-9, "relevance(X,X) = " + str(rel) + " for '" + q + "'");
            for (auto& dim : ws.corpus.schema().dimensions) {
                for (auto pol : {UnlabeledPolicy::Exclude, UnlabeledPolicy::AsCategory}) {
                    double e = entropy_score(rs, rs, dim, ws.corpus, pol);
                    o.require(std::abs(e) <= 1e-9, "entropy(X,X) = " + str(e) + " on " + dim);
                }
            }
        }
        o.require(checked >= 100, "too few non-empty result sets: " + std::to_string(checked));
    });

    criterion("jsd-suite", 5.0, [](Outcome& o) {
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        auto random_dist = [&](int labels, double keep) {
            Distribution d;
            double total = 0;
            for (int i = 0; i < labels; ++i) {
                if (u(rng) < keep) total += d.probs["L" + std::to_string(i)] = u(rng) + 1e-6;
            }
            if (d.probs.empty()) total += d.probs["L0"] = 1.0;
            for (auto& [k, v] : d.probs) v /= total;
            d.support_count = d.probs.size();
            return d;
        };
        for (int t = 0; t < 1000; ++t) {
            auto p = random_dist(2 + static_cast<int>(rng() % 12), 0.6);
            auto q = random_dist(2 + static_cast<int>(rng() % 12), 0.6);
            double pq = jsd(p, q), qp = jsd(q, p);
            o.require(std::abs(pq - qp) < 1e-12, "asymmetric: " + str(pq) + " vs " + str(qp));
            o.require(pq >= 0.0 && pq <= 1.0, "out of range: " + str(pq));
            o.require(jsd(p, p) == 0.0, "JSD(P,P) = " + str(jsd(p, p)));
            o.require(std::abs(pq - oracle::jsd(p.probs, q.probs)) < 1e-12, "differs from reference");
            // Same shape on renamed labels: disjoint supports.
            Distribution r;
            for (auto& [k, v] : q.probs) r.probs["other-" + k] = v;
            r.support_count = r.probs.size();
            o.require(jsd(p, r) == 1.0, "disjoint supports gave " + str(jsd(p, r)));
        }
    });

    criterion("disjoint-geography-e2e", 5.0, [](Outcome& o) {
        std::vector<Document> docs;
        for (int i = 0; i < 20; ++i) {
            std::string filler = i % 2 ? " valley" : " coast";
            docs.push_back(doc("n" + std::to_string(i), "north" + filler + " town", {{"geography", {"Northern Europe"}}}));
            docs.push_back(doc("s" + std::to_string(i), "south" + filler + " town", {{"geography", {"South America"}}}));
        }
        Corpus c(Schema{{"geography"}}, docs);
        auto idx = Index::build(c);
        EmbeddingStore store(2, {"north", "south"}, {1.0, 0.0, 0.9, 0.3});
        EngineConfig cfg;
        cfg.method = Method::Embedding;
        cfg.n = 20;
        auto rec = recommend({"north", {}, ""}, cfg, {c, idx, &store, nullptr});
        o.require(rec.original.result_set.size() == 20, "original top-20 has " +
                                                            std::to_string(rec.original.result_set.size()));
        const ScoredQuery* south = nullptr;
        for (auto& cand : rec.candidates)
            if (cand.query == "south") south = &cand;
        o.require(south != nullptr, "candidate 'south' was not scored");
        if (!south) return;
        for (auto& h : south->result_set.hits) o.require(h.doc_id[0] == 's', "mixed result " + h.doc_id);
        double g = south->score("geography");
        o.require(std::abs(g - 1.0) <= 1e-9, "geography entropy = " + str(g));
    });

    criterion("pareto-oracle", 10.0, [](Outcome& o) {
        std::mt19937 rng(4);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::uniform_int_distribution<int> grid(0, 6);
        const std::vector<DimensionSpec> specs{DimensionSpec::entropy("a"), DimensionSpec::entropy("b"),
                                               DimensionSpec::relevance()};
        for (int inst = 0; inst < 100; ++inst) {
            const bool coarse = inst % 2 == 0;  // half the instances force ties
            std::vector<ScoredQuery> qs(100);
            std::vector<std::vector<double>> pts;
            for (std::size_t i = 0; i < qs.size(); ++i) {
                std::vector<double> v(3);
                for (auto& x : v) x = coarse ? grid(rng) / 6.0 : u(rng);
                qs[i].query = "q" + std::to_string(i);
                qs[i].dim_scores = {{"a", v[0]}, {"b", v[1]}, {"relevance", v[2]}};
                pts.push_back(v);
            }
            std::set<std::string> got, want;
            for (auto& q : pareto_front(qs, specs)) got.insert(q.query);
            for (auto i : oracle::front(pts)) want.insert(qs[i].query);
            o.require(got == want, "front mismatch on instance " + std::to_string(inst));

            auto orient = orientations_of(specs);
            for (int t = 0; t < 100; ++t) {
                auto& a = pts[rng() % pts.size()];
                auto& b = pts[rng() % pts.size()];
                auto& c = pts[rng() % pts.size()];
                OrientedVector A(a, orient), B(b, orient), C(c, orient);
                o.require(!dominates(A, A), "dominance is reflexive");
                if (dominates(A, B) && dominates(B, C)) o.require(dominates(A, C), "dominance not transitive");
                o.require(!(dominates(A, B) && dominates(B, A)), "dominance not antisymmetric");
            }
        }
    });

    criterion("hand-relevance", 1.0, [](Outcome& o) {
        Corpus c(Schema{}, {doc("a1", "a b"), doc("a2", "c d"), doc("b1", "a b")});
        std::vector<const Document*> A{&c.at("a1"), &c.at("a2")}, B{&c.at("b1")};
        double got = doc_set_relevance(A, B);
        // m_AB = (1 + 0)/2, m_BA = 1, harmonic mean 2 * 0.5 * 1 / 1.5
        const double want = 2.0 * 0.5 * 1.0 / 1.5;
        o.require(std::abs(got - want) <= 1e-9, "got " + str(got));
        o.require(std::abs(got - oracle::set_relevance({"a b", "c d"}, {"a b"})) <= 1e-9, "reference disagrees");
    });

    criterion("signed-bias", 1.0, [](Outcome& o) {
        std::vector<Document> docs;
        std::vector<std::string> ids;
        for (int i = 0; i < 10; ++i) {
            ids.push_back("d" + std::to_string(i));
            docs.push_back(doc(ids.back(), "x", {{"leaning", {i < 2 ? "+1" : "-1"}}}));
        }
        Corpus c(Schema{{"leaning"}}, docs);
        double got = signed_bias(result_set(ids), signed_labeling(c, "leaning"));
        o.require(got == -0.6, "got " + str(got));
    });

    criterion("bm25-oracle", 5.0, [](Outcome& o) {
        const std::vector<std::string> texts{"information retrieval with ranking functions",
                                             "ranking ranking ranking models",
                                             "probabilistic retrieval and retrieval evaluation"};
        std::vector<Document> docs;
        for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back(doc("d" + std::to_string(i), texts[i]));
        auto idx = Index::build(Corpus(Schema{}, docs));
        for (std::string q : {"retrieval", "ranking", "retrieval ranking", "probabilistic evaluation", "models x"}) {
            auto rs = idx.search(q, 3);
            for (std::size_t d = 0; d < texts.size(); ++d) {
                double got = 0;
                for (auto& h : rs.hits)
                    if (h.doc_id == "d" + std::to_string(d)) got = h.score;
                double want = oracle::bm25(texts, d, q);
                o.require(std::abs(got - want) <= 1e-6, "'" + q + "' d" + std::to_string(d) + ": " + str(got) +
                                                            " vs " + str(want));
            }
        }
        std::mt19937 rng(9);
        const std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"};
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Document> ds;
            const std::size_t nd = 3 + rng() % 6;
            for (std::size_t d = 0; d < nd; ++d) {
                std::string t;
                for (std::size_t w = 0, len = 2 + rng() % 10; w < len; ++w) t += vocab[rng() % vocab.size()] + " ";
                ds.push_back(doc("d" + std::to_string(d), t));
            }
            const std::string term = vocab[rng() % vocab.size()];
            const std::size_t target = rng() % nd;
            auto score = [&](const std::vector<Document>& set) {
                for (auto& h : Index::build(Corpus(Schema{}, set)).search(term, nd).hits)
                    if (h.doc_id == "d" + std::to_string(target)) return h.score;
                return 0.0;
            };
            const double before = score(ds);
            ds[target].text += " " + term;
            const double after = score(ds);
            o.require(after >= before, "injection lowered score in trial " + std::to_string(trial));
        }
    });

    criterion("domination-matrix", 5.0, [](Outcome& o) {
        const std::vector<DimensionSpec> specs{DimensionSpec::entropy("g"), DimensionSpec::relevance()};
        auto pt = [](double g, double r) {
            ScoredQuery q;
            q.query = str(g) + "," + str(r);
            q.dim_scores = {{"g", g}, {"relevance", r}};
            return q;
        };
        std::map<std::pair<std::string, Method>, std::vector<ScoredQuery>> recs;
        recs[{"t1", Method::Embedding}] = {pt(0.2, 0.2)};
        recs[{"t1", Method::LlmSimilar}] = {pt(0.5, 0.5), pt(0.1, 0.9)};
        recs[{"t2", Method::Embedding}] = {pt(0.7, 0.2), pt(0.4, 0.4)};
        recs[{"t2", Method::LlmSimilar}] = {pt(0.8, 0.5), pt(0.1, 0.6)};
        auto m = build_matrix({"t1", "t2"}, {Method::Embedding, Method::LlmSimilar}, recs, specs);
        // Hand counts, dominating method first:
        //   t1 m2>m1: (.5,.5)>(.2,.2)                        = 1
        //   t1 m1>m2: none                                   = 0
        //   t2 m2>m1: (.8,.5)>(.7,.2), (.8,.5)>(.4,.4)        = 2
        //   t2 m1>m2: none                                   = 0
        const std::string want =
            "topic_id,method_a,method_b,score\n"
            "t1,m1,m1,0\nt1,m1,m2,0\nt1,m2,m1,1\nt1,m2,m2,0\n"
            "t2,m1,m1,0\nt2,m1,m2,0\nt2,m2,m1,2\nt2,m2,m2,0\n"
            "TOTAL,m1,m1,0\nTOTAL,m1,m2,0\nTOTAL,m2,m1,3\nTOTAL,m2,m2,0\n";
        o.require(to_csv(m) == want, "matrix differs:\n" + to_csv(m));

        std::mt19937 rng(6);
        std::uniform_int_distribution<int> grid(0, 5);
        for (int t = 0; t < 100; ++t) {
            std::vector<ScoredQuery> A(rng() % 12), B(rng() % 12);
            for (auto& q : A) q = pt(grid(rng) / 5.0, grid(rng) / 5.0);
            for (auto& q : B) q = pt(grid(rng) / 5.0, grid(rng) / 5.0);
            auto ab = domination_score(B, A, specs), ba = domination_score(A, B, specs);
            o.require(ab + ba <= A.size() * B.size(), "bound violated in pair " + std::to_string(t));
        }
    });

    criterion("offline-determinism", 60.0, [](Outcome& o) {
        const auto first = full_pipeline();
        const auto second = full_pipeline();
        o.require(!first.empty(), "empty pipeline output");
        o.require(first == second, "outputs differ between runs");
    });

    criterion("loop-bounds", 0, [](Outcome& o) {
        auto ws = load_synthetic();
        SyntheticLlm llm;
        Resources res{ws.corpus, ws.index, &ws.store, &llm};
        std::mt19937 rng(8);
        const std::vector<std::string> queries{"politics", "classical music", "space exploration", "telescope",
                                               "jazz", "rocket launch", "religion culture"};
        int runs = 0;
        for (int t = 0; t < 60; ++t) {
            EngineConfig cfg;
            cfg.k = 1 + rng() % 12;
            cfg.n = 1 + rng() % 30;
            cfg.max_iter = 1 + rng() % 6;
            cfg.method = static_cast<Method>(rng() % 3);
            cfg.literal_llm_branch = rng() % 4 == 0;
            const auto& q = queries[rng() % queries.size()];
            std::vector<std::string> kw;
            for (auto& topic : ws.topics)
                if (topic.title == q) kw = topic.keywords;
            if (cfg.method == Method::LlmKeywords && kw.empty()) kw = {"history", "science"};
            auto rec = recommend({q, kw, ""}, cfg, res);
            ++runs;
            const std::string ctx = " (trial " + std::to_string(t) + ")";
            o.require(rec.iterations_used <= cfg.max_iter, "iterations_used over max_iter" + ctx);
            o.require(rec.iterations_used >= 1, "no iteration ran" + ctx);

            // recs must be exactly the non-dominated candidates, with the
            // original query counted as a competitor but never recommended.
            auto base = canonical_scores(rec.original, rec.dims);
            std::vector<std::vector<double>> pts;
            std::vector<std::string> names;
            for (auto& c : rec.candidates) {
                auto p = canonical_scores(c, rec.dims);
                if (p == base) continue;
                pts.push_back(p);
                names.push_back(c.query);
            }
            pts.push_back(base);
            std::set<std::string> want, got;
            for (auto i : oracle::front(pts))
                if (i < names.size()) want.insert(names[i]);
            for (auto& r : rec.recs) got.insert(r.query);
            o.require(got == want, "recs are not the front of the scored candidates" + ctx);
            for (auto& r : rec.recs)
                o.require(!oracle::dom(base, canonical_scores(r, rec.dims)), "a rec is dominated by the original" + ctx);
        }
        o.require(runs == 60, "not every configuration ran");
    });

    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
