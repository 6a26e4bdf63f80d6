#pragma once

#include "bqr/engine.hpp"
#include "support.hpp"

namespace bqr::testing {

// The bundled synthetic corpus with its topics, vectors and replay fixtures.
struct Synthetic {
    Corpus corpus;
    Index index;
    EmbeddingStore store;
    ReplayProvider replay;
    std::vector<QueryTopic> topics;

    static Synthetic load() {
        auto dir = data_dir();
        auto corpus = load_corpus(dir / "corpus.jsonl", load_schema(dir / "schema.json"));
        auto index = Index::build(corpus);
        return Synthetic{std::move(corpus), std::move(index), load_vectors(dir / "embeddings.txt"),
                         ReplayProvider::from_file(dir / "fixtures.json"),
                         load_queries(dir / "topics.jsonl")};
    }
    Resources resources() { return {corpus, index, &store, &replay}; }
};

inline Synthetic& synthetic() {
    static Synthetic s = Synthetic::load();
    return s;
}

}  // namespace bqr::testing
