#include "doctest.h"

#include <mutex>

#include "bqr/candidates.hpp"
#include "bqr/error.hpp"
#include "support.hpp"

using namespace bqr;

namespace {

// Answers every prompt with the same text and remembers what it was asked.
class FixedProvider final : public LlmProvider {
public:
    explicit FixedProvider(std::string reply) : reply_(std::move(reply)) {}
    std::string complete(const std::string& prompt) override {
        std::lock_guard lock(mu_);
        prompts.push_back(prompt);
        return reply_;
    }
    std::vector<std::string> prompts;

private:
    std::string reply_;
    std::mutex mu_;
};

class ThrowingProvider final : public LlmProvider {
public:
    std::string complete(const std::string&) override { throw std::runtime_error("socket closed"); }
};

}  // namespace

TEST_SUITE("candidates") {

TEST_CASE("method names") {
    CHECK(parse_method("m1") == Method::Embedding);
    CHECK(parse_method("m2") == Method::LlmSimilar);
    CHECK(parse_method("m3") == Method::LlmKeywords);
    CHECK(to_string(Method::LlmKeywords) == "m3");
    CHECK_THROWS_AS(parse_method("m4"), InvalidArgument);
}

TEST_CASE("response parsing") {
    CHECK(parse_query_list("1. Foo Bar\n2. baz") == std::vector<std::string>{"foo bar", "baz"});
    CHECK(parse_query_list("- x\n- x\n- y") == std::vector<std::string>{"x", "y"});
    CHECK_THROWS_AS(parse_query_list("no list here."), ParseError);
    CHECK(parse_query_list("Here are some queries:\n\n1) \"Alpha beta\"\n2: gamma.\n* delta") ==
          std::vector<std::string>{"alpha beta", "gamma", "delta"});
    try {
        parse_query_list("nothing");
    } catch (const ParseError& e) {
        CHECK(e.raw() == "nothing");
    }
}

TEST_CASE("prompt rendering") {
    std::vector<std::string> kw{"bach", "haydn"};
    auto p = build_prompt("classical music", kw);
    CHECK(p.find("Topic: classical music") != std::string::npos);
    CHECK(p.find("Keywords: bach, haydn") != std::string::npos);
    CHECK(prompt_template().find("{query}") != std::string::npos);
    CHECK(prompt_hash(p) == prompt_hash(p));
    CHECK(prompt_hash(p).size() == 16);
    CHECK(prompt_hash(p) != prompt_hash(p + " "));
}

TEST_CASE("replay provider serves by hash and fails loudly otherwise") {
    ReplayProvider r({{prompt_hash("hello"), "1. a b\n2. c d"}});
    CHECK(r.complete("hello") == "1. a b\n2. c d");
    CHECK_THROWS_AS(r.complete("other"), ProviderError);

    bqr::testing::TempFile f("{\"" + prompt_hash("x") + "\": \"1. y\"}", ".json");
    CHECK(ReplayProvider::from_file(f.path()).complete("x") == "1. y");
    bqr::testing::TempFile bad("[1,2]", ".json");
    CHECK_THROWS_AS(ReplayProvider::from_file(bad.path()), ParseError);
}

TEST_CASE("method 1 returns embedding neighbors as candidates") {
    EmbeddingStore s(2, {"a", "b", "c"}, {1, 0, 0.9, 0.2, 0, 1});
    auto b = method1_embedding(s, "a", 1);
    CHECK(b.method == Method::Embedding);
    CHECK(b.queries == std::vector<std::string>{"b"});
    CHECK_THROWS_AS(method1_embedding(s, "zzz", 2), OutOfVocabulary);
}

TEST_CASE("method 2 prompts with the similar words") {
    FixedProvider p("1. a b\n2. c d");
    std::vector<std::string> sim{"jazz", "concert"};
    auto b = method2_llm_with_similar(p, "classical music", sim, 10);
    CHECK(b.queries == std::vector<std::string>{"a b", "c d"});
    REQUIRE(p.prompts.size() == 1);
    CHECK(p.prompts[0] == build_prompt("classical music", sim));
    CHECK_THROWS_AS(method2_llm_with_similar(p, "q", {}, 10), InvalidArgument);
    FixedProvider prose("I cannot help with that.");
    CHECK_THROWS_AS(method2_llm_with_similar(prose, "q", sim, 10), ParseError);
    ThrowingProvider down;
    CHECK_THROWS_AS(method2_llm_with_similar(down, "q", sim, 10), ProviderError);
}

TEST_CASE("method 3 keeps the first k and needs keywords") {
    std::string reply;
    for (int i = 1; i <= 12; ++i) reply += std::to_string(i) + ". query " + std::to_string(i) + "\n";
    FixedProvider p(reply);
    QueryTopic t{"t1", "classical music", {"bach", "haydn"}, {}};
    auto b = method3_llm_with_keywords(p, t, 10);
    REQUIRE(b.queries.size() == 10);
    CHECK(b.queries.front() == "query 1");
    CHECK(b.queries.back() == "query 10");
    QueryTopic empty{"t2", "x", {}, {}};
    CHECK_THROWS_AS(method3_llm_with_keywords(p, empty, 10), InapplicableMethod);
}

TEST_CASE("batches drop the origin query, blanks and duplicates") {
    std::vector<std::string> qs{"Politics", " x ", "x", "", "y"};
    auto b = make_batch(Method::LlmSimilar, "politics", qs);
    CHECK(b.queries == std::vector<std::string>{"x", "y"});
}

TEST_CASE("per-word prompting sends one prompt per word") {
    FixedProvider p("1. shared\n2. other");
    std::vector<std::string> words{"w1", "w2", "w3"};
    auto b = llm_per_word(p, "q", words, 10);
    CHECK(p.prompts.size() == 3);
    CHECK(b.queries == std::vector<std::string>{"shared", "other"});
}

}
