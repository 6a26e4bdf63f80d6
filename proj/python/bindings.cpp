#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>

#include "bqr/api.hpp"
#include "bqr/error.hpp"
#include "bqr/pareto.hpp"
#include "bqr/tokenizer.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;

namespace {

// Everything one recommendation session needs, loaded once.
class Session {
public:
    Session(const fs::path& corpus, std::optional<fs::path> schema, std::optional<fs::path> topics,
            std::optional<fs::path> embeddings, std::optional<fs::path> fixtures, const std::string& config)
        : app_(config.empty() ? bqr::AppConfig{} : bqr::parse_config(bqr::json::parse(config))),
          corpus_(bqr::load_corpus(corpus, bqr::load_schema(schema.value_or(corpus.parent_path() / "schema.json")))),
          index_(bqr::Index::build(corpus_, app_.index)) {
        if (embeddings) store_ = std::make_unique<bqr::EmbeddingStore>(bqr::load_vectors(*embeddings));
        if (fixtures)
            provider_ = std::make_unique<bqr::ReplayProvider>(bqr::ReplayProvider::from_file(*fixtures));
        if (topics) topics_ = bqr::load_queries(*topics, &corpus_);
        service_ = std::make_unique<bqr::Service>(corpus_, index_, store_.get(), provider_.get(), topics_,
                                                  app_.engine);
    }

    std::size_t size() const { return corpus_.size(); }

    std::string search(const std::string& query, std::size_t n) const {
        return unwrap(service_->search(query, n));
    }

    std::string recommend(const std::string& body) const {
        bqr::ApiResponse r;
        {
            py::gil_scoped_release release;
            r = service_->recommend(bqr::json::parse(body));
        }
        return unwrap(r);
    }

    std::string topics() const { return unwrap(service_->topics()); }

    std::pair<std::string, std::string> evaluate(const std::vector<std::string>& methods,
                                                 const std::vector<std::string>& topic_ids) const {
        std::vector<bqr::Method> ms;
        for (const auto& m : methods) ms.push_back(bqr::parse_method(m));
        std::vector<bqr::QueryTopic> chosen;
        for (const auto& t : topics_) {
            if (topic_ids.empty() || std::find(topic_ids.begin(), topic_ids.end(), t.topic_id) != topic_ids.end())
                chosen.push_back(t);
        }
        py::gil_scoped_release release;
        auto m = bqr::method_matrix(chosen, ms, app_.engine, {corpus_, index_, store_.get(), provider_.get()});
        return {bqr::matrix_json(m).dump(), bqr::to_csv(m)};
    }

private:
    static std::string unwrap(const bqr::ApiResponse& r) {
        if (r.status == 200) return r.body.dump();
        const std::string msg = r.body.value("detail", r.body.dump());
        const std::string kind = r.body.value("error", "");
        if (kind == "provider_error") throw bqr::ProviderError(msg);
        if (kind == "out_of_vocabulary") throw bqr::OutOfVocabulary(msg);
        if (kind == "inapplicable_method") throw bqr::InapplicableMethod(msg);
        if (r.status == 400) throw bqr::InvalidArgument(msg);
        throw std::runtime_error(msg);
    }

    bqr::AppConfig app_;
    bqr::Corpus corpus_;
    bqr::Index index_;
    std::unique_ptr<bqr::EmbeddingStore> store_;
    std::unique_ptr<bqr::LlmProvider> provider_;
    std::vector<bqr::QueryTopic> topics_;
    std::unique_ptr<bqr::Service> service_;
};

bqr::Distribution to_distribution(const std::map<std::string, double>& probs) {
    bqr::Distribution d;
    d.probs = probs;
    d.support_count = probs.size();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Balanced query recommendation core";

    auto base = py::register_exception<bqr::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<bqr::InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<bqr::ParseError>(m, "ParseError", base.ptr());
    py::register_exception<bqr::OutOfVocabulary>(m, "OutOfVocabulary", base.ptr());
    py::register_exception<bqr::ProviderError>(m, "ProviderError", base.ptr());
    py::register_exception<bqr::InapplicableMethod>(m, "InapplicableMethod", base.ptr());

    py::class_<Session>(m, "Session")
        .def(py::init<const fs::path&, std::optional<fs::path>, std::optional<fs::path>, std::optional<fs::path>,
                      std::optional<fs::path>, const std::string&>(),
             py::arg("corpus"), py::arg("schema") = py::none(), py::arg("topics") = py::none(),
             py::arg("embeddings") = py::none(), py::arg("fixtures") = py::none(), py::arg("config") = "")
        .def("__len__", &Session::size)
        .def("search_json", &Session::search, py::arg("query"), py::arg("n"))
        .def("recommend_json", &Session::recommend, py::arg("body"))
        .def("topics_json", &Session::topics)
        .def("evaluate_json", &Session::evaluate, py::arg("methods"), py::arg("topic_ids"));

    m.def("tokenize", [](const std::string& s) { return bqr::tokenize(s); });
    m.def("prompt_hash", [](const std::string& s) { return bqr::prompt_hash(s); });
    m.def("build_prompt", [](const std::string& q, const std::vector<std::string>& kw) {
        return bqr::build_prompt(q, kw);
    });
    m.def("parse_query_list", [](const std::string& s) { return bqr::parse_query_list(s); });
    m.def("jsd", [](const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
        return bqr::jsd(to_distribution(p), to_distribution(q));
    });
    m.def("text_set_relevance", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
        std::vector<bqr::BowVector> va, vb;
        for (const auto& t : a) va.push_back(bqr::bow_vector(bqr::Document{"", "", "", t, {}, {}}));
        for (const auto& t : b) vb.push_back(bqr::bow_vector(bqr::Document{"", "", "", t, {}, {}}));
        return bqr::bow_set_relevance(va, vb);
    }, "Set-level relevance between two lists of document texts.");
    m.def("pareto_front", [](const std::vector<std::vector<double>>& points,
                             const std::vector<std::string>& orientations) {
        std::vector<bqr::Orientation> o;
        for (const auto& s : orientations) o.push_back(bqr::parse_orientation(s));
        std::vector<std::vector<double>> canon;
        for (const auto& p : points) {
            if (p.size() != o.size()) throw bqr::InvalidArgument("point length does not match orientations");
            canon.push_back(bqr::canonicalize(p, o));
        }
        return bqr::pareto_front_indices(canon);
    }, py::arg("points"), py::arg("orientations"), "Indices of the non-dominated points.");
}
