#include "bqr/api.hpp"
#include "bqr/error.hpp"
#include "httplib.h"

namespace bqr {

struct HttpServer::Impl {
    const Service& service;
    httplib::Server server;

    explicit Impl(const Service& s) : service(s) {}

    static void reply(httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    }
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {
    auto& srv = impl_->server;
    auto* impl = impl_.get();

    srv.Get("/api/health", [impl](const httplib::Request&, httplib::Response& res) {
        Impl::reply(res, impl->service.health());
    });
    srv.Get("/api/topics", [impl](const httplib::Request&, httplib::Response& res) {
        Impl::reply(res, impl->service.topics());
    });
    srv.Get("/api/search", [impl](const httplib::Request& req, httplib::Response& res) {
        std::size_t n = impl->service.config().n;
        if (req.has_param("n")) {
            try {
                auto v = std::stoll(req.get_param_value("n"));
                if (v < 1) throw std::invalid_argument("n");
                n = static_cast<std::size_t>(v);
            } catch (const std::exception&) {
                Impl::reply(res, {400, {{"error", "bad_request"}, {"detail", "n must be an integer >= 1"}}});
                return;
            }
        }
        Impl::reply(res, impl->service.search(req.get_param_value("q"), n));
    });
    srv.Post("/api/recommend", [impl](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error& e) {
            Impl::reply(res, {400, {{"error", "bad_request"}, {"detail", e.what()}}});
            return;
        }
        Impl::reply(res, impl->service.recommend(body));
    });
    srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        json body = {{"error", res.status == 404 ? "not_found" : "http_error"},
                     {"detail", httplib::status_message(res.status)}};
        res.set_content(body.dump(), "application/json");
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    auto& srv = impl_->server;
    if (port == 0) {
        int bound = srv.bind_to_any_port(host);
        if (bound < 0) throw Error("cannot bind " + host);
        return bound;
    }
    if (!srv.bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

}  // namespace bqr
