#include <nlohmann/json.hpp>

#include "bqr/candidates.hpp"
#include "bqr/error.hpp"
#include "httplib.h"

namespace bqr {

using nlohmann::json;

namespace {

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("LLM endpoint must be an absolute URL: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpProvider::HttpProvider(HttpProviderConfig config)
    : config_(std::move(config)), in_flight_(std::max<std::ptrdiff_t>(1, config_.max_in_flight)) {
    if (config_.endpoint.empty())
        throw InvalidArgument("live provider needs an endpoint (set BQR_LLM_ENDPOINT)");
    split_url(config_.endpoint);
}

HttpProvider::~HttpProvider() = default;

std::string HttpProvider::complete(const std::string& prompt) {
    const auto url = split_url(config_.endpoint);
    json body = {{"model", config_.model},
                 {"messages", json::array({{{"role", "user"}, {"content", prompt}}})}};

    in_flight_.acquire();
    httplib::Result res;
    try {
        httplib::Client client(url.origin);
        const auto secs = static_cast<time_t>(config_.timeout.count());
        client.set_connection_timeout(secs, 0);
        client.set_read_timeout(secs, 0);
        httplib::Headers headers;
        if (!config_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        res = client.Post(url.path, headers, body.dump(), "application/json");
    } catch (...) {
        in_flight_.release();
        throw;
    }
    in_flight_.release();

    if (!res) throw ProviderError("LLM request failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw ProviderError("LLM endpoint returned HTTP " + std::to_string(res->status) + ": " +
                            res->body.substr(0, 500));
    try {
        auto j = json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unexpected LLM response shape: ") + e.what() + "\n" +
                            res->body.substr(0, 500));
    }
}

}  // namespace bqr
