// JSON-over-HTTP provider, kept in its own translation unit because
// httplib.h is heavyweight to compile.

#include "ciporter/llm.hpp"

#include <httplib.h>
#include <json.hpp>

namespace ciporter {

namespace {

// Split "http://host:port/path" into client base and request path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

ProviderResponse HttpProvider::complete(const ProviderRequest& request) {
    nlohmann::json messages = nlohmann::json::array();
    for (const auto& message : request.messages)
        messages.push_back({{"role", message.role}, {"content", message.content}});
    const nlohmann::json body{{"model", model_.empty() ? request.model : model_},
                              {"temperature", request.temperature},
                              {"messages", std::move(messages)}};

    const auto [base, path] = split_url(url_);
    httplib::Client client(base);
    client.set_read_timeout(120, 0);
    httplib::Headers headers;
    if (!key_.empty())
        headers.emplace("Authorization", "Bearer " + key_);

    auto result = client.Post(path, headers, body.dump(), "application/json");
    if (!result)
        throw TransportError("provider unreachable at " + url_ + " (" +
                             httplib::to_string(result.error()) + ")");
    if (result->status < 200 || result->status >= 300)
        throw TransportError("provider returned HTTP " + std::to_string(result->status) +
                             " for case '" + request.case_id + "'");
    try {
        const auto doc = nlohmann::json::parse(result->body);
        return ProviderResponse{doc.at("content").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed provider response: ") + e.what());
    }
}

}  // namespace ciporter
