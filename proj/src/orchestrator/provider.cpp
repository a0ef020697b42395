#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "bimcheck/orchestrator/provider.hpp"

namespace bimcheck::orchestrator {

using nlohmann::json;

std::string_view to_string(ProviderErrorKind kind) {
    switch (kind) {
        case ProviderErrorKind::network: return "network";
        case ProviderErrorKind::timeout: return "timeout";
        case ProviderErrorKind::auth: return "auth";
        case ProviderErrorKind::status: return "status";
        case ProviderErrorKind::malformed: return "malformed";
        case ProviderErrorKind::exhausted: return "exhausted";
        case ProviderErrorKind::config: return "config";
    }
    return "?";
}

FixtureProvider::FixtureProvider(std::filesystem::path root, std::string name)
    : root_(std::move(root)), name_(std::move(name)) {}

std::string FixtureProvider::complete(const std::vector<Message>&, const RequestContext& request) {
    const auto path = root_ / name_ / request.task / fmt::format("attempt{}.txt", request.attempt);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ProviderError(ProviderErrorKind::exhausted,
                            fmt::format("no fixture response at {}", path.generic_string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

template <typename T>
T field(const json& j, const char* key, const T& fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ProviderError(ProviderErrorKind::config, fmt::format("provider field '{}' has the wrong type", key));
    }
}

std::string required_text(const json& j, const char* key) {
    const auto v = field<std::string>(j, key, "");
    if (v.empty()) throw ProviderError(ProviderErrorKind::config, fmt::format("provider is missing '{}'", key));
    return v;
}

std::optional<double> optional_number(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return field<double>(j, key, 0.0);
}

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, re)) {
        throw ProviderError(ProviderErrorKind::config, fmt::format("endpoint '{}' is not an http(s) URL", url));
    }
    return {m[1].str(), m[2].matched ? m[2].str() : "/"};
}

}  // namespace

std::vector<ProviderConfig> load_provider_configs(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ProviderError(ProviderErrorKind::config, fmt::format("provider config is not valid JSON: {}", e.what()));
    }
    const json& list = doc.is_object() && doc.contains("providers") ? doc.at("providers") : doc;
    if (!list.is_array()) throw ProviderError(ProviderErrorKind::config, "provider config must list providers");
    std::vector<ProviderConfig> out;
    for (const auto& p : list) {
        if (!p.is_object()) throw ProviderError(ProviderErrorKind::config, "each provider must be an object");
        ProviderConfig c;
        c.name = required_text(p, "name");
        c.adapter = field<std::string>(p, "adapter", c.adapter);
        if (c.adapter != "openai" && c.adapter != "anthropic") {
            throw ProviderError(ProviderErrorKind::config,
                                fmt::format("provider '{}': unknown adapter '{}'", c.name, c.adapter));
        }
        c.endpoint = field<std::string>(p, "endpoint", "");
        c.model = field<std::string>(p, "model", "");
        c.api_key_env = field<std::string>(p, "api_key_env", "");
        c.timeout_seconds = field<double>(p, "timeout_seconds", c.timeout_seconds);
        c.max_tokens = field<int>(p, "max_tokens", c.max_tokens);
        c.price_per_1m_input = optional_number(p, "price_per_1m_input");
        c.price_per_1m_output = optional_number(p, "price_per_1m_output");
        out.push_back(std::move(c));
    }
    return out;
}

json to_json(const ProviderConfig& c) {
    json j = {{"name", c.name},
              {"adapter", c.adapter},
              {"endpoint", c.endpoint},
              {"model", c.model},
              {"api_key_env", c.api_key_env},
              {"timeout_seconds", c.timeout_seconds},
              {"max_tokens", c.max_tokens}};
    if (c.price_per_1m_input) j["price_per_1m_input"] = *c.price_per_1m_input;
    if (c.price_per_1m_output) j["price_per_1m_output"] = *c.price_per_1m_output;
    return j;
}

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
    if (config_.api_key_env.empty()) {
        throw ProviderError(ProviderErrorKind::config, fmt::format("provider '{}' names no api_key_env", config_.name));
    }
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
        throw ProviderError(ProviderErrorKind::auth, fmt::format("environment variable {} is not set for provider '{}'",
                                                                 config_.api_key_env, config_.name));
    }
    api_key_ = key;
}

HttpProvider::HttpProvider(ProviderConfig config, std::string api_key)
    : config_(std::move(config)), api_key_(std::move(api_key)) {}

json HttpProvider::request_body(const std::vector<Message>& messages) const {
    if (config_.adapter == "anthropic") {
        json body = {{"model", config_.model}, {"max_tokens", config_.max_tokens}, {"messages", json::array()}};
        for (const auto& m : messages) {
            if (m.role == "system") {
                body["system"] = m.content;
            } else {
                body["messages"].push_back({{"role", m.role}, {"content", m.content}});
            }
        }
        return body;
    }
    json body = {{"model", config_.model}, {"messages", json::array()}};
    for (const auto& m : messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    return body;
}

std::string HttpProvider::complete(const std::vector<Message>& messages, const RequestContext&) {
    const Endpoint ep = split_endpoint(config_.endpoint);
    // A client per call keeps concurrent sessions independent.
    httplib::Client client(ep.base);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(config_.timeout_seconds));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    httplib::Headers headers;
    if (config_.adapter == "anthropic") {
        headers.emplace("x-api-key", api_key_);
        headers.emplace("anthropic-version", "2023-06-01");
    } else {
        headers.emplace("Authorization", "Bearer " + api_key_);
    }

    const auto res = client.Post(ep.path, headers, request_body(messages).dump(), "application/json");
    if (!res) {
        const auto err = res.error();
        const auto kind = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read
                              ? ProviderErrorKind::timeout
                              : ProviderErrorKind::network;
        throw ProviderError(kind, fmt::format("{}: request to {} failed: {}", config_.name, config_.endpoint,
                                              httplib::to_string(err)));
    }
    if (res->status == 401 || res->status == 403) {
        throw ProviderError(ProviderErrorKind::auth,
                            fmt::format("{}: the endpoint rejected the credentials (HTTP {})", config_.name, res->status));
    }
    if (res->status < 200 || res->status >= 300) {
        throw ProviderError(ProviderErrorKind::status, fmt::format("{}: HTTP {}", config_.name, res->status));
    }

    try {
        const json body = json::parse(res->body);
        if (config_.adapter == "anthropic") {
            std::string text;
            for (const auto& block : body.at("content")) {
                if (block.value("type", "") == "text") text += block.at("text").get<std::string>();
            }
            return text;
        }
        return body.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ProviderError(ProviderErrorKind::malformed,
                            fmt::format("{}: unexpected response body ({})", config_.name, e.what()));
    }
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
    return std::make_unique<HttpProvider>(config);
}

}  // namespace bimcheck::orchestrator
