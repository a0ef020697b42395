#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bimcheck/orchestrator/prompt.hpp"

namespace bimcheck::orchestrator {

enum class ProviderErrorKind { network, timeout, auth, status, malformed, exhausted, config };

std::string_view to_string(ProviderErrorKind kind);

class ProviderError : public std::runtime_error {
public:
    ProviderError(ProviderErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ProviderErrorKind kind() const { return kind_; }

private:
    ProviderErrorKind kind_;
};

// Which request a completion belongs to. Fixture providers key their files on it;
// network providers ignore it.
struct RequestContext {
    std::string task;  // rule id as text ("1".."12") or "report"
    int attempt = 1;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual const std::string& name() const = 0;
    // Must be safe to call from several threads at once.
    virtual std::string complete(const std::vector<Message>& messages, const RequestContext& request) = 0;
};

// Replays canned completions from <root>/<provider>/<task>/attempt<N>.txt.
class FixtureProvider final : public Provider {
public:
    FixtureProvider(std::filesystem::path root, std::string name);

    const std::string& name() const override { return name_; }
    std::string complete(const std::vector<Message>& messages, const RequestContext& request) override;

private:
    std::filesystem::path root_;
    std::string name_;
};

// In-process provider for tests and embedding.
class CallbackProvider final : public Provider {
public:
    using Callback = std::function<std::string(const std::vector<Message>&, const RequestContext&)>;

    CallbackProvider(std::string name, Callback callback) : name_(std::move(name)), callback_(std::move(callback)) {}

    const std::string& name() const override { return name_; }
    std::string complete(const std::vector<Message>& messages, const RequestContext& request) override {
        return callback_(messages, request);
    }

private:
    std::string name_;
    Callback callback_;
};

// One entry of a provider config file. The key itself never lives here, only the
// name of the environment variable that holds it.
struct ProviderConfig {
    std::string name;
    std::string adapter = "openai";  // "openai" (chat completions) or "anthropic" (messages)
    std::string endpoint;
    std::string model;
    std::string api_key_env;
    double timeout_seconds = 60.0;
    int max_tokens = 4096;
    std::optional<double> price_per_1m_input;
    std::optional<double> price_per_1m_output;
};

// Accepts {"providers": [...]} or a bare array. Throws ProviderError(config).
std::vector<ProviderConfig> load_provider_configs(std::string_view json_text);
nlohmann::json to_json(const ProviderConfig& config);

// Talks to an HTTP(S) chat endpoint. The key is read from the environment once, at
// construction, and is only ever placed in request headers.
class HttpProvider final : public Provider {
public:
    explicit HttpProvider(ProviderConfig config);
    // For tests: supply the key directly instead of reading the environment.
    HttpProvider(ProviderConfig config, std::string api_key);

    const std::string& name() const override { return config_.name; }
    const ProviderConfig& config() const { return config_; }
    std::string complete(const std::vector<Message>& messages, const RequestContext& request) override;

    // Request body the adapter would send; exposed so tests can inspect it offline.
    nlohmann::json request_body(const std::vector<Message>& messages) const;

private:
    ProviderConfig config_;
    std::string api_key_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

}  // namespace bimcheck::orchestrator
