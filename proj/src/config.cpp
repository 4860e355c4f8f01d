#include "omega/config.hpp"

#include <cstdlib>
#include <filesystem>

#include <json.hpp>

#include "omega/error.hpp"
#include "omega/text.hpp"

namespace omega::config {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known) ok = ok || k == key;
        if (key == "temperature") throw ConfigError("temperature is fixed at 0 and cannot be configured");
        if (!ok) throw ConfigError("unknown config key '" + where + key + "'");
    }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

llm::EndpointConfig Config::endpoint() const {
    return {endpoint_url, api_key, std::chrono::seconds(timeout_seconds)};
}

void Config::validate() const {
    if (capture_mode == llm::CaptureMode::Replay) {
        if (capture_path.empty()) throw ConfigError("replay mode needs a capture path");
        if (!std::filesystem::is_regular_file(capture_path))
            throw ConfigError("replay capture file '" + capture_path + "' does not exist");
    }
    if (capture_mode == llm::CaptureMode::Record && capture_path.empty())
        throw ConfigError("record mode needs a capture path");
    if (max_tokens.summary <= 0 || max_tokens.classification <= 0 || max_tokens.explanation <= 0 ||
        max_tokens.message <= 0)
        throw ConfigError("max_tokens values must be positive");
    if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be at least 1");
    if (parallelism < 1) throw ConfigError("parallelism must be at least 1");
    if (timeout_seconds < 1) throw ConfigError("timeout_seconds must be at least 1");
}

Config parse(std::string_view json_text) {
    Config cfg;
    try {
        auto doc = json::parse(json_text);
        if (!doc.is_object()) throw ConfigError("config must be a JSON object");
        reject_unknown(doc,
                       {"endpoint_url", "model", "timeout_seconds", "max_tokens", "prompt_budget",
                        "class_char_budget", "retry", "capture", "parallelism", "fidex_per_file", "github"},
                       "");
        read(doc, "endpoint_url", cfg.endpoint_url);
        read(doc, "model", cfg.model);
        read(doc, "timeout_seconds", cfg.timeout_seconds);
        read(doc, "prompt_budget", cfg.prompt_budget);
        read(doc, "class_char_budget", cfg.class_char_budget);
        read(doc, "parallelism", cfg.parallelism);
        read(doc, "fidex_per_file", cfg.fidex_per_file);
        if (doc.contains("max_tokens")) {
            const auto& mt = doc["max_tokens"];
            reject_unknown(mt, {"summary", "classification", "explanation", "message"}, "max_tokens.");
            read(mt, "summary", cfg.max_tokens.summary);
            read(mt, "classification", cfg.max_tokens.classification);
            read(mt, "explanation", cfg.max_tokens.explanation);
            read(mt, "message", cfg.max_tokens.message);
        }
        if (doc.contains("retry")) {
            const auto& r = doc["retry"];
            reject_unknown(r, {"max_attempts", "initial_backoff_ms", "backoff_multiplier"}, "retry.");
            read(r, "max_attempts", cfg.retry.max_attempts);
            if (r.contains("initial_backoff_ms"))
                cfg.retry.initial_backoff = std::chrono::milliseconds(r["initial_backoff_ms"].get<long>());
            read(r, "backoff_multiplier", cfg.retry.backoff_multiplier);
        }
        if (doc.contains("capture")) {
            const auto& c = doc["capture"];
            reject_unknown(c, {"mode", "path"}, "capture.");
            if (c.contains("mode")) cfg.capture_mode = llm::capture_mode_from_string(c["mode"].get<std::string>());
            read(c, "path", cfg.capture_path);
        }
        if (doc.contains("github")) {
            const auto& g = doc["github"];
            reject_unknown(g, {"slug", "api_base", "token_env"}, "github.");
            GitHub gh;
            read(g, "slug", gh.slug);
            read(g, "api_base", gh.api_base);
            read(g, "token_env", gh.token_env);
            if (gh.slug.empty()) throw ConfigError("github.slug is required");
            cfg.github = gh;
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return cfg;
}

Config load(const std::string& path) {
    Config cfg;
    if (!path.empty()) {
        cfg = parse(text::read_file(path));
    } else if (std::filesystem::is_regular_file(kDefaultPath)) {
        cfg = parse(text::read_file(kDefaultPath));
    }
    if (const char* key = std::getenv(kApiKeyEnv)) cfg.api_key = key;
    return cfg;
}

std::unique_ptr<llm::ChatClient> make_client(const Config& cfg) {
    cfg.validate();
    if (cfg.capture_mode == llm::CaptureMode::Replay) {
        return std::make_unique<llm::CaptureClient>(nullptr, llm::CaptureMode::Replay, cfg.capture_path);
    }
    auto http = std::make_unique<llm::HttpChatClient>(cfg.endpoint(), cfg.retry);
    if (cfg.capture_mode == llm::CaptureMode::Record) {
        return std::make_unique<llm::CaptureClient>(std::move(http), llm::CaptureMode::Record, cfg.capture_path);
    }
    return http;
}

}  // namespace omega::config
