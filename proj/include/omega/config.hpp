#pragma once

#include <optional>
#include <string>

#include "omega/context.hpp"
#include "omega/llm.hpp"

// Runtime configuration, read from a JSON document (`./omega.json` unless
// --config names another file). The API key only ever comes from the
// environment.
namespace omega::config {

inline constexpr const char* kDefaultPath = "omega.json";
inline constexpr const char* kApiKeyEnv = "OMEGA_API_KEY";

struct GitHub {
    std::string slug;
    std::string api_base = "https://api.github.com";
    /// Environment variable holding the token; may be unset for public repos.
    std::string token_env = "GITHUB_TOKEN";
};

struct Config {
    std::string endpoint_url = "http://localhost:8000";
    std::string model = "meta-llama/Meta-Llama-3-70B-Instruct";
    std::string api_key;  // filled from OMEGA_API_KEY
    int timeout_seconds = 300;
    context::TokenLimits max_tokens;
    std::size_t prompt_budget = 24000;
    std::size_t class_char_budget = 12000;
    llm::RetryPolicy retry;
    llm::CaptureMode capture_mode = llm::CaptureMode::Off;
    std::string capture_path;
    int parallelism = 4;
    bool fidex_per_file = false;
    std::optional<GitHub> github;

    context::ModelSettings model_settings() const { return {model, max_tokens}; }
    llm::EndpointConfig endpoint() const;

    /// Throws ConfigError: replay without an existing capture file, record
    /// without a path, non-positive limits.
    void validate() const;
};

/// Parses a config document. Unknown keys are errors, so typos do not pass
/// silently. A "temperature" key is rejected: sampling is always greedy.
Config parse(std::string_view json_text);

/// Loads `path`, or the default file if `path` is empty and the default
/// exists, or built-in defaults otherwise. Reads OMEGA_API_KEY.
Config load(const std::string& path);

/// The client stack described by `cfg`: HTTP, wrapped for capture when enabled.
std::unique_ptr<llm::ChatClient> make_client(const Config& cfg);

}  // namespace omega::config
