#pragma once

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace omega::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content;

    friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct Conversation {
    std::vector<ChatMessage> messages;

    Conversation& system(std::string content);
    Conversation& user(std::string content);
    Conversation& assistant(std::string content);

    /// Non-empty contents, at most one system message and only in front,
    /// last message from the user. Throws std::invalid_argument.
    void validate_for_completion() const;

    friend bool operator==(const Conversation&, const Conversation&) = default;
};

/// Sampling is always greedy: temperature must stay 0 and no penalty
/// parameters exist.
struct CompletionParams {
    std::string model;
    double temperature = 0.0;
    int max_tokens = 1024;
};

/// The chat-completions request body: {model, messages, temperature, max_tokens}.
nlohmann::json request_body(const Conversation& conv, const CompletionParams& params);
nlohmann::json to_json(const Conversation& conv);

class ChatClient {
public:
    virtual ~ChatClient() = default;
    /// Returns the first choice's message content.
    virtual std::string complete(const Conversation& conv, const CompletionParams& params) = 0;
};

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{500};
    double backoff_multiplier = 2.0;
};

struct EndpointConfig {
    /// Scheme, host, port and optional path prefix, e.g. http://localhost:8000.
    std::string base_url;
    /// Sent as a bearer token when non-empty.
    std::string api_key;
    std::chrono::seconds timeout{300};
};

/// POSTs to `<base>/v1/chat/completions`. Transport failures, HTTP 429 and
/// 5xx responses are retried with exponential backoff. Safe to share across
/// threads.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(EndpointConfig endpoint, RetryPolicy retry = {});

    std::string complete(const Conversation& conv, const CompletionParams& params) override;

    /// Attempts made by the most recent complete() call on any thread.
    int last_attempts() const { return last_attempts_.load(); }

private:
    EndpointConfig endpoint_;
    RetryPolicy retry_;
    std::string scheme_host_port_;
    std::string path_;
    std::atomic<int> last_attempts_{0};
};

/// Extracts choices[0].message.content from a response body. Throws
/// EndpointError on an unexpected shape, EmptyCompletion on empty content.
std::string parse_completion_response(int status, const std::string& body);

enum class CaptureMode { Off, Record, Replay };

std::string_view to_string(CaptureMode mode);
CaptureMode capture_mode_from_string(std::string_view s);

/// Records request/response pairs as JSON lines, or answers requests from
/// such a file. Replay matches the exact request body; identical requests
/// are answered in recorded order.
class CaptureClient : public ChatClient {
public:
    /// Record: forwards to `inner` and truncates then appends to `path`.
    /// Replay: `inner` may be null; throws omega::Error if `path` is unreadable.
    CaptureClient(std::unique_ptr<ChatClient> inner, CaptureMode mode, std::string path);

    std::string complete(const Conversation& conv, const CompletionParams& params) override;

    std::size_t calls() const;

private:
    std::unique_ptr<ChatClient> inner_;
    CaptureMode mode_;
    std::string path_;
    mutable std::mutex mu_;
    std::ofstream out_;
    std::map<std::string, std::deque<std::string>> replay_;
    std::size_t calls_ = 0;
};

/// Answers through a callback; for tests and offline use.
class CallbackClient : public ChatClient {
public:
    using Handler = std::function<std::string(const Conversation&, const CompletionParams&)>;
    explicit CallbackClient(Handler handler) : handler_(std::move(handler)) {}

    std::string complete(const Conversation& conv, const CompletionParams& params) override;

    std::size_t calls() const;
    std::vector<Conversation> history() const;

private:
    Handler handler_;
    mutable std::mutex mu_;
    std::vector<Conversation> history_;
};

}  // namespace omega::llm
