#include "omega/llm.hpp"

#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "omega/error.hpp"
#include "omega/text.hpp"

namespace omega::llm {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

Conversation& Conversation::system(std::string content) {
    messages.push_back({Role::System, std::move(content)});
    return *this;
}

Conversation& Conversation::user(std::string content) {
    messages.push_back({Role::User, std::move(content)});
    return *this;
}

Conversation& Conversation::assistant(std::string content) {
    messages.push_back({Role::Assistant, std::move(content)});
    return *this;
}

void Conversation::validate_for_completion() const {
    if (messages.empty()) throw std::invalid_argument("conversation is empty");
    for (std::size_t i = 0; i < messages.size(); ++i) {
        if (messages[i].content.empty())
            throw std::invalid_argument("message " + std::to_string(i) + " has empty content");
        if (messages[i].role == Role::System && i != 0)
            throw std::invalid_argument("system message must lead the conversation");
    }
    if (messages.back().role != Role::User) throw std::invalid_argument("last message must come from the user");
}

nlohmann::json to_json(const Conversation& conv) {
    auto messages = nlohmann::json::array();
    for (const auto& m : conv.messages) messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    return messages;
}

nlohmann::json request_body(const Conversation& conv, const CompletionParams& params) {
    nlohmann::json body;
    body["model"] = params.model;
    body["messages"] = to_json(conv);
    // Integer zero keeps the wire form `"temperature":0`.
    if (params.temperature == 0.0) body["temperature"] = 0;
    else body["temperature"] = params.temperature;
    body["max_tokens"] = params.max_tokens;
    return body;
}

static void check_params(const CompletionParams& params) {
    if (params.temperature != 0.0) throw std::invalid_argument("temperature must be 0");
    if (params.max_tokens <= 0) throw std::invalid_argument("max_tokens must be positive");
}

std::string parse_completion_response(int status, const std::string& body) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
        throw EndpointError(status, body);
    }
    const nlohmann::json* content = nullptr;
    if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty()) {
        const auto& choice = j["choices"][0];
        if (choice.contains("message") && choice["message"].contains("content"))
            content = &choice["message"]["content"];
    }
    if (!content) throw EndpointError(status, body);
    if (content->is_null()) throw EmptyCompletion();
    if (!content->is_string()) throw EndpointError(status, body);
    auto text = content->get<std::string>();
    if (text::trim(text).empty()) throw EmptyCompletion();
    return text;
}

HttpChatClient::HttpChatClient(EndpointConfig endpoint, RetryPolicy retry)
    : endpoint_(std::move(endpoint)), retry_(retry) {
    std::string base = endpoint_.base_url;
    while (!base.empty() && base.back() == '/') base.pop_back();
    auto scheme_end = base.find("://");
    auto path_start = base.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        scheme_host_port_ = base;
    } else {
        scheme_host_port_ = base.substr(0, path_start);
        path_ = base.substr(path_start);
    }
    path_ += "/v1/chat/completions";
    if (retry_.max_attempts < 1) retry_.max_attempts = 1;
}

std::string HttpChatClient::complete(const Conversation& conv, const CompletionParams& params) {
    conv.validate_for_completion();
    check_params(params);
    const std::string payload = request_body(conv, params).dump();

    httplib::Client cli(scheme_host_port_);
    cli.set_connection_timeout(std::chrono::seconds(10));
    cli.set_read_timeout(endpoint_.timeout);
    cli.set_write_timeout(endpoint_.timeout);
    httplib::Headers headers;
    if (!endpoint_.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint_.api_key);

    auto backoff = retry_.initial_backoff;
    std::string last_error;
    int last_status = 0;
    std::string last_body;
    for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
        last_attempts_ = attempt;
        auto res = cli.Post(path_, headers, payload, "application/json");
        if (res) {
            if (res->status >= 200 && res->status < 300) return parse_completion_response(res->status, res->body);
            last_status = res->status;
            last_body = res->body;
            bool retryable = res->status == 429 || res->status >= 500;
            if (!retryable) throw EndpointError(res->status, res->body);
        } else {
            last_status = 0;
            last_error = httplib::to_string(res.error());
        }
        if (attempt < retry_.max_attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long long>(static_cast<double>(backoff.count()) * retry_.backoff_multiplier));
        }
    }
    if (last_status != 0) throw EndpointError(last_status, last_body);
    throw TransportError("request to " + scheme_host_port_ + path_ + " failed after " +
                         std::to_string(retry_.max_attempts) + " attempt(s): " + last_error);
}

std::string_view to_string(CaptureMode mode) {
    switch (mode) {
        case CaptureMode::Off: return "off";
        case CaptureMode::Record: return "record";
        case CaptureMode::Replay: return "replay";
    }
    return "off";
}

CaptureMode capture_mode_from_string(std::string_view s) {
    if (s == "off") return CaptureMode::Off;
    if (s == "record") return CaptureMode::Record;
    if (s == "replay") return CaptureMode::Replay;
    throw ConfigError("unknown capture mode '" + std::string(s) + "'");
}

CaptureClient::CaptureClient(std::unique_ptr<ChatClient> inner, CaptureMode mode, std::string path)
    : inner_(std::move(inner)), mode_(mode), path_(std::move(path)) {
    if (mode_ == CaptureMode::Record) {
        if (!inner_) throw std::invalid_argument("record mode needs a client to forward to");
        out_.open(path_, std::ios::binary | std::ios::trunc);
        if (!out_) throw Error("cannot write capture file '" + path_ + "'");
    } else if (mode_ == CaptureMode::Replay) {
        std::string content;
        try {
            content = text::read_file(path_);
        } catch (const Error&) {
            throw Error("replay capture file '" + path_ + "' does not exist or is unreadable");
        }
        int lineno = 0;
        for (auto line : text::split_lines(content)) {
            ++lineno;
            if (text::trim(line).empty()) continue;
            try {
                auto j = nlohmann::json::parse(line);
                replay_[j.at("request").dump()].push_back(j.at("response").get<std::string>());
            } catch (const nlohmann::json::exception& e) {
                throw Error("capture file '" + path_ + "' line " + std::to_string(lineno) + ": " + e.what());
            }
        }
    } else if (!inner_) {
        throw std::invalid_argument("capture mode off needs a client to forward to");
    }
}

std::string CaptureClient::complete(const Conversation& conv, const CompletionParams& params) {
    conv.validate_for_completion();
    check_params(params);
    auto request = request_body(conv, params);
    if (mode_ == CaptureMode::Replay) {
        std::lock_guard lock(mu_);
        ++calls_;
        auto it = replay_.find(request.dump());
        if (it == replay_.end() || it->second.empty())
            throw ReplayMismatch("no recorded response for this request in '" + path_ + "'");
        std::string response = std::move(it->second.front());
        it->second.pop_front();
        return response;
    }
    std::string response = inner_->complete(conv, params);
    std::lock_guard lock(mu_);
    ++calls_;
    if (mode_ == CaptureMode::Record) {
        out_ << nlohmann::json{{"request", request}, {"response", response}}.dump() << '\n';
        out_.flush();
    }
    return response;
}

std::size_t CaptureClient::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

std::string CallbackClient::complete(const Conversation& conv, const CompletionParams& params) {
    conv.validate_for_completion();
    check_params(params);
    {
        std::lock_guard lock(mu_);
        history_.push_back(conv);
    }
    return handler_(conv, params);
}

std::size_t CallbackClient::calls() const {
    std::lock_guard lock(mu_);
    return history_.size();
}

std::vector<Conversation> CallbackClient::history() const {
    std::lock_guard lock(mu_);
    return history_;
}

}  // namespace omega::llm
