// Serves canned chat completions for offline runs and capture recording.
//
//   omega-mock-llm --rules rules.json [--port 8000]
//
// rules.json: {"rules": [{"contains": "...", "reply": "..."}], "fallback": "..."}
// A rule matches when its text occurs in the system message, or failing
// that anywhere in the conversation. Prints the base URL, then serves until
// interrupted.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "omega/testing/mock_llm_server.hpp"
#include "omega/text.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"OpenAI-compatible mock chat-completions server", "omega-mock-llm"};
    std::string rules_path;
    int port = 0;
    app.add_option("--rules", rules_path, "Rules file")->required();
    app.add_option("--port", port, "Port on 127.0.0.1 (0 picks a free one)");
    CLI11_PARSE(app, argc, argv);

    std::vector<omega::testing::MockRule> rules;
    std::string fallback;
    try {
        auto doc = nlohmann::json::parse(omega::text::read_file(rules_path));
        for (const auto& r : doc.value("rules", nlohmann::json::array())) {
            rules.push_back({r.at("contains").get<std::string>(), r.at("reply").get<std::string>()});
        }
        fallback = doc.value("fallback", "fix: update code\n\nUpdate code.");
    } catch (const std::exception& e) {
        std::cerr << "omega-mock-llm: " << e.what() << '\n';
        return 1;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    try {
        omega::testing::MockLlmServer server(omega::testing::rule_responder(std::move(rules), fallback), port);
        std::cout << server.base_url() << std::endl;
        while (!g_stop) pause();
    } catch (const std::exception& e) {
        std::cerr << "omega-mock-llm: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
