#include <random>

#include <gtest/gtest.h>

#include "omega/fidex.hpp"
#include "omega/narrator.hpp"
#include "omega/text.hpp"
#include "support/paths.hpp"
#include "support/random_diff.hpp"

namespace omega::fidex {
namespace {

using llm::Role;

void expect_shape(const llm::Conversation& conv, const diff::UnifiedDiff& d) {
    ASSERT_EQ(conv.messages.size(), 6u);
    const Role roles[] = {Role::System, Role::User, Role::Assistant, Role::User, Role::Assistant, Role::User};
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(conv.messages[i].role, roles[i]) << i;
    EXPECT_EQ(conv.messages[4].content, narrator::render_narrative(d).text);
    const auto& last = conv.messages[5].content;
    EXPECT_NE(last.find(std::string(text::trim_right(d.raw_text))), std::string::npos);
    EXPECT_NE(last.find("Fine-grained statement types"), std::string::npos);
    EXPECT_NE(last.find("Order of changes"), std::string::npos);
    EXPECT_NE(last.find("Style and formatting"), std::string::npos);
    EXPECT_NO_THROW(conv.validate_for_completion());
}

TEST(FidexConversation, ReplacementFixture) {
    auto d = diff::parse_unified_diff(testsupport::read_test_file("golden/replacement.diff"));
    auto conv = build_fidex_conversation(d);
    expect_shape(conv, d);
    EXPECT_EQ(conv.messages[4].content, testsupport::read_test_file("golden/replacement.narrative.txt"));
    EXPECT_NE(conv.messages[0].content.find("factually and precisely"), std::string::npos);
    EXPECT_NE(conv.messages[2].content.find("To read a git diff"), std::string::npos);
}

TEST(FidexConversation, ShapeOverRandomDiffs) {
    std::mt19937 rng(321);
    auto dir = testsupport::make_temp_dir("fidex");
    for (int iter = 0; iter < 60; ++iter) {
        std::string combined;
        int files = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int f = 0; f < files; ++f)
            combined += testsupport::run_diff_tool(testsupport::random_pair(rng), rng, dir, "f" + std::to_string(f)).text;
        auto d = diff::parse_unified_diff(combined);
        SCOPED_TRACE(combined);
        expect_shape(build_fidex_conversation(d), d);
    }
    std::filesystem::remove_all(dir);
}

TEST(ExplainDiff, OneLiveCompletionAnsweringTheLastMessage) {
    auto d = diff::parse_unified_diff(testsupport::read_test_file("golden/replacement.diff"));
    llm::CallbackClient client([](const llm::Conversation&, const llm::CompletionParams&) { return "explained"; });
    auto out = explain_diff(d, client, {"m", 0.0, 100});
    EXPECT_EQ(out.text, "explained");
    ASSERT_EQ(client.calls(), 1u);
    EXPECT_EQ(client.history()[0], build_fidex_conversation(d));
}

TEST(ExplainDiff, EmptyDiffSkipsTheModel) {
    llm::CallbackClient client([](const llm::Conversation&, const llm::CompletionParams&) { return "x"; });
    EXPECT_EQ(explain_diff(diff::parse_unified_diff(""), client, {"m", 0.0, 100}).text, "No changes.");
    EXPECT_EQ(client.calls(), 0u);
}

TEST(ExplainDiff, PerFileMode) {
    std::string text =
        "diff --git a/A.java b/A.java\n--- a/A.java\n+++ b/A.java\n@@ -1 +1 @@\n-a\n+b\n"
        "diff --git a/B.java b/B.java\n--- a/B.java\n+++ b/B.java\n@@ -1 +1 @@\n-c\n+d\n";
    auto d = diff::parse_unified_diff(text);
    int n = 0;
    llm::CallbackClient client([&](const llm::Conversation&, const llm::CompletionParams&) {
        return "part " + std::to_string(++n);
    });
    auto out = explain_diff(d, client, {"m", 0.0, 100}, Mode::PerFile);
    EXPECT_EQ(out.text, "part 1\n\npart 2");
    ASSERT_EQ(client.calls(), 2u);
    auto second = client.history()[1];
    EXPECT_NE(second.messages[5].content.find("B.java"), std::string::npos);
    EXPECT_EQ(second.messages[5].content.find("A.java"), std::string::npos);
    EXPECT_EQ(second.messages[4].content.rfind("File B.java", 0), 0u);
}

}  // namespace
}  // namespace omega::fidex
