#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <string>
#include <vector>

#include "support/paths.hpp"

namespace omega::testsupport {

// Deliberately separate from the library lexer: a plain scanner that drops
// comments and returns every other token as text.
struct Scan {
    std::vector<std::string> tokens;
    int comments = 0;
};

inline Scan scan(const std::string& s) {
    Scan out;
    std::size_t i = 0, n = s.size();
    auto word = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; };
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
        } else if (s.compare(i, 2, "//") == 0) {
            ++out.comments;
            while (i < n && s[i] != '\n') ++i;
        } else if (s.compare(i, 2, "/*") == 0) {
            ++out.comments;
            auto end = s.find("*/", i + 2);
            i = end == std::string::npos ? n : end + 2;
        } else if (s.compare(i, 3, "\"\"\"") == 0) {
            std::size_t j = i + 3;
            while (j < n && s.compare(j, 3, "\"\"\"") != 0) j += s[j] == '\\' ? 2 : 1;
            j = std::min(n, j + 3);
            out.tokens.push_back(s.substr(i, j - i));
            i = j;
        } else if (c == '"' || c == '\'') {
            std::size_t j = i + 1;
            while (j < n && s[j] != static_cast<char>(c) && s[j] != '\n') j += s[j] == '\\' ? 2 : 1;
            j = std::min(n, j + 1);
            out.tokens.push_back(s.substr(i, j - i));
            i = j;
        } else if (word(c)) {
            std::size_t j = i;
            while (j < n && word(static_cast<unsigned char>(s[j]))) ++j;
            out.tokens.push_back(s.substr(i, j - i));
            i = j;
        } else {
            out.tokens.emplace_back(1, s[i++]);
        }
    }
    return out;
}

inline std::vector<std::filesystem::path> java_corpus() {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(test_dir() / "java_corpus"))
        if (e.path().extension() == ".java") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace omega::testsupport
