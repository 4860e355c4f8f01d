#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace omega::text {

/// Splits on '\n'. A trailing newline does not produce an empty last element.
std::vector<std::string_view> split_lines(std::string_view text);

std::string_view trim(std::string_view s);
std::string_view trim_right(std::string_view s);
std::string to_lower(std::string_view s);

/// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Replaces every `{name}` placeholder using `lookup`; unknown names are left as-is.
template <typename Lookup>
std::string substitute(std::string_view tmpl, Lookup&& lookup) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl[i] == '{') {
            auto close = tmpl.find('}', i + 1);
            if (close != std::string_view::npos) {
                auto name = tmpl.substr(i + 1, close - i - 1);
                bool ident = !name.empty();
                for (char c : name) {
                    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) ident = false;
                }
                if (ident) {
                    if (const std::string* value = lookup(name)) {
                        out += *value;
                        i = close + 1;
                        continue;
                    }
                }
            }
        }
        out += tmpl[i++];
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Cuts `s` to at most `max_bytes` without splitting a UTF-8 sequence.
std::string_view utf8_prefix(std::string_view s, std::size_t max_bytes);
std::string_view utf8_suffix(std::string_view s, std::size_t max_bytes);

std::string read_file(const std::string& path);

}  // namespace omega::text
