#include "omega/stemmer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace omega::metrics {

namespace {

bool is_consonant(std::string_view w, std::size_t i) {
    switch (w[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u': return false;
        case 'y': return i == 0 ? true : !is_consonant(w, i - 1);
        default: return true;
    }
}

// m in [C](VC)^m[V]
int measure(std::string_view stem) {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < stem.size(); ++i) {
        bool vowel = !is_consonant(stem, i);
        if (!vowel && prev_vowel) ++m;
        prev_vowel = vowel;
    }
    return m;
}

bool has_vowel(std::string_view stem) {
    for (std::size_t i = 0; i < stem.size(); ++i)
        if (!is_consonant(stem, i)) return true;
    return false;
}

bool ends_double_consonant(std::string_view w) {
    auto n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

bool ends_cvc(std::string_view w) {
    auto n = w.size();
    if (n < 3) return false;
    char last = w[n - 1];
    return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) && last != 'w' &&
           last != 'x' && last != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
    std::string_view suffix;
    std::string_view replacement;
};

// First rule whose suffix matches decides; when its condition fails the
// step ends without trying shorter suffixes.
template <std::size_t N, typename Cond>
void apply_first(std::string& w, const std::array<Rule, N>& rules, Cond cond) {
    for (const auto& r : rules) {
        if (!ends_with(w, r.suffix)) continue;
        std::string_view stem(w.data(), w.size() - r.suffix.size());
        if (cond(stem, r.suffix)) w = std::string(stem) + std::string(r.replacement);
        return;
    }
}

void step1a(std::string& w) {
    if (ends_with(w, "sses")) w.erase(w.size() - 2);
    else if (ends_with(w, "ies")) w.erase(w.size() - 2);
    else if (ends_with(w, "ss")) return;
    else if (ends_with(w, "s")) w.pop_back();
}

void step1b(std::string& w) {
    if (ends_with(w, "eed")) {
        if (measure(std::string_view(w).substr(0, w.size() - 3)) > 0) w.pop_back();
        return;
    }
    bool removed = false;
    for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
        if (ends_with(w, suffix) && has_vowel(std::string_view(w).substr(0, w.size() - suffix.size()))) {
            w.erase(w.size() - suffix.size());
            removed = true;
            break;
        }
    }
    if (!removed) return;
    if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
        w += 'e';
    } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") && !ends_with(w, "z")) {
        w.pop_back();
    } else if (measure(w) == 1 && ends_cvc(w)) {
        w += 'e';
    }
}

void step1c(std::string& w) {
    if (ends_with(w, "y") && has_vowel(std::string_view(w).substr(0, w.size() - 1))) w.back() = 'i';
}

void step2(std::string& w) {
    static constexpr std::array<Rule, 20> rules{{
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},  {"anci", "ance"},   {"izer", "ize"},
        {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},  {"eli", "e"},       {"ousli", "ous"},
        {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},   {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},   {"iviti", "ive"},   {"biliti", "ble"},
    }};
    apply_first(w, rules, [](std::string_view stem, std::string_view) { return measure(stem) > 0; });
}

void step3(std::string& w) {
    static constexpr std::array<Rule, 7> rules{{
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"}, {"ical", "ic"}, {"ful", ""}, {"ness", ""},
    }};
    apply_first(w, rules, [](std::string_view stem, std::string_view) { return measure(stem) > 0; });
}

void step4(std::string& w) {
    static constexpr std::array<Rule, 19> rules{{
        {"al", ""},   {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""}, {"ible", ""},
        {"ant", ""},  {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ion", ""}, {"ou", ""},   {"ism", ""},
        {"ate", ""},  {"iti", ""},  {"ous", ""},  {"ive", ""}, {"ize", ""},
    }};
    apply_first(w, rules, [](std::string_view stem, std::string_view suffix) {
        if (measure(stem) <= 1) return false;
        if (suffix == "ion") return !stem.empty() && (stem.back() == 's' || stem.back() == 't');
        return true;
    });
}

void step5(std::string& w) {
    if (ends_with(w, "e")) {
        std::string_view stem(w.data(), w.size() - 1);
        int m = measure(stem);
        if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
    }
    if (measure(w) > 1 && ends_double_consonant(w) && ends_with(w, "l")) w.pop_back();
}

}  // namespace

std::string porter_stem(std::string_view word) {
    if (word.empty() || !std::all_of(word.begin(), word.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
        return std::string(word);
    std::string w(word);
    step1a(w);
    if (w.empty()) return w;
    step1b(w);
    step1c(w);
    step2(w);
    step3(w);
    step4(w);
    step5(w);
    return w;
}

}  // namespace omega::metrics
