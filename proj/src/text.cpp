#include "catscore/text.hpp"

#include <cctype>

namespace catscore {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (auto& c : out) {
        if (static_cast<unsigned char>(c) < 0x80) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

Tokens tokenize(std::string_view text) {
    Tokens tokens;
    for (auto word : split_words(text)) {
        std::size_t b = 0, e = word.size();
        while (b < e && is_punct(word[b])) ++b;
        while (e > b && is_punct(word[e - 1])) --e;
        if (e > b) tokens.push_back(to_lower(word.substr(b, e - b)));
    }
    return tokens;
}

std::string join(const Tokens& tokens, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += sep;
        out += tokens[i];
    }
    return out;
}

std::string normalize(std::string_view text) {
    return join(tokenize(text));
}

}  // namespace catscore
