#include "bqr/tokenizer.hpp"

#include <cctype>

namespace bqr {

namespace {

bool is_token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (is_token_byte(c)) {
            current.push_back(lowercase && c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) {
        auto c = static_cast<unsigned char>(ch);
        if (c < 0x80) ch = static_cast<char>(std::tolower(c));
    }
    return out;
}

std::string trim(std::string_view s) {
    auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(s[begin])) ++begin;
    while (end > begin && is_space(s[end - 1])) --end;
    return std::string(s.substr(begin, end - begin));
}

}  // namespace bqr
