#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace pairclass {

using Token = std::string;

// Lowercase alphanumeric runs. An apostrophe is a hard boundary like any
// other punctuation, so possessive "mason's" becomes [mason, s] with the
// "s" kept as its own token.
inline std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    Token cur;
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

} // namespace pairclass
