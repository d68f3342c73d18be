#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "pairclass/word_pair.hpp"

namespace pairclass {

// A token template over {X, Y, literal word, single-token wildcard}. Slots
// are stored as their rendered form: "X", "Y", "*", or the lowercase
// literal, which cannot collide with the markers.
struct Pattern {
    std::vector<std::string> slots;

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (i) out.push_back(' ');
            out += slots[i];
        }
        return out;
    }

    static Pattern parse(const std::string& s) {
        Pattern p;
        std::size_t start = 0;
        while (start <= s.size()) {
            std::size_t sp = s.find(' ', start);
            if (sp == std::string::npos) sp = s.size();
            if (sp > start) p.slots.push_back(s.substr(start, sp - start));
            start = sp + 1;
        }
        return p;
    }

    auto operator<=>(const Pattern&) const = default;
};

// All wildcard patterns of a phrase: X/Y fixed at their positions, each of
// the n-2 context tokens independently literal or wildcard. 2^(n-2)
// patterns, fewer only when duplicate context tokens collapse.
inline std::vector<Pattern> patterns_of(const Phrase& phrase) {
    std::vector<std::size_t> ctx;
    for (std::size_t i = 0; i < phrase.tokens.size(); ++i)
        if (i != phrase.xPos && i != phrase.yPos) ctx.push_back(i);

    std::vector<std::string> base(phrase.tokens.size());
    base[phrase.xPos] = "X";
    base[phrase.yPos] = "Y";

    std::vector<Pattern> out;
    out.reserve(std::size_t{1} << ctx.size());
    for (std::size_t mask = 0; mask < (std::size_t{1} << ctx.size()); ++mask) {
        Pattern p{base};
        for (std::size_t j = 0; j < ctx.size(); ++j)
            p.slots[ctx[j]] = (mask >> j) & 1 ? phrase.tokens[ctx[j]] : "*";
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace pairclass
