#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "pairclass/tokenizer.hpp"

namespace pairclass {

// Ordered pair of surface words, optionally labeled. The unit of
// classification throughout.
struct WordPair {
    std::string a;
    std::string b;
    std::string label;  // empty = unlabeled

    WordPair() = default;
    WordPair(std::string a_, std::string b_, std::string label_ = {})
        : a(std::move(a_)), b(std::move(b_)), label(std::move(label_)) {
        if (a == b) throw std::invalid_argument("word pair members must differ: " + a);
    }

    bool same_words(const WordPair& o) const { return a == o.a && b == o.b; }

    std::string key() const { return a + ":" + b; }

    bool operator==(const WordPair&) const = default;
};

// A lemmatized corpus window with marked X/Y positions, owned by the pair
// whose variants matched it.
struct Phrase {
    std::vector<Token> tokens;
    std::size_t xPos = 0;
    std::size_t yPos = 0;

    bool operator==(const Phrase&) const = default;
};

} // namespace pairclass
