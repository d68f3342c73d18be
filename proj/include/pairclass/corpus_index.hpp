#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pairclass/tokenizer.hpp"

namespace pairclass {

// Gap templates: "[0-1 words] X [0-3 words] Y [0-1 words]" and the same
// with Y before X. Longest admissible window is 7 tokens.
inline constexpr std::size_t kMaxGap = 3;
inline constexpr std::size_t kMaxContext = 1;
inline constexpr std::size_t kMaxWindowLen = 2 + kMaxGap + 2 * kMaxContext;

enum class PairOrder { XY, YX };

struct RawWindow {
    std::vector<Token> tokens;
    std::size_t xPos = 0;
    std::size_t yPos = 0;
    PairOrder order = PairOrder::XY;

    bool operator==(const RawWindow&) const = default;
};

class CorpusIndex {
public:
    using WordId = std::uint32_t;
    struct Posting {
        std::uint32_t doc;
        std::uint32_t pos;
    };

    void add_document(const std::string& text) {
        add_tokens(tokenize(text));
    }

    void add_tokens(const std::vector<Token>& tokens) {
        std::vector<WordId> ids;
        ids.reserve(tokens.size());
        auto doc = static_cast<std::uint32_t>(docs_.size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            WordId id = intern(tokens[i]);
            ids.push_back(id);
            postings_[id].push_back({doc, static_cast<std::uint32_t>(i)});
            ++totalTokens_;
        }
        docs_.push_back(std::move(ids));
    }

    std::size_t document_count() const { return docs_.size(); }
    std::size_t total_tokens() const { return totalTokens_; }
    std::size_t vocabulary_size() const { return words_.size(); }

    bool contains(const Token& w) const { return vocab_.count(w) != 0; }

    const std::string& word(WordId id) const { return words_[id]; }

    std::vector<RawWindow> query_windows(const Token& x, const Token& y) const {
        if (x == y)
            throw std::invalid_argument("query_windows: pair members must differ: " + x);
        struct Occ {
            std::uint32_t doc, firstPos, secondPos;
            std::uint8_t lead, trail;
            PairOrder order;
        };
        std::vector<Occ> occs;
        auto collect = [&](const Token& first, const Token& second, PairOrder order) {
            auto fid = vocab_.find(first);
            auto sid = vocab_.find(second);
            if (fid == vocab_.end() || sid == vocab_.end()) return;
            const auto& fp = postings_[fid->second];
            const auto& sp = postings_[sid->second];
            for (const auto& p : fp) {
                // second member within (pos, pos + 1 + kMaxGap], same doc
                Posting lo{p.doc, p.pos + 1};
                auto it = std::lower_bound(sp.begin(), sp.end(), lo,
                    [](const Posting& a, const Posting& b) {
                        return a.doc != b.doc ? a.doc < b.doc : a.pos < b.pos;
                    });
                std::size_t docLen = docs_[p.doc].size();
                for (; it != sp.end() && it->doc == p.doc &&
                       it->pos <= p.pos + 1 + kMaxGap; ++it) {
                    std::uint8_t maxLead = p.pos >= 1 ? 1 : 0;
                    std::uint8_t maxTrail = it->pos + 1 < docLen ? 1 : 0;
                    for (std::uint8_t lead = 0; lead <= maxLead; ++lead)
                        for (std::uint8_t trail = 0; trail <= maxTrail; ++trail)
                            occs.push_back({p.doc, p.pos, it->pos, lead, trail, order});
                }
            }
        };
        collect(x, y, PairOrder::XY);
        collect(y, x, PairOrder::YX);
        std::sort(occs.begin(), occs.end(), [](const Occ& a, const Occ& b) {
            return std::tie(a.doc, a.firstPos, a.secondPos, a.lead, a.trail, a.order) <
                   std::tie(b.doc, b.firstPos, b.secondPos, b.lead, b.trail, b.order);
        });
        std::vector<RawWindow> out;
        out.reserve(occs.size());
        for (const auto& o : occs) {
            RawWindow w;
            std::size_t start = o.firstPos - o.lead;
            std::size_t end = o.secondPos + o.trail;  // inclusive
            for (std::size_t i = start; i <= end; ++i)
                w.tokens.push_back(words_[docs_[o.doc][i]]);
            std::size_t firstRel = o.firstPos - start;
            std::size_t secondRel = o.secondPos - start;
            w.order = o.order;
            if (o.order == PairOrder::XY) {
                w.xPos = firstRel;
                w.yPos = secondRel;
            } else {
                w.yPos = firstRel;
                w.xPos = secondRel;
            }
            out.push_back(std::move(w));
        }
        return out;
    }

    // A short digest of the corpus contents, used to key the phrase cache.
    std::uint64_t fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(totalTokens_);
        for (const auto& doc : docs_) {
            mix(doc.size());
            for (WordId id : doc)
                for (char c : words_[id]) mix(static_cast<unsigned char>(c));
        }
        return h;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write index file: " + path);
        out.write(kMagic, 4);
        write_u32(out, kVersion);
        write_u64(out, words_.size());
        for (const auto& w : words_) {
            write_u32(out, static_cast<std::uint32_t>(w.size()));
            out.write(w.data(), static_cast<std::streamsize>(w.size()));
        }
        write_u64(out, docs_.size());
        for (const auto& doc : docs_) {
            write_u64(out, doc.size());
            for (WordId id : doc) write_u32(out, id);
        }
        if (!out) throw std::runtime_error("index write failed: " + path);
    }

    static CorpusIndex load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open index file: " + path);
        char magic[4];
        in.read(magic, 4);
        if (!in || std::string_view(magic, 4) != kMagic)
            throw std::runtime_error("not a pairclass index file: " + path);
        if (read_u32(in) != kVersion)
            throw std::runtime_error("unsupported index version: " + path);
        CorpusIndex idx;
        std::uint64_t nw = read_u64(in);
        idx.words_.reserve(nw);
        for (std::uint64_t i = 0; i < nw; ++i) {
            std::uint32_t len = read_u32(in);
            std::string w(len, '\0');
            in.read(w.data(), len);
            idx.vocab_[w] = static_cast<WordId>(idx.words_.size());
            idx.words_.push_back(std::move(w));
        }
        idx.postings_.resize(idx.words_.size());
        std::uint64_t nd = read_u64(in);
        for (std::uint64_t d = 0; d < nd; ++d) {
            std::uint64_t len = read_u64(in);
            std::vector<WordId> doc(len);
            for (auto& id : doc) id = read_u32(in);
            for (std::size_t i = 0; i < doc.size(); ++i) {
                if (doc[i] >= idx.words_.size())
                    throw std::runtime_error("corrupt index file: " + path);
                idx.postings_[doc[i]].push_back(
                    {static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(i)});
            }
            idx.totalTokens_ += len;
            idx.docs_.push_back(std::move(doc));
        }
        if (!in) throw std::runtime_error("truncated index file: " + path);
        return idx;
    }

private:
    static constexpr const char* kMagic = "PCIX";
    static constexpr std::uint32_t kVersion = 1;

    WordId intern(const Token& w) {
        auto [it, inserted] = vocab_.try_emplace(w, static_cast<WordId>(words_.size()));
        if (inserted) {
            words_.push_back(w);
            postings_.emplace_back();
        }
        return it->second;
    }

    static void write_u32(std::ostream& out, std::uint32_t v) {
        char b[4] = {char(v), char(v >> 8), char(v >> 16), char(v >> 24)};
        out.write(b, 4);
    }
    static void write_u64(std::ostream& out, std::uint64_t v) {
        char b[8];
        for (int i = 0; i < 8; ++i) b[i] = char(v >> (8 * i));
        out.write(b, 8);
    }
    static std::uint32_t read_u32(std::istream& in) {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 |
               std::uint32_t(b[2]) << 16 | std::uint32_t(b[3]) << 24;
    }
    static std::uint64_t read_u64(std::istream& in) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
        return v;
    }

    std::unordered_map<std::string, WordId> vocab_;
    std::vector<std::string> words_;
    std::vector<std::vector<Posting>> postings_;
    std::vector<std::vector<WordId>> docs_;
    std::size_t totalTokens_ = 0;
};

// Builds an index from UTF-8 plain-text files, one document per file.
inline CorpusIndex build_index(const std::vector<std::string>& corpusFiles) {
    CorpusIndex idx;
    for (const auto& path : corpusFiles) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read corpus file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        idx.add_document(buf.str());
    }
    return idx;
}

} // namespace pairclass
