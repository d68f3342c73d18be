#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pairclass/corpus_index.hpp"
#include "pairclass/morphology.hpp"
#include "pairclass/word_pair.hpp"

namespace pairclass {

inline constexpr std::size_t kDefaultPhraseCap = 5000;

struct HarvestReport {
    WordPair pair;
    std::size_t phraseCount = 0;
    bool truncated = false;
    std::size_t variantCombinationsQueried = 0;
};

struct HarvestResult {
    std::vector<Phrase> phrases;  // multiset; duplicates kept
    HarvestReport report;
};

// Expand both pair members through their morphological variants, query both
// template orientations for every combination, and normalize. Deterministic
// for a fixed index; the cap keeps the first phrases in that order.
inline HarvestResult harvest(const CorpusIndex& index, const MorphRules& morph,
                             const WordPair& pair,
                             std::size_t maxPhrasesPerPair = kDefaultPhraseCap) {
    HarvestResult res;
    res.report.pair = pair;
    auto va = morph.variants(pair.a, &index);
    auto vb = morph.variants(pair.b, &index);
    bool over = false;
    for (const auto& a : va) {
        for (const auto& b : vb) {
            if (a == b) continue;
            ++res.report.variantCombinationsQueried;
            for (const auto& win : index.query_windows(a, b)) {
                if (res.phrases.size() >= maxPhrasesPerPair) {
                    over = true;
                    break;
                }
                res.phrases.push_back(morph.normalize_phrase(win));
            }
            if (over) break;
        }
        if (over) break;
    }
    res.report.phraseCount = res.phrases.size();
    res.report.truncated = over;
    return res;
}

// Line-oriented per-pair phrase cache, keyed by pair and corpus fingerprint.
// One phrase per line: xPos yPos token...
class PhraseCache {
public:
    explicit PhraseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    HarvestResult harvest(const CorpusIndex& index, const MorphRules& morph,
                          const WordPair& pair,
                          std::size_t maxPhrasesPerPair = kDefaultPhraseCap) {
        auto path = entry_path(pair, index.fingerprint(), maxPhrasesPerPair);
        if (std::filesystem::exists(path)) return load(path, pair);
        auto res = pairclass::harvest(index, morph, pair, maxPhrasesPerPair);
        store(path, res);
        return res;
    }

private:
    std::filesystem::path entry_path(const WordPair& pair, std::uint64_t fp,
                                     std::size_t cap) const {
        std::ostringstream name;
        name << sanitize(pair.a) << '_' << sanitize(pair.b) << '_' << std::hex << fp
             << std::dec << '_' << cap << ".phr";
        return dir_ / name.str();
    }

    static std::string sanitize(const std::string& w) {
        std::string out;
        for (char c : w)
            out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
        return out;
    }

    static HarvestResult load(const std::filesystem::path& path, const WordPair& pair) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot read phrase cache: " + path.string());
        HarvestResult res;
        res.report.pair = pair;
        std::string line;
        if (!std::getline(in, line) || line.rfind("pairclass-phrases v1", 0) != 0)
            throw std::runtime_error("bad phrase cache header: " + path.string());
        std::getline(in, line);  // "truncated 0|1" "queried N"
        {
            std::istringstream meta(line);
            std::string key;
            meta >> key >> res.report.truncated >> key >> res.report.variantCombinationsQueried;
        }
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            Phrase p;
            ls >> p.xPos >> p.yPos;
            std::string tok;
            while (ls >> tok) p.tokens.push_back(tok);
            res.phrases.push_back(std::move(p));
        }
        res.report.phraseCount = res.phrases.size();
        return res;
    }

    static void store(const std::filesystem::path& path, const HarvestResult& res) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write phrase cache: " + path.string());
        out << "pairclass-phrases v1\n";
        out << "truncated " << (res.report.truncated ? 1 : 0) << " queried "
            << res.report.variantCombinationsQueried << "\n";
        for (const auto& p : res.phrases) {
            out << p.xPos << ' ' << p.yPos;
            for (const auto& t : p.tokens) out << ' ' << t;
            out << '\n';
        }
    }

    std::filesystem::path dir_;
};

} // namespace pairclass
