#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairclass/tasks.hpp"

namespace pairclass {

// Planted-relation corpus generator. Each relation family is expressed
// through its own connective phrase, so pairs of one family share patterns
// and pairs of different families do not.
struct SyntheticSpec {
    std::size_t families = 4;
    std::size_t pairsPerFamily = 10;
    std::size_t questions = 20;
    std::size_t choicesPerQuestion = 5;
    std::size_t sentencesPerPair = 8;
    std::uint64_t seed = 0;
};

struct SyntheticOutput {
    std::string corpusPath;
    std::string analogyTaskPath;
    std::string pairTaskPath;
};

namespace detail {

inline std::string synth_word(std::size_t id) {
    static const char* onsets[] = {"b",  "d",  "f",  "g",  "k",  "l",  "m",
                                   "n",  "p",  "r",  "t",  "v",  "br", "dr",
                                   "gl", "kr", "pl", "tr", "sk", "sn"};
    static const char* nuclei[] = {"a", "e", "i", "o", "u", "ai", "au", "ea", "ou", "oi"};
    static const char* codas[] = {"b", "d", "g", "k", "l", "m", "n", "p", "r", "t"};
    std::string w;
    w += onsets[id % 20];
    w += nuclei[(id / 20) % 10];
    w += codas[(id / 200) % 10];
    w += nuclei[(id / 2000) % 10];
    w += codas[(id / 20000) % 10];
    return w;
}

inline std::vector<std::string> family_sentence(std::size_t family, const std::string& a,
                                                const std::string& b) {
    // one connective per family; families 1 and 3 put Y before X
    switch (family % 4) {
        case 0: return {"the", a, "cut", "the", b, "with", "care"};
        case 1: return {"the", b, "orbit", "the", a, "at", "night"};
        case 2: return {a, "is", "part", "of", b, "overall"};
        default: return {"some", b, "chase", "every", a, "around"};
    }
}

} // namespace detail

inline SyntheticOutput generate_synthetic(const std::string& outDir,
                                          const SyntheticSpec& spec) {
    if (spec.families < 2 || spec.pairsPerFamily < 2 || spec.questions < 1 ||
        spec.choicesPerQuestion < 2)
        throw std::invalid_argument("gen-synthetic: degenerate spec");
    if (spec.choicesPerQuestion > spec.families + 1)
        throw std::invalid_argument(
            "gen-synthetic: need one distractor family per non-answer choice");
    std::filesystem::create_directories(outDir);
    Rng rng(spec.seed);

    // distinct word pairs per family
    std::vector<std::vector<WordPair>> families(spec.families);
    std::size_t wordId = 0;
    for (std::size_t f = 0; f < spec.families; ++f)
        for (std::size_t p = 0; p < spec.pairsPerFamily; ++p) {
            std::string a = detail::synth_word(wordId++);
            std::string b = detail::synth_word(wordId++);
            families[f].emplace_back(a, b, "family" + std::to_string(f));
        }

    // corpus: every pair's connective sentence, repeated, shuffled
    std::vector<std::vector<std::string>> sentences;
    for (std::size_t f = 0; f < spec.families; ++f)
        for (const auto& pr : families[f])
            for (std::size_t s = 0; s < spec.sentencesPerPair; ++s)
                sentences.push_back(detail::family_sentence(f, pr.a, pr.b));
    // filler noise
    for (std::size_t s = 0; s < sentences.size() / 4; ++s) {
        std::vector<std::string> filler;
        for (int w = 0; w < 6; ++w)
            filler.push_back(detail::synth_word(100000 + rng.below(500)));
        sentences.push_back(std::move(filler));
    }
    for (std::size_t i = sentences.size(); i > 1; --i)
        std::swap(sentences[i - 1], sentences[rng.below(i)]);

    SyntheticOutput out;
    out.corpusPath = (std::filesystem::path(outDir) / "corpus.txt").string();
    {
        std::ofstream corpus(out.corpusPath);
        if (!corpus) throw std::runtime_error("cannot write " + out.corpusPath);
        for (const auto& s : sentences) {
            for (std::size_t i = 0; i < s.size(); ++i) corpus << (i ? " " : "") << s[i];
            corpus << ".\n";
        }
    }

    // analogy questions: stem and answer from one family, each distractor
    // from a distinct other family
    out.analogyTaskPath = (std::filesystem::path(outDir) / "analogy.task").string();
    {
        std::ofstream task(out.analogyTaskPath);
        if (!task) throw std::runtime_error("cannot write " + out.analogyTaskPath);
        task << "pairclass-task sat v1\n";
        for (std::size_t q = 0; q < spec.questions; ++q) {
            std::size_t f = rng.below(spec.families);
            std::size_t stemIdx = rng.below(families[f].size());
            std::size_t ansIdx = rng.below(families[f].size() - 1);
            if (ansIdx >= stemIdx) ++ansIdx;
            std::vector<std::string> choices;
            choices.push_back(families[f][ansIdx].key());
            std::size_t df = f;
            for (std::size_t c = 1; c < spec.choicesPerQuestion; ++c) {
                df = (df + 1) % spec.families;
                if (df == f) df = (df + 1) % spec.families;
                const auto& fam = families[df];
                choices.push_back(fam[rng.below(fam.size())].key());
            }
            std::size_t answerPos = rng.below(choices.size());
            std::swap(choices[0], choices[answerPos]);
            task << "Q " << families[f][stemIdx].key() << " |";
            for (const auto& c : choices) task << " " << c;
            task << " | " << answerPos << "\n";
        }
    }

    // the same pairs as a labeled classification task
    out.pairTaskPath = (std::filesystem::path(outDir) / "pairs.task").string();
    {
        std::ofstream task(out.pairTaskPath);
        if (!task) throw std::runtime_error("cannot write " + out.pairTaskPath);
        task << "pairclass-task noun-modifier v1\n";
        for (const auto& fam : families)
            for (const auto& pr : fam) task << "P " << pr.key() << " " << pr.label << "\n";
    }
    return out;
}

} // namespace pairclass
