#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairclass/word_pair.hpp"

namespace pairclass {

// splitmix64; self-contained so streams are reproducible across platforms
// and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::size_t below(std::size_t n) {
        if (n == 0) throw std::invalid_argument("Rng::below(0)");
        // rejection sampling keeps the draw unbiased
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

    double unit() { return (next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// A multiple-choice question. Analogy questions have pair-valued stems and
// choices (b nonempty); synonym questions have single words (b empty).
struct ChoiceQuestion {
    std::string stemA, stemB;  // stemB empty for single-word stems
    struct Choice {
        std::string a, b;  // b empty for single-word choices
    };
    std::vector<Choice> choices;
    std::size_t answerIndex = 0;

    bool pair_valued() const { return !stemB.empty(); }

    void validate() const {
        if (choices.size() < 2 || choices.size() > 8)
            throw std::invalid_argument("question needs 2..8 choices");
        if (answerIndex >= choices.size())
            throw std::invalid_argument("answer index out of range");
    }
};

struct EvalResult {
    struct Item {
        std::string id;
        std::string predicted;
        std::string gold;
        std::vector<double> probabilities;
        bool correct = false;
    };
    double accuracy = 0.0;
    double baseline = 0.0;
    std::vector<Item> perItem;
    bool foldFallback = false;

    void finalize() {
        std::size_t correct = 0;
        for (const auto& it : perItem) correct += it.correct ? 1 : 0;
        accuracy = perItem.empty() ? 0.0 : double(correct) / double(perItem.size());
    }
};

inline double majority_baseline(const std::vector<std::string>& labels) {
    std::map<std::string, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    std::size_t best = 0;
    for (const auto& [l, c] : counts) best = std::max(best, c);
    return labels.empty() ? 0.0 : double(best) / double(labels.size());
}

// ---- SAT-style analogy framing -------------------------------------------

struct FramedAnalogy {
    std::vector<WordPair> train;  // stem positive + sampled negative
    std::vector<WordPair> test;   // the choices, unlabeled
};

inline constexpr const char* kPositiveLabel = "positive";
inline constexpr const char* kNegativeLabel = "negative";

// One positive (the stem) plus one random other-question stem as negative.
inline FramedAnalogy frame_analogy_question(const ChoiceQuestion& q,
                                            const std::vector<WordPair>& bankStems,
                                            Rng& rng) {
    if (bankStems.empty())
        throw std::invalid_argument("frame_analogy_question: empty stem bank");
    q.validate();
    FramedAnalogy f;
    f.train.emplace_back(q.stemA, q.stemB, kPositiveLabel);
    const WordPair& neg = bankStems[rng.below(bankStems.size())];
    if (neg.a == q.stemA && neg.b == q.stemB)
        throw std::invalid_argument("frame_analogy_question: bank contains the question stem");
    f.train.emplace_back(neg.a, neg.b, kNegativeLabel);
    for (const auto& c : q.choices) f.test.emplace_back(c.a, c.b);
    return f;
}

// Scores unlabeled test pairs against a labeled training set, returning the
// positive-class probability per test pair. The corpus pipeline implements
// this; tests may inject stubs.
class PairScorer {
public:
    virtual ~PairScorer() = default;
    virtual std::vector<double> score(const std::vector<WordPair>& train,
                                      const std::vector<WordPair>& test) = 0;
};

struct AnalogySolution {
    std::size_t chosenIndex = 0;
    std::vector<double> probabilities;  // arithmetic mean over trials
    std::size_t trialsRun = 0;
};

// Bagging over re-sampled negative stems: `trials` independent framings,
// probabilities averaged, argmax wins (ties to the lowest index).
inline AnalogySolution solve_analogy(const ChoiceQuestion& q,
                                     const std::vector<WordPair>& bankStems,
                                     PairScorer& scorer, std::size_t trials, Rng& rng) {
    if (trials < 1) throw std::invalid_argument("solve_analogy: trials must be >= 1");
    AnalogySolution sol;
    sol.probabilities.assign(q.choices.size(), 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        FramedAnalogy f = frame_analogy_question(q, bankStems, rng);
        auto probs = scorer.score(f.train, f.test);
        if (probs.size() != q.choices.size())
            throw std::runtime_error("scorer returned wrong number of probabilities");
        for (std::size_t i = 0; i < probs.size(); ++i) sol.probabilities[i] += probs[i];
        ++sol.trialsRun;
    }
    for (double& p : sol.probabilities) p /= double(trials);
    sol.chosenIndex = static_cast<std::size_t>(
        std::max_element(sol.probabilities.begin(), sol.probabilities.end()) -
        sol.probabilities.begin());
    return sol;
}

// ---- synonym framing ------------------------------------------------------

// One (stem, choice) pair per choice; the gold pair is positive. Sentence
// context, when the source question has one, plays no part.
inline std::vector<WordPair> frame_synonym_question(const ChoiceQuestion& q) {
    q.validate();
    if (q.pair_valued())
        throw std::invalid_argument("frame_synonym_question: needs single-word stem");
    std::vector<WordPair> out;
    for (std::size_t i = 0; i < q.choices.size(); ++i)
        out.emplace_back(q.stemA, q.choices[i].a,
                         i == q.answerIndex ? kPositiveLabel : kNegativeLabel);
    return out;
}

// ---- cross-validation -----------------------------------------------------

struct FoldPlan {
    std::vector<std::size_t> assignments;  // example -> fold
    std::size_t folds = 0;
    std::uint64_t seed = 0;
};

// Stratified: shuffle within each class, deal round-robin with a fold
// cursor shared across classes so fold sizes differ by at most one.
inline FoldPlan make_fold_plan(const std::vector<std::string>& labels, std::size_t folds,
                               Rng& rng) {
    if (folds < 2) throw std::invalid_argument("make_fold_plan: folds must be >= 2");
    if (labels.size() < folds)
        throw std::invalid_argument("make_fold_plan: fewer examples than folds");
    FoldPlan plan;
    plan.folds = folds;
    plan.assignments.assign(labels.size(), 0);
    std::map<std::string, std::vector<std::size_t>> byClass;
    for (std::size_t i = 0; i < labels.size(); ++i) byClass[labels[i]].push_back(i);
    std::size_t cursor = 0;
    for (auto& [label, members] : byClass) {
        for (std::size_t i = members.size(); i > 1; --i)
            std::swap(members[i - 1], members[rng.below(i)]);
        for (std::size_t idx : members) plan.assignments[idx] = (cursor++) % folds;
    }
    return plan;
}

// Per-fold view handed to the pipeline. Labels go through `label`, which
// records every read and refuses test-fold examples outright.
struct FoldContext {
    const std::vector<WordPair>* pairs = nullptr;
    std::vector<std::size_t> trainIdx;
    std::vector<std::size_t> testIdx;
    std::function<std::string(std::size_t)> label;
};

class FoldPipeline {
public:
    virtual ~FoldPipeline() = default;
    // probabilities per test example, aligned with `classes`
    virtual std::vector<std::vector<double>> run_fold(const FoldContext& ctx,
                                                      const std::vector<std::string>& classes) = 0;
};

struct LabelRead {
    std::size_t fold;
    std::size_t example;
};

struct CrossvalResult {
    std::vector<std::string> classes;               // sorted
    std::vector<std::vector<double>> probabilities; // one distribution per example
    std::vector<std::string> predicted;             // argmax class per example
    std::vector<LabelRead> labelLog;
    FoldPlan plan;
    bool foldFallback = false;
    std::vector<bool> scored;  // false for examples sacrificed to the fallback
};

inline CrossvalResult crossval_evaluate(const std::vector<WordPair>& pairs,
                                        std::size_t folds, Rng& rng,
                                        FoldPipeline& pipeline) {
    std::vector<std::string> labels;
    labels.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.label.empty())
            throw std::invalid_argument("crossval_evaluate: unlabeled pair " + p.key());
        labels.push_back(p.label);
    }
    CrossvalResult res;
    res.plan = make_fold_plan(labels, folds, rng);
    for (const auto& l : labels)
        if (std::find(res.classes.begin(), res.classes.end(), l) == res.classes.end())
            res.classes.push_back(l);
    std::sort(res.classes.begin(), res.classes.end());

    // fold-merge fallback: a class whose examples all landed in one fold
    // gets half of them reassigned to the next fold, so training splits
    // keep every class whenever possible
    std::map<std::string, std::vector<std::size_t>> byClass;
    for (std::size_t i = 0; i < labels.size(); ++i) byClass[labels[i]].push_back(i);
    for (auto& [label, members] : byClass) {
        if (members.size() < 2) continue;
        std::size_t f0 = res.plan.assignments[members[0]];
        bool allSame = std::all_of(members.begin(), members.end(), [&](std::size_t i) {
            return res.plan.assignments[i] == f0;
        });
        if (allSame) {
            res.foldFallback = true;
            for (std::size_t i = 0; i < members.size() / 2; ++i)
                res.plan.assignments[members[i]] = (f0 + 1) % folds;
        }
    }

    res.probabilities.assign(pairs.size(), {});
    res.predicted.assign(pairs.size(), "");
    res.scored.assign(pairs.size(), true);

    for (std::size_t f = 0; f < folds; ++f) {
        FoldContext ctx;
        ctx.pairs = &pairs;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            (res.plan.assignments[i] == f ? ctx.testIdx : ctx.trainIdx).push_back(i);
        if (ctx.testIdx.empty()) continue;
        std::vector<bool> isTest(pairs.size(), false);
        for (std::size_t i : ctx.testIdx) isTest[i] = true;
        ctx.label = [&res, &labels, &isTest, f](std::size_t i) -> std::string {
            res.labelLog.push_back({f, i});
            if (isTest[i])
                throw std::logic_error("label of test-fold example read during training");
            return labels[i];
        };
        auto probs = pipeline.run_fold(ctx, res.classes);
        if (probs.size() != ctx.testIdx.size())
            throw std::runtime_error("fold pipeline returned wrong number of rows");
        for (std::size_t t = 0; t < ctx.testIdx.size(); ++t) {
            std::size_t i = ctx.testIdx[t];
            if (probs[t].size() != res.classes.size())
                throw std::runtime_error("fold pipeline returned wrong row width");
            res.probabilities[i] = probs[t];
            auto best = std::max_element(probs[t].begin(), probs[t].end());
            res.predicted[i] = res.classes[best - probs[t].begin()];
        }
    }
    return res;
}

// Accuracy as plain per-pair classification (the labeled-pair tasks).
inline EvalResult to_eval_result(const std::vector<WordPair>& pairs,
                                 const CrossvalResult& cv) {
    EvalResult ev;
    ev.foldFallback = cv.foldFallback;
    std::vector<std::string> labels;
    for (const auto& p : pairs) labels.push_back(p.label);
    ev.baseline = majority_baseline(labels);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        EvalResult::Item it;
        it.id = pairs[i].key();
        it.gold = pairs[i].label;
        it.predicted = cv.predicted[i];
        it.probabilities = cv.probabilities[i];
        it.correct = it.predicted == it.gold;
        ev.perItem.push_back(std::move(it));
    }
    ev.finalize();
    return ev;
}

// Choice-task scoring: within each question, the choice whose pair has the
// highest positive probability wins; ties go to the lowest index.
inline EvalResult score_choice_task(const std::vector<ChoiceQuestion>& questions,
                                    const std::vector<std::vector<double>>& perPairPositive) {
    if (questions.size() != perPairPositive.size())
        throw std::invalid_argument("score_choice_task: size mismatch");
    EvalResult ev;
    double invChoices = 0;
    for (std::size_t qi = 0; qi < questions.size(); ++qi) {
        const auto& q = questions[qi];
        const auto& probs = perPairPositive[qi];
        if (probs.size() != q.choices.size())
            throw std::invalid_argument("score_choice_task: probability row mismatch");
        std::size_t best = static_cast<std::size_t>(
            std::max_element(probs.begin(), probs.end()) - probs.begin());
        EvalResult::Item it;
        it.id = q.stemA + (q.stemB.empty() ? "" : ":" + q.stemB);
        it.predicted = std::to_string(best);
        it.gold = std::to_string(q.answerIndex);
        it.probabilities = probs;
        it.correct = best == q.answerIndex;
        ev.perItem.push_back(std::move(it));
        invChoices += 1.0 / double(q.choices.size());
    }
    ev.baseline = questions.empty() ? 0.0 : invChoices / double(questions.size());
    ev.finalize();
    return ev;
}

} // namespace pairclass
