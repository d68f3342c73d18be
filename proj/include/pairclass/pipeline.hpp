#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pairclass/features.hpp"
#include "pairclass/harvest.hpp"
#include "pairclass/model.hpp"
#include "pairclass/task_io.hpp"
#include "pairclass/tasks.hpp"

namespace pairclass {

struct PipelineConfig {
    std::size_t k = kDefaultK;
    std::size_t maxPhrasesPerPair = kDefaultPhraseCap;
    KernelParams kernel;
    std::size_t trials = 10;
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    std::size_t calibrationFolds = 0;  // 0/1 = fit on training decision values
    std::string cacheDir;
    bool reuseFeatures = false;  // share one FeatureSpec across analogy trials
    std::size_t jobs = 0;        // 0 = hardware concurrency

    void validate() const {
        kernel.validate();
        if (k < 1 || trials < 1 || folds < 2 || maxPhrasesPerPair < 1)
            throw std::invalid_argument("config: numeric fields must be positive");
    }
};

struct TaskRunResult {
    EvalResult eval;
    std::size_t vectorCount = 0;
    std::size_t featureCount = 0;  // features of the (last) extraction
};

// Wires the corpus index, morphology, extraction, and learner together.
class CorpusPipeline : public PairScorer {
public:
    CorpusPipeline(const CorpusIndex& index, MorphRules morph, PipelineConfig cfg)
        : index_(&index), morph_(std::move(morph)), cfg_(std::move(cfg)) {
        cfg_.validate();
        if (!cfg_.cacheDir.empty()) cache_.emplace(cfg_.cacheDir);
    }

    const PipelineConfig& config() const { return cfg_; }

    std::vector<Phrase> phrases_for(const WordPair& pair) {
        {
            std::lock_guard<std::mutex> lock(memoMutex_);
            auto it = phraseMemo_.find(pair.key());
            if (it != phraseMemo_.end()) return it->second;
        }
        HarvestResult res = cache_
            ? cache_->harvest(*index_, morph_, pair, cfg_.maxPhrasesPerPair)
            : harvest(*index_, morph_, pair, cfg_.maxPhrasesPerPair);
        std::lock_guard<std::mutex> lock(memoMutex_);
        return phraseMemo_.emplace(pair.key(), std::move(res.phrases)).first->second;
    }

    // Harvest phrases for every pair, deduplicating by word identity and
    // fanning out across --jobs workers. Output aligned with `pairs`.
    std::vector<std::vector<Phrase>> harvest_all(const std::vector<WordPair>& pairs) {
        std::vector<std::string> uniqueKeys;
        std::vector<WordPair> uniquePairs;
        std::map<std::string, std::size_t> keyToUnique;
        for (const auto& p : pairs)
            if (keyToUnique.emplace(p.key(), uniquePairs.size()).second) {
                uniqueKeys.push_back(p.key());
                uniquePairs.push_back(p);
            }
        std::size_t jobs = cfg_.jobs ? cfg_.jobs : std::thread::hardware_concurrency();
        if (jobs > 1 && uniquePairs.size() > 1) {
            jobs = std::min(jobs, uniquePairs.size());
            std::vector<std::thread> workers;
            for (std::size_t w = 0; w < jobs; ++w)
                workers.emplace_back([this, &uniquePairs, w, jobs] {
                    for (std::size_t i = w; i < uniquePairs.size(); i += jobs)
                        phrases_for(uniquePairs[i]);
                });
            for (auto& t : workers) t.join();
        }
        std::vector<std::vector<Phrase>> out;
        out.reserve(pairs.size());
        for (const auto& p : pairs) out.push_back(phrases_for(p));
        return out;
    }

    struct Extraction {
        FeatureSpec spec;
        std::vector<FeatureVector> vectors;  // aligned with the input pairs
    };

    // Transductive extraction: feature selection sees every pair, labels
    // never enter here.
    Extraction extract(const std::vector<WordPair>& pairs) {
        auto phrases = harvest_all(pairs);
        Extraction ex;
        ex.spec = select_features(phrases, cfg_.k);
        auto indexMap = ex.spec.index_map();
        ex.vectors.reserve(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i)
            ex.vectors.push_back(vectorize(pairs[i], phrases[i], ex.spec, &indexMap));
        return ex;
    }

    // PairScorer: one calibrated binary model from the labeled training
    // pairs, positive-class probability per test pair.
    std::vector<double> score(const std::vector<WordPair>& train,
                              const std::vector<WordPair>& test) override {
        std::vector<WordPair> all = train;
        for (const auto& t : test) all.emplace_back(t.a, t.b);
        Extraction ex;
        if (cfg_.reuseFeatures && sharedSpec_) {
            auto phrases = harvest_all(all);
            ex.spec = *sharedSpec_;
            auto indexMap = ex.spec.index_map();
            for (std::size_t i = 0; i < all.size(); ++i)
                ex.vectors.push_back(vectorize(all[i], phrases[i], ex.spec, &indexMap));
        } else {
            ex = extract(all);
            if (cfg_.reuseFeatures) sharedSpec_ = ex.spec;
        }
        lastFeatureCount_ = ex.spec.patterns.size();

        std::vector<BinaryExample> bin;
        for (std::size_t i = 0; i < train.size(); ++i)
            bin.push_back({ex.vectors[i], train[i].label == kPositiveLabel ? +1 : -1});
        BinaryModel svm = train_binary(bin, cfg_.kernel);
        Calibration cal = calibrate(bin, cfg_.kernel, svm, cfg_.calibrationFolds);
        std::vector<double> probs;
        for (std::size_t i = 0; i < test.size(); ++i)
            probs.push_back(
                cal.probability(svm.decision_value(ex.vectors[train.size() + i])));
        return probs;
    }

    TaskRunResult run_task(const TaskData& data) {
        if (data.name == "sat") return run_analogy_task(data);
        if (data.name == "toefl" || data.name == "esl") return run_choice_synonym_task(data);
        return run_labeled_pair_task(data);
    }

private:
    // Cross-validated multi-class classification over precomputed vectors.
    class VectorFoldPipeline : public FoldPipeline {
    public:
        VectorFoldPipeline(const std::vector<FeatureVector>& vectors,
                           const KernelParams& params, std::size_t calibrationFolds)
            : vectors_(vectors), params_(params), calibrationFolds_(calibrationFolds) {}

        std::vector<std::vector<double>> run_fold(
            const FoldContext& ctx, const std::vector<std::string>& classes) override {
            std::vector<LabeledVector> trainSet;
            for (std::size_t i : ctx.trainIdx)
                trainSet.push_back({vectors_[i], ctx.label(i)});
            TrainedModel model = train(trainSet, params_, calibrationFolds_);
            std::vector<std::vector<double>> rows;
            for (std::size_t i : ctx.testIdx) {
                auto p = model.predict_proba(vectors_[i]);
                std::vector<double> row(classes.size(), 0.0);
                for (std::size_t c = 0; c < model.classes.size(); ++c) {
                    auto it = std::find(classes.begin(), classes.end(), model.classes[c]);
                    if (it != classes.end()) row[it - classes.begin()] = p[c];
                }
                rows.push_back(std::move(row));
            }
            return rows;
        }

    private:
        const std::vector<FeatureVector>& vectors_;
        KernelParams params_;
        std::size_t calibrationFolds_;
    };

    TaskRunResult run_analogy_task(const TaskData& data) {
        Rng rng(cfg_.seed);
        TaskRunResult res;
        EvalResult& ev = res.eval;
        double invChoices = 0;
        for (std::size_t qi = 0; qi < data.questions.size(); ++qi) {
            const auto& q = data.questions[qi];
            std::vector<WordPair> bank;
            for (std::size_t b = 0; b < data.questions.size(); ++b)
                if (data.questions[b].stemA != q.stemA ||
                    data.questions[b].stemB != q.stemB)
                    bank.emplace_back(data.questions[b].stemA, data.questions[b].stemB);
            AnalogySolution sol = solve_analogy(q, bank, *this, cfg_.trials, rng);
            EvalResult::Item it;
            it.id = q.stemA + ":" + q.stemB;
            it.predicted = std::to_string(sol.chosenIndex);
            it.gold = std::to_string(q.answerIndex);
            it.probabilities = sol.probabilities;
            it.correct = sol.chosenIndex == q.answerIndex;
            ev.perItem.push_back(std::move(it));
            invChoices += 1.0 / double(q.choices.size());
            res.vectorCount += 1 + q.choices.size();
        }
        ev.baseline = data.questions.empty() ? 0.0 : invChoices / double(data.questions.size());
        ev.finalize();
        res.featureCount = lastFeatureCount_;
        return res;
    }

    TaskRunResult run_choice_synonym_task(const TaskData& data) {
        std::vector<WordPair> pairs;
        for (const auto& q : data.questions)
            for (const auto& p : frame_synonym_question(q)) pairs.push_back(p);

        Extraction ex = extract(pairs);
        VectorFoldPipeline fold(ex.vectors, cfg_.kernel, cfg_.calibrationFolds);
        Rng rng(cfg_.seed);
        CrossvalResult cv = crossval_evaluate(pairs, cfg_.folds, rng, fold);

        std::size_t posIdx =
            std::find(cv.classes.begin(), cv.classes.end(), kPositiveLabel) -
            cv.classes.begin();
        std::vector<std::vector<double>> perQuestion;
        std::size_t cursor = 0;
        for (const auto& q : data.questions) {
            std::vector<double> probs;
            for (std::size_t c = 0; c < q.choices.size(); ++c, ++cursor) {
                const auto& dist = cv.probabilities[cursor];
                probs.push_back(posIdx < dist.size() ? dist[posIdx] : 0.0);
            }
            perQuestion.push_back(std::move(probs));
        }
        TaskRunResult res;
        res.eval = score_choice_task(data.questions, perQuestion);
        res.eval.foldFallback = cv.foldFallback;
        res.vectorCount = pairs.size();
        res.featureCount = ex.spec.patterns.size();
        return res;
    }

    TaskRunResult run_labeled_pair_task(const TaskData& data) {
        Extraction ex = extract(data.pairs);
        VectorFoldPipeline fold(ex.vectors, cfg_.kernel, cfg_.calibrationFolds);
        Rng rng(cfg_.seed);
        CrossvalResult cv = crossval_evaluate(data.pairs, cfg_.folds, rng, fold);
        TaskRunResult res;
        res.eval = to_eval_result(data.pairs, cv);
        res.vectorCount = data.pairs.size();
        res.featureCount = ex.spec.patterns.size();
        return res;
    }

    const CorpusIndex* index_;
    MorphRules morph_;
    PipelineConfig cfg_;
    std::optional<PhraseCache> cache_;
    std::map<std::string, std::vector<Phrase>> phraseMemo_;
    std::mutex memoMutex_;
    std::optional<FeatureSpec> sharedSpec_;
    std::size_t lastFeatureCount_ = 0;
};

} // namespace pairclass
