#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>

#include "pairclass/tasks.hpp"

using namespace pairclass;

namespace {

ChoiceQuestion sat_question() {
    ChoiceQuestion q;
    q.stemA = "mason";
    q.stemB = "stone";
    q.choices = {{"teacher", "chalk"}, {"carpenter", "wood"}, {"soldier", "gun"},
                 {"photograph", "camera"}, {"book", "word"}};
    q.answerIndex = 1;
    return q;
}

std::vector<WordPair> stem_bank() {
    return {WordPair("traffic", "street"), WordPair("ostrich", "bird"),
            WordPair("word", "language"), WordPair("paltry", "significance")};
}

// Deterministic scorer used to pin down framing and aggregation behavior.
class RecordingScorer : public PairScorer {
public:
    std::vector<std::vector<WordPair>> trainCalls, testCalls;
    std::vector<double> reply;

    std::vector<double> score(const std::vector<WordPair>& train,
                              const std::vector<WordPair>& test) override {
        trainCalls.push_back(train);
        testCalls.push_back(test);
        if (!reply.empty()) return reply;
        return std::vector<double>(test.size(), 0.5);
    }
};

} // namespace

TEST_CASE("rng streams are reproducible and bounded") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next() == b.next());
        auto v = a.below(7);
        CHECK(v < 7);
        CHECK(v == b.below(7));
        double u = a.unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        b.unit();
    }
    CHECK_THROWS_AS(a.below(0), std::invalid_argument);
}

TEST_CASE("question validation enforces the choice range") {
    ChoiceQuestion q = sat_question();
    q.validate();
    q.choices.resize(1);
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = sat_question();
    q.answerIndex = 5;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("analogy framing pairs the stem with one sampled negative") {
    Rng rng(1);
    auto q = sat_question();
    auto bank = stem_bank();
    auto f = frame_analogy_question(q, bank, rng);
    REQUIRE(f.train.size() == 2);
    CHECK(f.train[0].a == "mason");
    CHECK(f.train[0].b == "stone");
    CHECK(f.train[0].label == kPositiveLabel);
    CHECK(f.train[1].label == kNegativeLabel);
    bool fromBank = false;
    for (const auto& s : bank)
        if (s.a == f.train[1].a && s.b == f.train[1].b) fromBank = true;
    CHECK(fromBank);
    REQUIRE(f.test.size() == 5);
    CHECK(f.test[1].a == "carpenter");
    CHECK(f.test[1].b == "wood");
    for (const auto& t : f.test) CHECK(t.label.empty());
}

TEST_CASE("framing rejects a bank containing the question stem") {
    Rng rng(3);
    auto q = sat_question();
    std::vector<WordPair> bank{WordPair("mason", "stone")};
    CHECK_THROWS_AS(frame_analogy_question(q, bank, rng), std::invalid_argument);
    CHECK_THROWS_AS(frame_analogy_question(q, {}, rng), std::invalid_argument);
}

TEST_CASE("a single-entry bank always supplies that negative") {
    Rng rng(5);
    auto q = sat_question();
    std::vector<WordPair> bank{WordPair("ostrich", "bird")};
    for (int i = 0; i < 10; ++i) {
        auto f = frame_analogy_question(q, bank, rng);
        CHECK(f.train[1].a == "ostrich");
        CHECK(f.train[1].b == "bird");
    }
}

TEST_CASE("solve_analogy averages trial probabilities and takes the argmax") {
    Rng rng(7);
    auto q = sat_question();
    RecordingScorer scorer;
    scorer.reply = {0.236, 0.260, 0.391, 0.757, 0.265};
    auto sol = solve_analogy(q, stem_bank(), scorer, 10, rng);
    CHECK(sol.chosenIndex == 3);
    CHECK(sol.trialsRun == 10);
    CHECK(scorer.trainCalls.size() == 10);
    REQUIRE(sol.probabilities.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(sol.probabilities[i] == Catch::Approx(scorer.reply[i]).margin(1e-12));
    // every trial kept the same positive stem and drew a bank negative
    for (const auto& tr : scorer.trainCalls) {
        CHECK(tr[0].a == "mason");
        CHECK(tr[1].label == kNegativeLabel);
    }
}

TEST_CASE("solve_analogy with one trial uses a single framing") {
    Rng rng(11);
    auto q = sat_question();
    RecordingScorer scorer;
    auto sol = solve_analogy(q, stem_bank(), scorer, 1, rng);
    CHECK(sol.trialsRun == 1);
    CHECK(scorer.trainCalls.size() == 1);
    CHECK(sol.chosenIndex == 0);  // uniform probabilities tie to the lowest index
    CHECK_THROWS_AS(solve_analogy(q, stem_bank(), scorer, 0, rng), std::invalid_argument);
}

TEST_CASE("bagging averages varying per-trial scores") {
    Rng rng(13);
    auto q = sat_question();
    class AlternatingScorer : public PairScorer {
    public:
        int call = 0;
        std::vector<double> score(const std::vector<WordPair>&,
                                  const std::vector<WordPair>& test) override {
            std::vector<double> out(test.size(), 0.1);
            out[call++ % 2 == 0 ? 2 : 4] = 0.9;
            return out;
        }
    } scorer;
    auto sol = solve_analogy(q, stem_bank(), scorer, 10, rng);
    CHECK(sol.probabilities[2] == Catch::Approx(0.5));
    CHECK(sol.probabilities[4] == Catch::Approx(0.5));
    CHECK(sol.chosenIndex == 2);  // tie broken toward the lower index
}

TEST_CASE("synonym framing labels the gold choice positive") {
    ChoiceQuestion q;
    q.stemA = "levied";
    q.choices = {{"imposed", ""}, {"believed", ""}, {"requested", ""}, {"correlated", ""}};
    q.answerIndex = 0;
    auto pairs = frame_synonym_question(q);
    REQUIRE(pairs.size() == 4);
    CHECK(pairs[0].a == "levied");
    CHECK(pairs[0].b == "imposed");
    CHECK(pairs[0].label == kPositiveLabel);
    for (std::size_t i = 1; i < 4; ++i) CHECK(pairs[i].label == kNegativeLabel);

    ChoiceQuestion pairQ = sat_question();
    CHECK_THROWS_AS(frame_synonym_question(pairQ), std::invalid_argument);
}

TEST_CASE("a 50-question synonym set frames to 200 pairs") {
    std::size_t total = 0;
    for (int i = 0; i < 50; ++i) {
        ChoiceQuestion q;
        q.stemA = "stem" + std::to_string(i);
        q.choices = {{"a", ""}, {"b", ""}, {"c", ""}, {"d", ""}};
        q.answerIndex = i % 4;
        total += frame_synonym_question(q).size();
    }
    CHECK(total == 200);
}

TEST_CASE("fold plans are stratified with sizes within one") {
    Rng rng(2024);
    std::vector<std::string> labels;
    for (int i = 0; i < 37; ++i) labels.push_back("syn");
    for (int i = 0; i < 43; ++i) labels.push_back("ant");
    auto plan = make_fold_plan(labels, 10, rng);
    REQUIRE(plan.assignments.size() == 80);
    std::vector<std::size_t> sizes(10, 0);
    std::map<std::string, std::vector<std::size_t>> classCounts;
    classCounts["syn"].assign(10, 0);
    classCounts["ant"].assign(10, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        REQUIRE(plan.assignments[i] < 10);
        ++sizes[plan.assignments[i]];
        ++classCounts[labels[i]][plan.assignments[i]];
    }
    auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
    CHECK(*mx - *mn <= 1);
    for (const auto& [label, counts] : classCounts) {
        auto [cmn, cmx] = std::minmax_element(counts.begin(), counts.end());
        CHECK(*cmx - *cmn <= 1);
    }
    CHECK_THROWS_AS(make_fold_plan(labels, 1, rng), std::invalid_argument);
    CHECK_THROWS_AS(make_fold_plan({"a", "b"}, 3, rng), std::invalid_argument);
}

namespace {

// Pipeline stub that classifies by peeking only at training labels: each test
// example gets the distribution of a fixed oracle map.
class OraclePipeline : public FoldPipeline {
public:
    explicit OraclePipeline(std::map<std::string, std::string> oracle)
        : oracle_(std::move(oracle)) {}
    std::vector<std::size_t> trainLabelReads;

    std::vector<std::vector<double>> run_fold(const FoldContext& ctx,
                                              const std::vector<std::string>& classes) override {
        for (std::size_t i : ctx.trainIdx) {
            ctx.label(i);
            trainLabelReads.push_back(i);
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t i : ctx.testIdx) {
            std::vector<double> row(classes.size(), 0.0);
            auto it = oracle_.find((*ctx.pairs)[i].key());
            std::size_t c = 0;
            if (it != oracle_.end())
                c = std::find(classes.begin(), classes.end(), it->second) - classes.begin();
            row[c] = 1.0;
            rows.push_back(std::move(row));
        }
        return rows;
    }

private:
    std::map<std::string, std::string> oracle_;
};

std::vector<WordPair> labeled_pairs(std::size_t perClass) {
    std::vector<WordPair> pairs;
    for (std::size_t i = 0; i < perClass; ++i) {
        pairs.emplace_back("syn_a" + std::to_string(i), "syn_b" + std::to_string(i), "syn");
        pairs.emplace_back("ant_a" + std::to_string(i), "ant_b" + std::to_string(i), "ant");
    }
    return pairs;
}

} // namespace

TEST_CASE("crossval with a perfect pipeline scores every example once") {
    auto pairs = labeled_pairs(15);
    std::map<std::string, std::string> oracle;
    for (const auto& p : pairs) oracle[p.key()] = p.label;
    OraclePipeline pipeline(oracle);
    Rng rng(99);
    auto cv = crossval_evaluate(pairs, 10, rng, pipeline);
    CHECK(cv.classes == std::vector<std::string>{"ant", "syn"});
    CHECK_FALSE(cv.foldFallback);
    auto ev = to_eval_result(pairs, cv);
    CHECK(ev.accuracy == 1.0);
    CHECK(ev.baseline == 0.5);
    CHECK(ev.perItem.size() == 30);
    for (const auto& it : ev.perItem) CHECK(it.correct);
}

TEST_CASE("training never reads a test-fold label") {
    auto pairs = labeled_pairs(10);
    std::map<std::string, std::string> oracle;
    for (const auto& p : pairs) oracle[p.key()] = p.label;
    OraclePipeline pipeline(oracle);
    Rng rng(5);
    auto cv = crossval_evaluate(pairs, 5, rng, pipeline);
    CHECK_FALSE(cv.labelLog.empty());
    for (const auto& read : cv.labelLog)
        CHECK(cv.plan.assignments[read.example] != read.fold);
    // every example's label was read in the folds where it trained
    std::set<std::size_t> readExamples;
    for (const auto& read : cv.labelLog) readExamples.insert(read.example);
    CHECK(readExamples.size() == pairs.size());
}

TEST_CASE("reading a test-fold label throws out of the pipeline") {
    auto pairs = labeled_pairs(5);
    class CheatingPipeline : public FoldPipeline {
    public:
        std::vector<std::vector<double>> run_fold(const FoldContext& ctx,
                                                  const std::vector<std::string>& classes) override {
            ctx.label(ctx.testIdx[0]);  // forbidden
            return std::vector<std::vector<double>>(
                ctx.testIdx.size(), std::vector<double>(classes.size(), 0.5));
        }
    } pipeline;
    Rng rng(8);
    CHECK_THROWS_AS(crossval_evaluate(pairs, 5, rng, pipeline), std::logic_error);
}

TEST_CASE("a single-fold class triggers the fold-merge fallback") {
    // 2 folds, one class with 2 members forced into one fold is impossible by
    // construction of the planner, so use a tiny class of 2 with 2 folds and
    // check the fallback path via a plan that matches: use 3 classes where one
    // has exactly 2 members across 2 folds -- the planner may split them, so
    // instead drive many seeds and assert the invariant: after crossval, no
    // class sits entirely inside one fold unless it has a single member.
    std::vector<WordPair> pairs = labeled_pairs(6);
    pairs.emplace_back("rare_a0", "rare_b0", "rare");
    pairs.emplace_back("rare_a1", "rare_b1", "rare");
    std::map<std::string, std::string> oracle;
    for (const auto& p : pairs) oracle[p.key()] = p.label;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OraclePipeline pipeline(oracle);
        Rng rng(seed);
        auto cv = crossval_evaluate(pairs, 7, rng, pipeline);
        std::map<std::string, std::set<std::size_t>> foldsOf;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            foldsOf[pairs[i].label].insert(cv.plan.assignments[i]);
        CHECK(foldsOf["rare"].size() >= 2);
        auto ev = to_eval_result(pairs, cv);
        CHECK(ev.accuracy == 1.0);
    }
}

TEST_CASE("crossval rejects unlabeled pairs") {
    std::vector<WordPair> pairs = labeled_pairs(5);
    pairs.emplace_back("x", "y");
    OraclePipeline pipeline({});
    Rng rng(2);
    CHECK_THROWS_AS(crossval_evaluate(pairs, 5, rng, pipeline), std::invalid_argument);
}

TEST_CASE("choice scoring takes the per-question argmax") {
    std::vector<ChoiceQuestion> qs{sat_question()};
    std::vector<std::vector<double>> probs{{0.236, 0.260, 0.391, 0.757, 0.265}};
    auto ev = score_choice_task(qs, probs);
    REQUIRE(ev.perItem.size() == 1);
    CHECK(ev.perItem[0].predicted == "3");
    CHECK_FALSE(ev.perItem[0].correct);  // gold is index 1
    CHECK(ev.baseline == Catch::Approx(0.2));

    qs[0].answerIndex = 3;
    ev = score_choice_task(qs, probs);
    CHECK(ev.perItem[0].correct);
    CHECK(ev.accuracy == 1.0);
}

TEST_CASE("choice scoring breaks ties toward the first choice") {
    auto q = sat_question();
    q.answerIndex = 0;
    auto ev = score_choice_task({q}, {{0.4, 0.4, 0.4, 0.4, 0.4}});
    CHECK(ev.perItem[0].predicted == "0");
    CHECK(ev.perItem[0].correct);
}

TEST_CASE("random probabilities score near chance") {
    Rng rng(31415);
    std::vector<ChoiceQuestion> qs;
    std::vector<std::vector<double>> probs;
    for (int i = 0; i < 4000; ++i) {
        ChoiceQuestion q;
        q.stemA = "s" + std::to_string(i);
        q.stemB = "t" + std::to_string(i);
        q.choices.assign(4, {"c", "d"});
        q.answerIndex = rng.below(4);
        qs.push_back(q);
        std::vector<double> row;
        for (int c = 0; c < 4; ++c) row.push_back(rng.unit());
        probs.push_back(std::move(row));
    }
    auto ev = score_choice_task(qs, probs);
    CHECK(std::abs(ev.accuracy - 0.25) < 0.02);
    CHECK(ev.baseline == Catch::Approx(0.25));
}

TEST_CASE("baselines match hand counts") {
    // 89 of 136 majority-class examples
    std::vector<std::string> labels;
    for (int i = 0; i < 89; ++i) labels.push_back("maj");
    for (int i = 0; i < 47; ++i) labels.push_back("min" + std::to_string(i % 3));
    CHECK(majority_baseline(labels) == Catch::Approx(89.0 / 136.0));
    CHECK(majority_baseline({"a", "b", "c"}) == Catch::Approx(1.0 / 3.0));
    CHECK(majority_baseline({}) == 0.0);
    // a uniform 3-class set has baseline 1/3
    std::vector<std::string> three;
    for (int i = 0; i < 30; ++i) three.push_back("c" + std::to_string(i % 3));
    CHECK(majority_baseline(three) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("choice baseline averages inverse choice counts") {
    ChoiceQuestion q5 = sat_question();
    ChoiceQuestion q4;
    q4.stemA = "w";
    q4.choices.assign(4, {"c", ""});
    q4.answerIndex = 0;
    auto ev = score_choice_task({q5, q4}, {{1, 0, 0, 0, 0}, {1, 0, 0, 0}});
    CHECK(ev.baseline == Catch::Approx((0.2 + 0.25) / 2.0));
}
