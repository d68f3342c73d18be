#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pairclass/corpus_index.hpp"
#include "pairclass/features.hpp"
#include "pairclass/model.hpp"
#include "pairclass/morphology.hpp"
#include "pairclass/pipeline.hpp"
#include "pairclass/synthetic.hpp"
#include "pairclass/task_io.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitMissingFile = 3;
constexpr int kExitSchema = 4;
constexpr int kExitInternal = 5;

struct Options {
    std::string indexPath;
    std::string morphRulesPath;
    std::string configPath;
    pairclass::PipelineConfig cfg;
};

void apply_config_file(Options& opt) {
    if (opt.configPath.empty()) return;
    std::ifstream in(opt.configPath);
    if (!in) throw std::runtime_error("cannot open config file: " + opt.configPath);
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(opt.configPath + ":" + std::to_string(lineNo) +
                                     ": expected key=value");
        std::string key = line.substr(0, eq), val = line.substr(eq + 1);
        if (key == "index") opt.indexPath = val;
        else if (key == "morph-rules") opt.morphRulesPath = val;
        else if (key == "k") opt.cfg.k = std::stoull(val);
        else if (key == "max-phrases") opt.cfg.maxPhrasesPerPair = std::stoull(val);
        else if (key == "C") opt.cfg.kernel.C = std::stod(val);
        else if (key == "gamma") opt.cfg.kernel.gamma = std::stod(val);
        else if (key == "tolerance") opt.cfg.kernel.tolerance = std::stod(val);
        else if (key == "trials") opt.cfg.trials = std::stoull(val);
        else if (key == "folds") opt.cfg.folds = std::stoull(val);
        else if (key == "seed") opt.cfg.seed = std::stoull(val);
        else if (key == "phrase-cache") opt.cfg.cacheDir = val;
        else if (key == "jobs") opt.cfg.jobs = std::stoull(val);
        else if (key == "calibration-folds") opt.cfg.calibrationFolds = std::stoull(val);
        else
            throw std::runtime_error(opt.configPath + ":" + std::to_string(lineNo) +
                                     ": unknown key '" + key + "'");
    }
}

void log_config(const Options& opt) {
    const auto& c = opt.cfg;
    std::cerr << "config: index=" << (opt.indexPath.empty() ? "-" : opt.indexPath)
              << " k=" << c.k << " max-phrases=" << c.maxPhrasesPerPair
              << " C=" << c.kernel.C << " gamma=" << c.kernel.gamma
              << " tolerance=" << c.kernel.tolerance << " trials=" << c.trials
              << " folds=" << c.folds << " seed=" << c.seed
              << " calibration-folds=" << c.calibrationFolds
              << " jobs=" << c.jobs
              << " cache=" << (c.cacheDir.empty() ? "-" : c.cacheDir) << "\n";
}

pairclass::MorphRules load_morph(const Options& opt) {
    return opt.morphRulesPath.empty() ? pairclass::MorphRules::builtin()
                                      : pairclass::MorphRules::from_file(opt.morphRulesPath);
}

std::vector<pairclass::WordPair> read_pairs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pairs file: " + path);
    std::vector<pairclass::WordPair> pairs;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string pairStr, label;
        ls >> pairStr >> label;
        auto colon = pairStr.find(':');
        if (colon == std::string::npos)
            throw pairclass::SchemaError(path, lineNo, "expected a:b [label]");
        pairs.emplace_back(pairStr.substr(0, colon), pairStr.substr(colon + 1),
                           label == "UNLABELED" ? "" : label);
    }
    return pairs;
}

std::vector<std::string> expand_corpus_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::string> files;
    for (const auto& in : inputs) {
        if (std::filesystem::is_directory(in)) {
            std::vector<std::string> sub;
            for (const auto& e : std::filesystem::directory_iterator(in))
                if (e.is_regular_file()) sub.push_back(e.path().string());
            std::sort(sub.begin(), sub.end());
            files.insert(files.end(), sub.begin(), sub.end());
        } else {
            files.push_back(in);
        }
    }
    return files;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairclass: corpus-based word-pair relation classifier"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("PAIRCLASS_CACHE")) opt.cfg.cacheDir = env;
    app.add_option("--config", opt.configPath, "key=value config file");
    app.add_option("--morph-rules", opt.morphRulesPath, "morphology rules file");
    app.add_option("--phrase-cache", opt.cfg.cacheDir, "phrase cache directory");
    app.add_option("--jobs", opt.cfg.jobs, "worker parallelism (0 = all cores)");

    auto* cmdIndex = app.add_subcommand("index", "build a corpus index");
    std::vector<std::string> corpusInputs;
    std::string outPath;
    cmdIndex->add_option("inputs", corpusInputs, "corpus files or directories")->required();
    cmdIndex->add_option("--out", outPath, "output index path")->required();

    auto* cmdExtract = app.add_subcommand("extract", "extract feature vectors");
    std::string pairsPath, featuresPath;
    cmdExtract->add_option("--pairs", pairsPath, "word-pair list")->required();
    cmdExtract->add_option("--index", opt.indexPath, "corpus index")->required();
    cmdExtract->add_option("--k", opt.cfg.k, "feature selection multiplier");
    cmdExtract->add_option("--max-phrases", opt.cfg.maxPhrasesPerPair,
                           "phrase cap per pair");
    cmdExtract->add_option("--out", featuresPath, "output features file")->required();

    auto* cmdTrain = app.add_subcommand("train", "train a model from features");
    std::string modelPath;
    cmdTrain->add_option("--features", featuresPath, "features file")->required();
    cmdTrain->add_option("--out", modelPath, "output model path")->required();
    cmdTrain->add_option("--C", opt.cfg.kernel.C, "soft-margin penalty");
    cmdTrain->add_option("--gamma", opt.cfg.kernel.gamma, "RBF width");
    cmdTrain->add_option("--tolerance", opt.cfg.kernel.tolerance, "KKT tolerance");
    cmdTrain->add_option("--calibration-folds", opt.cfg.calibrationFolds,
                         "cross-fit folds for the sigmoid (0 = direct)");

    auto* cmdPredict = app.add_subcommand("predict", "classify feature vectors");
    cmdPredict->add_option("--model", modelPath, "model file")->required();
    cmdPredict->add_option("--features", featuresPath, "features file")->required();

    auto* cmdRun = app.add_subcommand("run", "run a task end to end");
    std::string taskName, dataPath, reportPath;
    cmdRun->add_option("--task", taskName, "task name")->required();
    cmdRun->add_option("--data", dataPath, "task data file")->required();
    cmdRun->add_option("--index", opt.indexPath, "corpus index")->required();
    cmdRun->add_option("--seed", opt.cfg.seed, "RNG seed");
    cmdRun->add_option("--trials", opt.cfg.trials, "bagging trials (sat)");
    cmdRun->add_option("--folds", opt.cfg.folds, "cross-validation folds");
    cmdRun->add_option("--k", opt.cfg.k, "feature selection multiplier");
    cmdRun->add_option("--max-phrases", opt.cfg.maxPhrasesPerPair, "phrase cap per pair");
    cmdRun->add_option("--C", opt.cfg.kernel.C, "soft-margin penalty");
    cmdRun->add_option("--gamma", opt.cfg.kernel.gamma, "RBF width");
    cmdRun->add_option("--tolerance", opt.cfg.kernel.tolerance, "KKT tolerance");
    cmdRun->add_option("--calibration-folds", opt.cfg.calibrationFolds,
                       "cross-fit folds for the sigmoid (0 = direct)");
    bool reuseFeatures = false;
    cmdRun->add_flag("--reuse-features", reuseFeatures,
                     "share one feature spec across analogy trials");
    cmdRun->add_option("--report", reportPath, "report path (.json written alongside)");

    auto* cmdGen = app.add_subcommand("gen-synthetic", "generate a planted-relation corpus");
    std::string genDir = "synthetic";
    pairclass::SyntheticSpec synth;
    cmdGen->add_option("--out", genDir, "output directory");
    cmdGen->add_option("--families", synth.families, "relation families");
    cmdGen->add_option("--pairs-per-family", synth.pairsPerFamily, "pairs per family");
    cmdGen->add_option("--questions", synth.questions, "analogy questions");
    cmdGen->add_option("--sentences-per-pair", synth.sentencesPerPair,
                       "planted sentences per pair");
    cmdGen->add_option("--seed", synth.seed, "RNG seed");

    // let the global options (--config, --jobs, ...) appear after the
    // subcommand name as well
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }

    try {
        apply_config_file(opt);
        opt.cfg.reuseFeatures = reuseFeatures;
        log_config(opt);

        if (*cmdIndex) {
            auto files = expand_corpus_inputs(corpusInputs);
            auto idx = pairclass::build_index(files);
            idx.save(outPath);
            std::cerr << "indexed " << idx.document_count() << " documents, "
                      << idx.total_tokens() << " tokens, vocabulary "
                      << idx.vocabulary_size() << "\n";
        } else if (*cmdExtract) {
            auto idx = pairclass::CorpusIndex::load(opt.indexPath);
            pairclass::CorpusPipeline pipe(idx, load_morph(opt), opt.cfg);
            auto pairs = read_pairs_file(pairsPath);
            auto ex = pipe.extract(pairs);
            pairclass::save_features_file(featuresPath, ex.spec, ex.vectors);
            std::cerr << "extracted " << ex.vectors.size() << " vectors over "
                      << ex.spec.patterns.size() << " features\n";
        } else if (*cmdTrain) {
            auto ff = pairclass::load_features_file(featuresPath);
            std::vector<pairclass::LabeledVector> examples;
            for (auto& v : ff.vectors)
                if (!v.pair.label.empty()) examples.push_back({v, v.pair.label});
            auto model = pairclass::train(examples, opt.cfg.kernel, opt.cfg.calibrationFolds);
            pairclass::save_model_file(modelPath, model);
            std::cerr << "trained " << model.pairModels.size() << " binary models over "
                      << model.classes.size() << " classes\n";
        } else if (*cmdPredict) {
            auto model = pairclass::load_model_file(modelPath);
            auto ff = pairclass::load_features_file(featuresPath);
            std::cout.precision(17);
            for (const auto& v : ff.vectors) {
                auto p = model.predict_proba(v);
                std::size_t best = std::max_element(p.begin(), p.end()) - p.begin();
                std::cout << v.pair.key() << "\t" << model.classes[best];
                for (std::size_t c = 0; c < p.size(); ++c)
                    std::cout << "\t" << model.classes[c] << ":" << p[c];
                std::cout << "\n";
            }
        } else if (*cmdRun) {
            auto data = pairclass::parse_task_file(dataPath);
            if (data.name != taskName)
                throw pairclass::SchemaError(dataPath, 1,
                                             "file declares task '" + data.name +
                                                 "' but --task is '" + taskName + "'");
            auto idx = pairclass::CorpusIndex::load(opt.indexPath);
            pairclass::CorpusPipeline pipe(idx, load_morph(opt), opt.cfg);
            auto res = pipe.run_task(data);
            std::ostringstream human;
            pairclass::write_report(human, taskName, res.eval, opt.cfg.seed);
            human << "vectors: " << res.vectorCount
                  << "  features: " << res.featureCount << "\n";
            std::cout << human.str();
            if (!reportPath.empty()) {
                std::ofstream rep(reportPath);
                if (!rep) throw std::runtime_error("cannot write report: " + reportPath);
                rep << human.str();
                auto j = pairclass::eval_to_json(taskName, res.eval, opt.cfg.seed);
                j["vectors"] = res.vectorCount;
                j["features"] = res.featureCount;
                std::ofstream jrep(reportPath + ".json");
                if (!jrep)
                    throw std::runtime_error("cannot write report: " + reportPath + ".json");
                jrep << j.dump(2) << "\n";
            }
        } else if (*cmdGen) {
            auto out = pairclass::generate_synthetic(genDir, synth);
            std::cerr << "wrote " << out.corpusPath << ", " << out.analogyTaskPath << ", "
                      << out.pairTaskPath << "\n";
        }
    } catch (const pairclass::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.find("cannot open") != std::string::npos ||
                       msg.find("cannot read") != std::string::npos
                   ? kExitMissingFile
                   : kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
    return 0;
}
