#pragma once

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pairclass/platt.hpp"
#include "pairclass/svm.hpp"

namespace pairclass {

struct LabeledVector {
    FeatureVector x;
    std::string label;
};

// One-vs-one decomposition: a calibrated binary model per unordered class
// pair. The first class of the pair plays the positive role.
struct TrainedModel {
    struct PairModel {
        std::size_t classA = 0;  // positive side, index into classes
        std::size_t classB = 0;
        BinaryModel svm;
        Calibration calibration;
    };
    std::vector<std::string> classes;
    std::vector<PairModel> pairModels;
    KernelParams params;

    // Normalized pairwise coupling: each class collects its calibrated
    // win probabilities over the c-1 pairs it appears in; the vote mass
    // is renormalized into a distribution. Ties in argmax go to the
    // earlier class in `classes`.
    std::vector<double> predict_proba(const FeatureVector& x) const {
        std::vector<double> votes(classes.size(), 0.0);
        for (const auto& pm : pairModels) {
            double p = pm.calibration.probability(pm.svm.decision_value(x));
            votes[pm.classA] += p;
            votes[pm.classB] += 1.0 - p;
        }
        double total = 0;
        for (double v : votes) total += v;
        if (total <= 0) {
            std::fill(votes.begin(), votes.end(), 1.0 / votes.size());
            return votes;
        }
        for (double& v : votes) v /= total;
        return votes;
    }

    std::size_t predict_class(const FeatureVector& x) const {
        auto p = predict_proba(x);
        return static_cast<std::size_t>(
            std::max_element(p.begin(), p.end()) - p.begin());  // first max wins
    }
};

// Fit the sigmoid either on training decision values directly
// (calibrationFolds <= 1, the desk-scale default) or with a cross-fit.
inline Calibration calibrate(const std::vector<BinaryExample>& examples,
                             const KernelParams& params, const BinaryModel& trained,
                             std::size_t calibrationFolds = 0) {
    std::vector<double> dvals;
    std::vector<int> labels;
    if (calibrationFolds >= 2 && examples.size() >= calibrationFolds * 2) {
        for (std::size_t f = 0; f < calibrationFolds; ++f) {
            std::vector<BinaryExample> tr;
            std::vector<const BinaryExample*> te;
            for (std::size_t i = 0; i < examples.size(); ++i) {
                if (i % calibrationFolds == f) te.push_back(&examples[i]);
                else tr.push_back(examples[i]);
            }
            bool hasPos = false, hasNeg = false;
            for (const auto& e : tr) (e.y > 0 ? hasPos : hasNeg) = true;
            const BinaryModel* m = &trained;
            BinaryModel foldModel;
            if (hasPos && hasNeg) {
                foldModel = train_binary(tr, params);
                m = &foldModel;
            }
            for (const auto* e : te) {
                dvals.push_back(m->decision_value(e->x));
                labels.push_back(e->y);
            }
        }
    } else {
        for (const auto& e : examples) {
            dvals.push_back(trained.decision_value(e.x));
            labels.push_back(e.y);
        }
    }
    return fit_sigmoid(dvals, labels);
}

inline TrainedModel train(const std::vector<LabeledVector>& examples,
                          const KernelParams& params, std::size_t calibrationFolds = 0) {
    params.validate();
    TrainedModel model;
    model.params = params;
    std::map<std::string, std::vector<const LabeledVector*>> byClass;
    for (const auto& e : examples) {
        if (e.label.empty()) throw std::invalid_argument("train: unlabeled example");
        byClass[e.label].push_back(&e);
    }
    if (byClass.size() < 2) throw std::invalid_argument("train: need at least 2 classes");
    for (const auto& [label, members] : byClass) {
        if (members.empty()) throw std::invalid_argument("train: empty class " + label);
        model.classes.push_back(label);
    }
    for (std::size_t i = 0; i < model.classes.size(); ++i) {
        for (std::size_t j = i + 1; j < model.classes.size(); ++j) {
            std::vector<BinaryExample> bin;
            for (const auto* e : byClass[model.classes[i]]) bin.push_back({e->x, +1});
            for (const auto* e : byClass[model.classes[j]]) bin.push_back({e->x, -1});
            TrainedModel::PairModel pm;
            pm.classA = i;
            pm.classB = j;
            pm.svm = train_binary(bin, params);
            pm.calibration = calibrate(bin, params, pm.svm, calibrationFolds);
            model.pairModels.push_back(std::move(pm));
        }
    }
    return model;
}

// ---- persistence ----------------------------------------------------------

inline void save_model(std::ostream& out, const TrainedModel& m) {
    out << "pairclass-model v1\n";
    out.precision(17);
    out << "params " << m.params.gamma << " " << m.params.C << " " << m.params.tolerance
        << "\n";
    out << "classes " << m.classes.size();
    for (const auto& c : m.classes) out << " " << c;
    out << "\n";
    out << "pairmodels " << m.pairModels.size() << "\n";
    for (const auto& pm : m.pairModels) {
        out << "P " << pm.classA << " " << pm.classB << " " << pm.svm.bias << " "
            << pm.calibration.A << " " << pm.calibration.B << " "
            << (pm.calibration.converged ? 1 : 0) << " " << pm.svm.supportVectors.size()
            << "\n";
        for (const auto& sv : pm.svm.supportVectors) {
            out << "S " << sv.coef;
            for (const auto& [i, w] : sv.x.weights) out << " " << i << ":" << w;
            out << "\n";
        }
    }
}

inline void save_model_file(const std::string& path, const TrainedModel& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    save_model(out, m);
}

inline TrainedModel load_model(std::istream& in, const std::string& origin = "<stream>") {
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(what + " in model file " + origin);
    };
    std::string line;
    if (!std::getline(in, line) || line != "pairclass-model v1") throw fail("bad header");
    TrainedModel m;
    std::string key;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        if (!(ls >> key >> m.params.gamma >> m.params.C >> m.params.tolerance) ||
            key != "params")
            throw fail("bad params line");
    }
    {
        std::getline(in, line);
        std::istringstream ls(line);
        std::size_t nc;
        if (!(ls >> key >> nc) || key != "classes") throw fail("bad classes line");
        std::string c;
        while (ls >> c) m.classes.push_back(c);
        if (m.classes.size() != nc) throw fail("class count mismatch");
    }
    std::size_t np;
    {
        std::getline(in, line);
        std::istringstream ls(line);
        if (!(ls >> key >> np) || key != "pairmodels") throw fail("bad pairmodels line");
    }
    for (std::size_t p = 0; p < np; ++p) {
        std::getline(in, line);
        std::istringstream ls(line);
        TrainedModel::PairModel pm;
        pm.svm.params = m.params;
        std::size_t nsv;
        int conv;
        if (!(ls >> key >> pm.classA >> pm.classB >> pm.svm.bias >> pm.calibration.A >>
              pm.calibration.B >> conv >> nsv) ||
            key != "P")
            throw fail("bad pair model line");
        pm.calibration.converged = conv != 0;
        for (std::size_t s = 0; s < nsv; ++s) {
            std::getline(in, line);
            std::istringstream ss(line);
            BinaryModel::SupportVector sv;
            if (!(ss >> key >> sv.coef) || key != "S") throw fail("bad support vector line");
            std::string elem;
            while (ss >> elem) {
                auto c = elem.find(':');
                if (c == std::string::npos) throw fail("bad weight " + elem);
                sv.x.weights.emplace_back(std::stoull(elem.substr(0, c)),
                                          std::stod(elem.substr(c + 1)));
            }
            pm.svm.supportVectors.push_back(std::move(sv));
        }
        m.pairModels.push_back(std::move(pm));
    }
    return m;
}

inline TrainedModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    return load_model(in, path);
}

} // namespace pairclass
