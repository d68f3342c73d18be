#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pairclass/pattern.hpp"
#include "pairclass/word_pair.hpp"

namespace pairclass {

inline constexpr std::size_t kDefaultK = 20;

// The top k*N shared patterns, in (generating-pair count desc, pattern asc)
// order. Feature index = position in `patterns`.
struct FeatureSpec {
    std::vector<Pattern> patterns;
    std::size_t k = kDefaultK;
    std::size_t n = 0;  // number of input pairs

    std::unordered_map<std::string, std::size_t> index_map() const {
        std::unordered_map<std::string, std::size_t> m;
        m.reserve(patterns.size());
        for (std::size_t i = 0; i < patterns.size(); ++i) m.emplace(patterns[i].str(), i);
        return m;
    }
};

// Sparse unit-length vector of log pattern frequencies. All-zero when the
// pair had no phrase matching any selected pattern.
struct FeatureVector {
    WordPair pair;
    std::vector<std::pair<std::size_t, double>> weights;  // ascending by index

    double squared_norm() const {
        double s = 0;
        for (const auto& [i, w] : weights) s += w * w;
        return s;
    }

    double dot(const FeatureVector& o) const {
        double s = 0;
        auto a = weights.begin();
        auto b = o.weights.begin();
        while (a != weights.end() && b != o.weights.end()) {
            if (a->first < b->first) ++a;
            else if (b->first < a->first) ++b;
            else s += (a++)->second * (b++)->second;
        }
        return s;
    }

    double squared_distance(const FeatureVector& o) const {
        return squared_norm() + o.squared_norm() - 2.0 * dot(o);
    }
};

// Score each distinct pattern by the number of DISTINCT pairs generating
// it; keep the top k*N. Both training and testing pairs contribute
// (labels are never consulted here).
inline FeatureSpec select_features(const std::vector<std::vector<Phrase>>& phrasesByPair,
                                   std::size_t k = kDefaultK) {
    if (phrasesByPair.empty()) throw std::invalid_argument("select_features: no input pairs");
    if (k == 0) throw std::invalid_argument("select_features: k must be >= 1");
    std::map<Pattern, std::size_t> pairCount;
    for (const auto& phrases : phrasesByPair) {
        std::set<Pattern> seen;
        for (const auto& phrase : phrases)
            for (auto& p : patterns_of(phrase)) seen.insert(std::move(p));
        for (const auto& p : seen) ++pairCount[p];
    }
    std::vector<const std::pair<const Pattern, std::size_t>*> ranked;
    ranked.reserve(pairCount.size());
    for (const auto& e : pairCount) ranked.push_back(&e);
    std::stable_sort(ranked.begin(), ranked.end(), [](auto* a, auto* b) {
        if (a->second != b->second) return a->second > b->second;
        return a->first < b->first;
    });
    FeatureSpec spec;
    spec.k = k;
    spec.n = phrasesByPair.size();
    std::size_t keep = std::min(k * spec.n, ranked.size());
    spec.patterns.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) spec.patterns.push_back(ranked[i]->first);
    return spec;
}

// f = phrases in the multiset matching each selected pattern; raw weight
// ln(f+1); L2-normalized unless all-zero. A phrase matches a pattern iff
// the pattern is one of the phrase's own generated patterns, so matching
// requires equal length and aligned X/Y.
inline FeatureVector vectorize(const WordPair& pair, const std::vector<Phrase>& phrases,
                               const FeatureSpec& spec,
                               const std::unordered_map<std::string, std::size_t>* indexMap = nullptr) {
    std::unordered_map<std::string, std::size_t> local;
    if (!indexMap) {
        local = spec.index_map();
        indexMap = &local;
    }
    std::map<std::size_t, std::size_t> freq;
    for (const auto& phrase : phrases)
        for (const auto& p : patterns_of(phrase)) {
            auto it = indexMap->find(p.str());
            if (it != indexMap->end()) ++freq[it->second];
        }
    FeatureVector v;
    v.pair = pair;
    v.weights.reserve(freq.size());
    double sq = 0;
    for (const auto& [idx, f] : freq) {
        double w = std::log(static_cast<double>(f) + 1.0);
        v.weights.emplace_back(idx, w);
        sq += w * w;
    }
    if (sq > 0) {
        double inv = 1.0 / std::sqrt(sq);
        for (auto& [idx, w] : v.weights) w *= inv;
    }
    return v;
}

// ---- line-oriented persistence -------------------------------------------
//
//   pairclass-features v1
//   k <k>
//   n <N>
//   features <count>
//   F <pattern>            (one per feature, in index order)
//   V a:b <label|UNLABELED> idx:weight idx:weight ...

inline void save_features(std::ostream& out, const FeatureSpec& spec,
                          const std::vector<FeatureVector>& vectors) {
    out << "pairclass-features v1\n";
    out << "k " << spec.k << "\n";
    out << "n " << spec.n << "\n";
    out << "features " << spec.patterns.size() << "\n";
    for (const auto& p : spec.patterns) out << "F " << p.str() << "\n";
    out.precision(17);
    for (const auto& v : vectors) {
        out << "V " << v.pair.a << ":" << v.pair.b << " "
            << (v.pair.label.empty() ? "UNLABELED" : v.pair.label);
        for (const auto& [i, w] : v.weights) out << " " << i << ":" << w;
        out << "\n";
    }
}

inline void save_features_file(const std::string& path, const FeatureSpec& spec,
                               const std::vector<FeatureVector>& vectors) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write features file: " + path);
    save_features(out, spec, vectors);
}

struct FeatureFile {
    FeatureSpec spec;
    std::vector<FeatureVector> vectors;
};

inline FeatureFile load_features(std::istream& in, const std::string& origin = "<stream>") {
    FeatureFile f;
    std::string line;
    if (!std::getline(in, line) || line != "pairclass-features v1")
        throw std::runtime_error("bad features header in " + origin);
    std::size_t count = 0;
    for (int i = 0; i < 3; ++i) {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string key;
        std::size_t val;
        if (!(ls >> key >> val)) throw std::runtime_error("bad features header in " + origin);
        if (key == "k") f.spec.k = val;
        else if (key == "n") f.spec.n = val;
        else if (key == "features") count = val;
        else throw std::runtime_error("unknown features header key '" + key + "' in " + origin);
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line) || line.rfind("F ", 0) != 0)
            throw std::runtime_error("bad feature line in " + origin);
        f.spec.patterns.push_back(Pattern::parse(line.substr(2)));
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("V ", 0) != 0)
            throw std::runtime_error("bad vector line in " + origin);
        std::istringstream ls(line.substr(2));
        std::string pairStr, label;
        ls >> pairStr >> label;
        auto colon = pairStr.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("bad pair '" + pairStr + "' in " + origin);
        FeatureVector v;
        v.pair = WordPair(pairStr.substr(0, colon), pairStr.substr(colon + 1),
                          label == "UNLABELED" ? "" : label);
        std::string elem;
        while (ls >> elem) {
            auto c = elem.find(':');
            if (c == std::string::npos)
                throw std::runtime_error("bad weight '" + elem + "' in " + origin);
            v.weights.emplace_back(std::stoull(elem.substr(0, c)),
                                   std::stod(elem.substr(c + 1)));
        }
        f.vectors.push_back(std::move(v));
    }
    return f;
}

inline FeatureFile load_features_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open features file: " + path);
    return load_features(in, path);
}

} // namespace pairclass
