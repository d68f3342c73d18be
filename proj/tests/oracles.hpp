// Independent reference implementations used only by tests. These stay
// deliberately naive: full scans and dense solvers, no shared code with the
// library paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pairclass/corpus_index.hpp"
#include "pairclass/pattern.hpp"
#include "pairclass/svm.hpp"
#include "pairclass/tasks.hpp"

namespace oracles {

// ---- template-window full scan -------------------------------------------

// Enumerates every contiguous span and every (x,y) marking inside it, then
// filters by the literal template constraints: gap 0..3, at most one token
// of context on each side.
inline std::map<std::pair<std::string, std::string>, std::vector<pairclass::RawWindow>>
scan_all_windows(const std::vector<std::vector<std::string>>& docs) {
    std::map<std::pair<std::string, std::string>, std::vector<pairclass::RawWindow>> out;
    for (const auto& doc : docs) {
        for (std::size_t s = 0; s < doc.size(); ++s) {
            for (std::size_t e = s + 1; e < doc.size() && e - s + 1 <= 7; ++e) {
                for (std::size_t xp = s; xp <= e; ++xp) {
                    for (std::size_t yp = s; yp <= e; ++yp) {
                        if (xp == yp) continue;
                        if (doc[xp] == doc[yp]) continue;  // equal-word pairs rejected
                        std::size_t first = std::min(xp, yp), second = std::max(xp, yp);
                        std::size_t gap = second - first - 1;
                        if (gap > 3) continue;
                        if (first - s > 1 || e - second > 1) continue;
                        pairclass::RawWindow w;
                        for (std::size_t i = s; i <= e; ++i) w.tokens.push_back(doc[i]);
                        w.xPos = xp - s;
                        w.yPos = yp - s;
                        w.order = xp < yp ? pairclass::PairOrder::XY
                                          : pairclass::PairOrder::YX;
                        out[{doc[xp], doc[yp]}].push_back(std::move(w));
                    }
                }
            }
        }
    }
    return out;
}

inline std::vector<std::string> render_windows(const std::vector<pairclass::RawWindow>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) {
        std::string s;
        for (const auto& t : w.tokens) s += t + " ";
        s += "|x" + std::to_string(w.xPos) + "|y" + std::to_string(w.yPos) + "|" +
             (w.order == pairclass::PairOrder::XY ? "XY" : "YX");
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---- pattern matching and feature selection ------------------------------

inline bool pattern_matches(const pairclass::Pattern& pat, const pairclass::Phrase& ph) {
    if (pat.slots.size() != ph.tokens.size()) return false;
    for (std::size_t i = 0; i < pat.slots.size(); ++i) {
        const std::string& slot = pat.slots[i];
        if (slot == "X") {
            if (i != ph.xPos) return false;
        } else if (slot == "Y") {
            if (i != ph.yPos) return false;
        } else if (slot == "*") {
            if (i == ph.xPos || i == ph.yPos) return false;
        } else {
            if (i == ph.xPos || i == ph.yPos || ph.tokens[i] != slot) return false;
        }
    }
    return true;
}

// Brute-force pair-count scoring: nested loop over (pattern, pair, phrase).
inline pairclass::FeatureSpec select_features_bruteforce(
    const std::vector<std::vector<pairclass::Phrase>>& phrasesByPair, std::size_t k) {
    std::vector<pairclass::Pattern> all;
    for (const auto& phrases : phrasesByPair)
        for (const auto& ph : phrases)
            for (const auto& p : pairclass::patterns_of(ph)) all.push_back(p);
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());

    std::vector<std::pair<std::size_t, pairclass::Pattern>> scored;
    for (const auto& pat : all) {
        std::size_t pairs = 0;
        for (const auto& phrases : phrasesByPair) {
            bool hit = false;
            for (const auto& ph : phrases)
                if (pattern_matches(pat, ph)) { hit = true; break; }
            if (hit) ++pairs;
        }
        scored.emplace_back(pairs, pat);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    pairclass::FeatureSpec spec;
    spec.k = k;
    spec.n = phrasesByPair.size();
    for (std::size_t i = 0; i < std::min(k * spec.n, scored.size()); ++i)
        spec.patterns.push_back(scored[i].second);
    return spec;
}

inline std::size_t match_count(const pairclass::Pattern& pat,
                               const std::vector<pairclass::Phrase>& phrases) {
    std::size_t f = 0;
    for (const auto& ph : phrases)
        if (pattern_matches(pat, ph)) ++f;
    return f;
}

// ---- dense QP oracle ------------------------------------------------------

// Accelerated projected gradient on the SVM dual. Projection onto
// {0 <= a <= C, y'a = 0} by bisection on the shift multiplier.
class DenseQpOracle {
public:
    DenseQpOracle(const std::vector<pairclass::BinaryExample>& ex,
                  const pairclass::KernelParams& p)
        : n_(ex.size()), C_(p.C) {
        y_.resize(n_);
        Q_.assign(n_, std::vector<double>(n_));
        for (std::size_t i = 0; i < n_; ++i) y_[i] = ex[i].y;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                Q_[i][j] = y_[i] * y_[j] *
                           std::exp(-p.gamma * ex[i].x.squared_distance(ex[j].x));
    }

    double solve(std::size_t iters = 60000) {
        std::vector<double> a(n_, 0.0), aPrev(n_, 0.0), v(n_, 0.0);
        double L = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            double row = 0;
            for (std::size_t j = 0; j < n_; ++j) row += std::abs(Q_[i][j]);
            L = std::max(L, row);  // Gershgorin bound on the top eigenvalue
        }
        if (L <= 0) L = 1;
        double tPrev = 1;
        for (std::size_t it = 0; it < iters; ++it) {
            std::vector<double> g(n_, -1.0);
            for (std::size_t i = 0; i < n_; ++i)
                for (std::size_t j = 0; j < n_; ++j) g[i] += Q_[i][j] * v[j];
            std::vector<double> next(n_);
            for (std::size_t i = 0; i < n_; ++i) next[i] = v[i] - g[i] / L;
            project(next);
            double t = (1 + std::sqrt(1 + 4 * tPrev * tPrev)) / 2;
            for (std::size_t i = 0; i < n_; ++i)
                v[i] = next[i] + (tPrev - 1) / t * (next[i] - a[i]);
            aPrev = a;
            a = next;
            tPrev = t;
        }
        alpha_ = a;
        return objective(a);
    }

    const std::vector<double>& alpha() const { return alpha_; }

    double objective(const std::vector<double>& a) const {
        double obj = 0;
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) obj += 0.5 * a[i] * a[j] * Q_[i][j];
            obj -= a[i];
        }
        return obj;
    }

private:
    void project(std::vector<double>& a) const {
        auto shifted = [&](double t, std::size_t i) {
            double v = a[i] - y_[i] * t;
            return std::min(C_, std::max(0.0, v));
        };
        auto g = [&](double t) {
            double s = 0;
            for (std::size_t i = 0; i < n_; ++i) s += y_[i] * shifted(t, i);
            return s;  // decreasing in t
        };
        double lo = -2 * C_ - 1, hi = 2 * C_ + 1;
        for (std::size_t i = 0; i < n_; ++i) {
            lo = std::min(lo, a[i] - C_ - 1);
            hi = std::max(hi, a[i] + C_ + 1);
        }
        for (int it = 0; it < 200; ++it) {
            double mid = (lo + hi) / 2;
            if (g(mid) > 0) lo = mid;
            else hi = mid;
        }
        double t = (lo + hi) / 2;
        for (std::size_t i = 0; i < n_; ++i) a[i] = shifted(t, i);
    }

    std::size_t n_;
    double C_;
    std::vector<double> y_;
    std::vector<std::vector<double>> Q_;
    std::vector<double> alpha_;
};

// ---- random instance helpers ---------------------------------------------

inline pairclass::FeatureVector random_unit_vector(pairclass::Rng& rng,
                                                   std::size_t dims) {
    pairclass::FeatureVector v;
    double sq = 0;
    for (std::size_t d = 0; d < dims; ++d) {
        if (rng.unit() < 0.6) {
            double w = rng.unit();
            v.weights.emplace_back(d, w);
            sq += w * w;
        }
    }
    if (v.weights.empty()) {
        v.weights.emplace_back(rng.below(dims), 1.0);
        sq = 1.0;
    }
    double inv = 1.0 / std::sqrt(sq);
    for (auto& [i, w] : v.weights) w *= inv;
    return v;
}

} // namespace oracles
