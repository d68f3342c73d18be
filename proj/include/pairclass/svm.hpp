#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pairclass/features.hpp"

namespace pairclass {

struct KernelParams {
    double gamma = 0.01;
    double C = 1.0;
    double tolerance = 1e-3;

    void validate() const {
        if (gamma <= 0 || C <= 0 || tolerance <= 0)
            throw std::invalid_argument("kernel params must be strictly positive");
    }
};

inline double rbf_kernel(const FeatureVector& u, const FeatureVector& v, double gamma) {
    return std::exp(-gamma * u.squared_distance(v));
}

// Kernel expansion with signed dual coefficients alpha_i * y_i.
struct BinaryModel {
    struct SupportVector {
        FeatureVector x;
        double coef;  // alpha * y
    };
    std::vector<SupportVector> supportVectors;
    double bias = 0.0;
    KernelParams params;

    double decision_value(const FeatureVector& x) const {
        double s = bias;
        for (const auto& sv : supportVectors)
            s += sv.coef * rbf_kernel(sv.x, x, params.gamma);
        return s;
    }
};

struct BinaryExample {
    FeatureVector x;
    int y;  // +1 or -1
};

namespace detail {

// Maximal-violating-pair SMO on the dual
//   min 1/2 a'Qa - e'a,  0 <= a <= C,  y'a = 0,  Q_ij = y_i y_j K_ij.
struct SmoSolver {
    const std::vector<BinaryExample>& ex;
    KernelParams params;
    std::vector<std::vector<double>> Q;
    std::vector<double> alpha, grad;

    explicit SmoSolver(const std::vector<BinaryExample>& examples, KernelParams p)
        : ex(examples), params(p) {
        std::size_t n = ex.size();
        Q.assign(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                double q = ex[i].y * ex[j].y * rbf_kernel(ex[i].x, ex[j].x, params.gamma);
                Q[i][j] = Q[j][i] = q;
            }
        alpha.assign(n, 0.0);
        grad.assign(n, -1.0);
    }

    bool in_up(std::size_t i) const {
        return (ex[i].y > 0 && alpha[i] < params.C) || (ex[i].y < 0 && alpha[i] > 0);
    }
    bool in_low(std::size_t i) const {
        return (ex[i].y > 0 && alpha[i] > 0) || (ex[i].y < 0 && alpha[i] < params.C);
    }

    // returns bias
    double solve() {
        std::size_t n = ex.size();
        const std::size_t maxIter = 100000 + 100 * n * n;
        double m = 0, M = 0;
        for (std::size_t iter = 0; iter < maxIter; ++iter) {
            std::size_t i = n, j = n;
            m = -std::numeric_limits<double>::infinity();
            M = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < n; ++t) {
                double v = -ex[t].y * grad[t];
                if (in_up(t) && v > m) { m = v; i = t; }
                if (in_low(t) && v < M) { M = v; j = t; }
            }
            if (i == n || j == n || m - M <= params.tolerance) break;

            // analytic two-variable update preserving y'a = 0
            double yi = ex[i].y, yj = ex[j].y;
            double eta = Q[i][i] + Q[j][j] - 2.0 * yi * yj * Q[i][j];
            if (eta <= 1e-12) eta = 1e-12;
            double delta = (m - M) / eta;  // step along (y_i, -y_j) direction in a-space
            double ai = alpha[i] + yi * delta;
            double aj = alpha[j] - yj * delta;
            // clip to the box, keeping the equality constraint
            double sum = yi * alpha[i] + yj * alpha[j];
            if (ai < 0) ai = 0;
            if (ai > params.C) ai = params.C;
            aj = yj * (sum - yi * ai);
            if (aj < 0) { aj = 0; ai = yi * (sum - yj * aj); }
            if (aj > params.C) { aj = params.C; ai = yi * (sum - yj * aj); }
            double di = ai - alpha[i], dj = aj - alpha[j];
            if (std::abs(di) < 1e-16 && std::abs(dj) < 1e-16) break;
            for (std::size_t t = 0; t < n; ++t) grad[t] += Q[t][i] * di + Q[t][j] * dj;
            alpha[i] = ai;
            alpha[j] = aj;
        }
        double bias = -(m + M) / 2.0;
        return std::isfinite(bias) ? bias : 0.0;
    }

};

} // namespace detail

inline double dual_objective(const std::vector<double>& alpha,
                             const std::vector<BinaryExample>& ex, const KernelParams& p) {
    double obj = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (std::size_t j = 0; j < alpha.size(); ++j)
            obj += 0.5 * alpha[i] * alpha[j] * ex[i].y * ex[j].y *
                   rbf_kernel(ex[i].x, ex[j].x, p.gamma);
        obj -= alpha[i];
    }
    return obj;
}

struct SmoResult {
    BinaryModel model;
    std::vector<double> alpha;  // one per training example
    double objective = 0.0;
};

inline SmoResult train_binary_full(const std::vector<BinaryExample>& examples,
                                   const KernelParams& params) {
    params.validate();
    bool hasPos = false, hasNeg = false;
    for (const auto& e : examples) (e.y > 0 ? hasPos : hasNeg) = true;
    if (!hasPos || !hasNeg)
        throw std::invalid_argument("train_binary: need at least one example of each class");

    detail::SmoSolver solver(examples, params);
    double bias = solver.solve();

    SmoResult res;
    res.alpha = solver.alpha;
    res.model.bias = bias;
    res.model.params = params;
    for (std::size_t i = 0; i < examples.size(); ++i)
        if (solver.alpha[i] > 0)
            res.model.supportVectors.push_back({examples[i].x, solver.alpha[i] * examples[i].y});
    res.objective = dual_objective(solver.alpha, examples, params);
    return res;
}

inline BinaryModel train_binary(const std::vector<BinaryExample>& examples,
                                const KernelParams& params) {
    return train_binary_full(examples, params).model;
}

// Largest violation m(a) - M(a) of the trained dual; <= tolerance at
// convergence.
inline double kkt_violation(const std::vector<double>& alpha,
                            const std::vector<BinaryExample>& ex, const KernelParams& p) {
    std::size_t n = ex.size();
    std::vector<double> grad(n, -1.0);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < n; ++i)
            grad[t] += alpha[i] * ex[t].y * ex[i].y * rbf_kernel(ex[t].x, ex[i].x, p.gamma);
    double m = -std::numeric_limits<double>::infinity();
    double M = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        double v = -ex[t].y * grad[t];
        bool up = (ex[t].y > 0 && alpha[t] < p.C) || (ex[t].y < 0 && alpha[t] > 0);
        bool low = (ex[t].y > 0 && alpha[t] > 0) || (ex[t].y < 0 && alpha[t] < p.C);
        if (up && v > m) m = v;
        if (low && v < M) M = v;
    }
    return m - M;
}

} // namespace pairclass
