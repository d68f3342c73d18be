#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pairclass {

// Sigmoid map from decision value to positive-class probability:
// p = 1 / (1 + exp(A*d + B)). A < 0 makes p increase with d.
struct Calibration {
    double A = -1.0;
    double B = 0.0;
    bool converged = true;

    double probability(double decisionValue) const {
        double f = A * decisionValue + B;
        // numerically stable on both tails
        if (f >= 0) return std::exp(-f) / (1.0 + std::exp(-f));
        return 1.0 / (1.0 + std::exp(f));
    }
};

// Platt's sigmoid fit with smoothed targets (N+ + 1)/(N+ + 2) and
// 1/(N- + 2), Newton descent with backtracking. Falls back to A=-1, B=0
// when the optimizer fails to converge.
inline Calibration fit_sigmoid(const std::vector<double>& decisionValues,
                               const std::vector<int>& labels, int maxIter = 100) {
    if (decisionValues.size() != labels.size() || decisionValues.empty())
        throw std::invalid_argument("fit_sigmoid: mismatched or empty inputs");
    std::size_t n = decisionValues.size();
    double prior1 = 0, prior0 = 0;
    for (int y : labels) (y > 0 ? prior1 : prior0) += 1.0;
    if (prior1 == 0 || prior0 == 0)
        throw std::invalid_argument("fit_sigmoid: both classes required");

    const double hiTarget = (prior1 + 1.0) / (prior1 + 2.0);
    const double loTarget = 1.0 / (prior0 + 2.0);
    const double minStep = 1e-10, sigma = 1e-12, eps = 1e-5;

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] > 0 ? hiTarget : loTarget;

    double A = 0.0, B = std::log((prior0 + 1.0) / (prior1 + 1.0));
    auto objective = [&](double a, double b) {
        double obj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = a * decisionValues[i] + b;
            if (f >= 0) obj += t[i] * f + std::log1p(std::exp(-f));
            else obj += (t[i] - 1.0) * f + std::log1p(std::exp(f));
        }
        return obj;
    };
    double fval = objective(A, B);

    bool converged = false;
    for (int iter = 0; iter < maxIter; ++iter) {
        double h11 = sigma, h22 = sigma, h21 = 0, g1 = 0, g2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double f = A * decisionValues[i] + B;
            double p, q;
            if (f >= 0) {
                p = std::exp(-f) / (1.0 + std::exp(-f));
                q = 1.0 / (1.0 + std::exp(-f));
            } else {
                p = 1.0 / (1.0 + std::exp(f));
                q = std::exp(f) / (1.0 + std::exp(f));
            }
            double d1 = t[i] - p, d2 = p * q;
            g1 += decisionValues[i] * d1;
            g2 += d1;
            h11 += decisionValues[i] * decisionValues[i] * d2;
            h22 += d2;
            h21 += decisionValues[i] * d2;
        }
        if (std::abs(g1) < eps && std::abs(g2) < eps) {
            converged = true;
            break;
        }
        double det = h11 * h22 - h21 * h21;
        double dA = -(h22 * g1 - h21 * g2) / det;
        double dB = -(-h21 * g1 + h11 * g2) / det;
        double gd = g1 * dA + g2 * dB;
        double step = 1.0;
        while (step >= minStep) {
            double newA = A + step * dA, newB = B + step * dB;
            double newF = objective(newA, newB);
            if (newF < fval + 1e-4 * step * gd) {
                A = newA;
                B = newB;
                fval = newF;
                break;
            }
            step /= 2.0;
        }
        if (step < minStep) break;  // line search failed
    }

    Calibration cal;
    if (!converged) {
        cal.A = -1.0;
        cal.B = 0.0;
        cal.converged = false;
    } else {
        cal.A = A;
        cal.B = B;
        cal.converged = true;
    }
    return cal;
}

} // namespace pairclass
