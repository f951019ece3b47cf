#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "causalgen/errors.hpp"
#include "causalgen/rng.hpp"

namespace causalgen {

// Gaussian-kernel density estimate with the bandwidth chosen from 20
// log-spaced candidates in [10^-0.5, 10^1.5] by 5-fold cross-validated
// average log-likelihood (highest wins, ties to the smaller bandwidth).
struct KdeModel {
    std::vector<double> sample;
    double bandwidth = 1.0;
    std::vector<double> candidate_bandwidths;
    std::vector<double> cv_scores;

    double pdf(double x) const {
        const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
        double sum = 0.0;
        for (double v : sample) sum += std::exp(-(x - v) * (x - v) * inv);
        return sum / (static_cast<double>(sample.size()) * bandwidth * std::sqrt(2.0 * M_PI));
    }

    double sample_point(Rng& rng) const {
        const std::size_t i = rng.uniform_index(sample.size());
        return sample[i] + rng.normal(0.0, bandwidth);
    }
};

inline KdeModel kde_fit(const std::vector<double>& column) {
    if (column.size() < 30) throw SampleTooSmallError("KDE requires at least 30 values");
    const double mean =
        std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
    double var = 0.0;
    for (double v : column) var += (v - mean) * (v - mean);
    if (var <= 0.0) throw DegenerateColumnError("KDE input has zero variance");

    KdeModel model;
    model.sample = column;
    constexpr int kCandidates = 20;
    constexpr int kFolds = 5;
    for (int c = 0; c < kCandidates; ++c)
        model.candidate_bandwidths.push_back(
            std::pow(10.0, -0.5 + 2.0 * static_cast<double>(c) / (kCandidates - 1)));

    const std::size_t n = column.size();
    // contiguous folds; precompute test-train squared distances once
    std::vector<std::vector<std::vector<double>>> sq_dists(kFolds);
    std::vector<std::size_t> train_sizes(kFolds);
    for (int f = 0; f < kFolds; ++f) {
        const std::size_t lo = n * static_cast<std::size_t>(f) / kFolds;
        const std::size_t hi = n * (static_cast<std::size_t>(f) + 1) / kFolds;
        train_sizes[static_cast<std::size_t>(f)] = n - (hi - lo);
        auto& fold = sq_dists[static_cast<std::size_t>(f)];
        fold.reserve(hi - lo);
        for (std::size_t t = lo; t < hi; ++t) {
            std::vector<double> row;
            row.reserve(n - (hi - lo));
            for (std::size_t i = 0; i < n; ++i) {
                if (i >= lo && i < hi) continue;
                row.push_back((column[t] - column[i]) * (column[t] - column[i]));
            }
            fold.push_back(std::move(row));
        }
    }

    model.cv_scores.assign(kCandidates, 0.0);
    for (int c = 0; c < kCandidates; ++c) {
        const double h = model.candidate_bandwidths[static_cast<std::size_t>(c)];
        const double inv = 1.0 / (2.0 * h * h);
        double total_log = 0.0;
        for (int f = 0; f < kFolds; ++f) {
            const double norm = static_cast<double>(train_sizes[static_cast<std::size_t>(f)]) * h *
                                std::sqrt(2.0 * M_PI);
            for (const auto& row : sq_dists[static_cast<std::size_t>(f)]) {
                double sum = 0.0;
                for (double d2 : row) sum += std::exp(-d2 * inv);
                total_log += std::log(std::max(sum / norm, 1e-300));
            }
        }
        model.cv_scores[static_cast<std::size_t>(c)] = total_log / static_cast<double>(n);
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < model.cv_scores.size(); ++c)
        if (model.cv_scores[c] > model.cv_scores[best]) best = c;
    model.bandwidth = model.candidate_bandwidths[best];
    return model;
}

}  // namespace causalgen
