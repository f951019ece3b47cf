#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "causalgen/correlation.hpp"
#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/kde.hpp"
#include "causalgen/rng.hpp"

namespace causalgen {

// Confusion counts over all ordered node pairs (i != j); precision/recall/f1
// fall back to 0 when their denominator is empty.
struct EdgeMetrics {
    std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

namespace detail {

template <typename HasEdge>
EdgeMetrics edge_metrics_impl(const Dag& truth, int pred_nodes, HasEdge&& predicted) {
    if (truth.n_nodes() != pred_nodes)
        throw NodeCountMismatchError("DAGs disagree on node count");
    EdgeMetrics m;
    for (int i = 0; i < truth.n_nodes(); ++i) {
        for (int j = 0; j < truth.n_nodes(); ++j) {
            if (i == j) continue;
            const bool t = truth.has_edge(i, j);
            const bool p = predicted(i, j);
            if (t && p)
                ++m.tp;
            else if (!t && !p)
                ++m.tn;
            else if (!t && p)
                ++m.fp;
            else
                ++m.fn;
        }
    }
    const double total = static_cast<double>(m.tp + m.tn + m.fp + m.fn);
    m.accuracy = total > 0.0 ? static_cast<double>(m.tp + m.tn) / total : 0.0;
    m.precision = m.tp + m.fp > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = m.tp + m.fn > 0 ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    return m;
}

}  // namespace detail

inline EdgeMetrics edge_metrics(const Dag& truth, const Dag& predicted) {
    return detail::edge_metrics_impl(truth, predicted.n_nodes(),
                                     [&](int i, int j) { return predicted.has_edge(i, j); });
}

// undirected baselines: a flagged pair counts as both directed edges
inline EdgeMetrics edge_metrics(const Dag& truth, const PairwiseFlags& predicted) {
    return detail::edge_metrics_impl(truth, predicted.n_nodes,
                                     [&](int i, int j) { return predicted.flagged(i, j); });
}

struct DistributionError {
    double sse = 0.0;
    double rmse = 0.0;
};

// Marginal-distribution discrepancy: per feature, fit a KDE on the real and
// the synthetic column, sample a 1000-point evaluation grid from the real
// KDE and compare the two densities on it; scores are averaged over
// features.
inline DistributionError distribution_error(const Dataset& real, const Dataset& synth, Rng& rng) {
    real.validate();
    synth.validate();
    if (real.attributes != synth.attributes)
        throw ShapeError("real and synthetic datasets disagree on attributes");
    constexpr std::size_t kGridPoints = 1000;
    DistributionError total;
    for (std::size_t j = 0; j < real.n_cols(); ++j) {
        const KdeModel kde_real = kde_fit(real.columns[j]);
        const KdeModel kde_synth = kde_fit(synth.columns[j]);
        double sse = 0.0;
        for (std::size_t t = 0; t < kGridPoints; ++t) {
            const double x = kde_real.sample_point(rng);
            const double diff = kde_real.pdf(x) - kde_synth.pdf(x);
            sse += diff * diff;
        }
        total.sse += sse;
        total.rmse += std::sqrt(sse / static_cast<double>(kGridPoints));
    }
    total.sse /= static_cast<double>(real.n_cols());
    total.rmse /= static_cast<double>(real.n_cols());
    return total;
}

// Independence-and-uniformity baseline: every feature i.i.d. uniform over
// the real column's range.
inline Dataset random_baseline(const Dataset& real, std::size_t n_rows, Rng& rng) {
    real.validate();
    Dataset out;
    out.attributes = real.attributes;
    out.columns.assign(real.n_cols(), std::vector<double>(n_rows, 0.0));
    for (std::size_t j = 0; j < real.n_cols(); ++j) {
        const auto [lo, hi] =
            std::minmax_element(real.columns[j].begin(), real.columns[j].end());
        Rng stream = rng.substream("uniform-column", j);
        for (std::size_t i = 0; i < n_rows; ++i)
            out.columns[j][i] = stream.uniform(*lo, *hi);
    }
    return out;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        auto lower = std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + *lower);
    }
    return m;
}

}  // namespace causalgen
