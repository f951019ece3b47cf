#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "causalgen/dataset.hpp"
#include "causalgen/errors.hpp"
#include "causalgen/kernels.hpp"

namespace causalgen {

struct LofReport {
    std::vector<double> scores;  // one LOF value per synthetic row
    std::size_t n_outliers = 0;  // rows with LOF > 1
};

namespace detail {

// k-distance neighborhood in the Breunig sense: every index whose distance
// does not exceed the distance of the k-th nearest (ties included).
inline std::vector<std::size_t> k_neighborhood(const std::vector<double>& dists, int k,
                                               std::size_t skip, double* k_distance) {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i) {
        if (i == skip) continue;
        order.push_back({dists[i], i});
    }
    std::sort(order.begin(), order.end());
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), order.size());
    *k_distance = order[kk - 1].first;
    std::vector<std::size_t> nbrs;
    for (const auto& [d, i] : order) {
        if (d > *k_distance) break;
        nbrs.push_back(i);
    }
    return nbrs;
}

constexpr double kLrdGuard = 1e-10;  // keeps duplicate-heavy data finite

}  // namespace detail

// Local outlier factor of each synthetic row in novelty mode: the reference
// population is the real dataset only, with Euclidean distances on features
// standardized by the real mean/std. Follows Breunig's reachability
// distance / lrd / LOF construction.
inline LofReport lof_report(const Dataset& real, const Dataset& synth, int k = 30) {
    real.validate();
    synth.validate();
    if (real.attributes != synth.attributes)
        throw ShapeError("real and synthetic datasets disagree on attributes");
    const std::size_t n_real = real.n_rows();
    if (n_real <= static_cast<std::size_t>(k))
        throw TooFewReferenceRowsError("need more than k reference rows");

    const Matrix real_m = to_matrix(real);
    const ColumnScaler scaler = fit_scaler(real_m);
    const Matrix r = scaler.transform(real_m);
    const Matrix s = scaler.transform(to_matrix(synth));

    // pairwise distances within the reference population
    const Matrix rr = pairwise_sq_dists(r).cwiseSqrt();

    std::vector<double> k_dist(n_real);
    std::vector<std::vector<std::size_t>> nbrs(n_real);
    std::vector<double> lrd(n_real);
    std::vector<double> row(n_real);
    for (std::size_t i = 0; i < n_real; ++i) {
        for (std::size_t j = 0; j < n_real; ++j)
            row[j] = rr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        nbrs[i] = detail::k_neighborhood(row, k, i, &k_dist[i]);
    }
    for (std::size_t i = 0; i < n_real; ++i) {
        double sum_reach = 0.0;
        for (std::size_t q : nbrs[i])
            sum_reach += std::max(k_dist[q], rr(static_cast<Eigen::Index>(i),
                                                static_cast<Eigen::Index>(q)));
        lrd[i] = 1.0 / (sum_reach / static_cast<double>(nbrs[i].size()) + detail::kLrdGuard);
    }

    LofReport report;
    report.scores.resize(static_cast<std::size_t>(s.rows()));
    std::vector<double> d(n_real);
    for (Eigen::Index p = 0; p < s.rows(); ++p) {
        for (std::size_t j = 0; j < n_real; ++j)
            d[j] = (s.row(p) - r.row(static_cast<Eigen::Index>(j))).norm();
        double kd = 0.0;
        const auto neighborhood = detail::k_neighborhood(d, k, n_real /* no skip */, &kd);
        double sum_reach = 0.0, sum_lrd = 0.0;
        for (std::size_t q : neighborhood) {
            sum_reach += std::max(k_dist[q], d[q]);
            sum_lrd += lrd[q];
        }
        const double nn = static_cast<double>(neighborhood.size());
        const double lrd_p = 1.0 / (sum_reach / nn + detail::kLrdGuard);
        report.scores[static_cast<std::size_t>(p)] = (sum_lrd / nn) / lrd_p;
    }
    for (double v : report.scores)
        if (v > 1.0) ++report.n_outliers;
    return report;
}

// Count at a stricter cut. Reachability flooring keeps in-distribution
// points hovering just above 1, so > 1 flags most of any sample; 1.5 is the
// conventional novelty-prediction threshold and separates genuinely
// off-population rows.
inline std::size_t count_scores_above(const LofReport& report, double threshold) {
    std::size_t c = 0;
    for (double v : report.scores)
        if (v > threshold) ++c;
    return c;
}

}  // namespace causalgen
