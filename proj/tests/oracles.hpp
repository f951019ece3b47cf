#pragma once

// Independent reference implementations used only to cross-check the
// library: deliberately naive, sharing no code with the paths they verify.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "causalgen/apriori.hpp"
#include "causalgen/hsic.hpp"
#include "causalgen/kernels.hpp"
#include "causalgen/rng.hpp"

namespace oracle {

using causalgen::Item;
using causalgen::ItemSet;
using causalgen::Matrix;
using causalgen::Rng;
using causalgen::TransactionDb;
using causalgen::Vector;

// Exhaustive frequent-itemset enumeration over the full subset lattice.
// Only feasible for a handful of distinct items.
inline std::vector<ItemSet> brute_force_frequent(const TransactionDb& db, double min_sup,
                                                 int max_len) {
    std::set<Item> item_set;
    for (const auto& row : db.row_bins)
        for (std::size_t j = 0; j < row.size(); ++j)
            item_set.insert(Item{static_cast<int>(j), row[j]});
    const std::vector<Item> items(item_set.begin(), item_set.end());
    if (items.size() > 20) throw std::runtime_error("too many items for the brute-force oracle");

    std::vector<ItemSet> out;
    for (std::uint64_t mask = 1; mask < (1ULL << items.size()); ++mask) {
        std::vector<Item> subset;
        for (std::size_t b = 0; b < items.size(); ++b)
            if (mask & (1ULL << b)) subset.push_back(items[b]);
        if (static_cast<int>(subset.size()) > max_len) continue;
        std::size_t count = 0;
        for (const auto& row : db.row_bins) {
            bool all = true;
            for (const Item& it : subset)
                if (row[static_cast<std::size_t>(it.feature)] != it.bin) {
                    all = false;
                    break;
                }
            if (all) ++count;
        }
        const double sup = static_cast<double>(count) / static_cast<double>(db.n_transactions());
        if (sup >= min_sup) out.push_back({subset, sup});
    }
    return out;
}

// O(k^2) pairwise-containment maximality filter.
inline std::vector<ItemSet> pairwise_maximal(const std::vector<ItemSet>& frequents) {
    std::vector<ItemSet> out;
    for (std::size_t i = 0; i < frequents.size(); ++i) {
        bool contained = false;
        for (std::size_t j = 0; j < frequents.size() && !contained; ++j) {
            if (i == j) continue;
            if (frequents[j].size() > frequents[i].size() &&
                frequents[j].contains(frequents[i]))
                contained = true;
        }
        if (!contained) out.push_back(frequents[i]);
    }
    return out;
}

// Permutation-test p-value for HSIC: shuffle the rows of y, recompute the
// statistic from permuted Gram lookups.
inline double hsic_permutation_p(const Matrix& x, const Matrix& y, int n_shuffles,
                                 std::uint64_t seed) {
    const Matrix k = causalgen::hsic_gram(x);
    const Matrix l = causalgen::hsic_gram(y);
    const Eigen::Index n = k.rows();

    auto statistic = [&](const std::vector<Eigen::Index>& perm) {
        // n * HSIC_b = (1/n) sum(Kc .* Lc) computed via the direct formula
        Matrix lp(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                lp(i, j) = l(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        const Vector k_mean = k.rowwise().mean();
        const Vector l_mean = lp.rowwise().mean();
        const double k_grand = k_mean.mean();
        const double l_grand = l_mean.mean();
        double sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                sum += (k(i, j) - k_mean(i) - k_mean(j) + k_grand) *
                       (lp(i, j) - l_mean(i) - l_mean(j) + l_grand);
        return sum / static_cast<double>(n);
    };

    std::vector<Eigen::Index> identity(static_cast<std::size_t>(n));
    std::iota(identity.begin(), identity.end(), 0);
    const double observed = statistic(identity);

    Rng rng(seed);
    int at_least = 0;
    std::vector<Eigen::Index> perm = identity;
    for (int s = 0; s < n_shuffles; ++s) {
        for (std::size_t i = perm.size() - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.uniform_index(i + 1)]);
        if (statistic(perm) >= observed) ++at_least;
    }
    return (1.0 + at_least) / (1.0 + n_shuffles);
}

// Direct kernel-ridge solve used to validate the eigendecomposition path:
// fitted = K (K + lambda I)^-1 (y - mean) + mean with the Gram rebuilt here.
inline Vector direct_kernel_ridge_fit(const Matrix& x, const Vector& y, double sigma,
                                      double lambda) {
    const causalgen::ColumnScaler scaler = causalgen::fit_scaler(x);
    const Matrix xs = scaler.transform(x);
    const Matrix gram = causalgen::rbf_gram(causalgen::pairwise_sq_dists(xs), sigma);
    const double mean = y.mean();
    const Vector yc = y.array() - mean;
    Matrix a = gram;
    a.diagonal().array() += lambda;
    const Vector alpha = a.fullPivLu().solve(yc);
    return (gram * alpha).array() + mean;
}

// Literal Breunig LOF in novelty mode, quadratic everything.
inline std::vector<double> naive_lof(const std::vector<std::vector<double>>& real,
                                     const std::vector<std::vector<double>>& query, int k) {
    auto dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(s);
    };
    const std::size_t n = real.size();

    auto neighborhood_of = [&](const std::vector<double>& p, bool skip_identical_index,
                               std::size_t skip) {
        std::vector<std::pair<double, std::size_t>> ds;
        for (std::size_t j = 0; j < n; ++j) {
            if (skip_identical_index && j == skip) continue;
            ds.push_back({dist(p, real[j]), j});
        }
        std::sort(ds.begin(), ds.end());
        const double k_dist = ds[static_cast<std::size_t>(k) - 1].first;
        std::vector<std::size_t> nbrs;
        for (const auto& [d, j] : ds) {
            if (d > k_dist) break;
            nbrs.push_back(j);
        }
        return std::pair{k_dist, nbrs};
    };

    std::vector<double> k_dist(n);
    std::vector<std::vector<std::size_t>> nbrs(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [kd, nb] = neighborhood_of(real[i], true, i);
        k_dist[i] = kd;
        nbrs[i] = std::move(nb);
    }
    std::vector<double> lrd(n);
    for (std::size_t i = 0; i < n; ++i) {
        double reach = 0.0;
        for (std::size_t q : nbrs[i]) reach += std::max(k_dist[q], dist(real[i], real[q]));
        lrd[i] = 1.0 / (reach / static_cast<double>(nbrs[i].size()) + 1e-10);
    }
    std::vector<double> out;
    for (const auto& p : query) {
        auto [kd, nb] = neighborhood_of(p, false, 0);
        double reach = 0.0, sum_lrd = 0.0;
        for (std::size_t q : nb) {
            reach += std::max(k_dist[q], dist(p, real[q]));
            sum_lrd += lrd[q];
        }
        const double nn = static_cast<double>(nb.size());
        const double lrd_p = 1.0 / (reach / nn + 1e-10);
        out.push_back((sum_lrd / nn) / lrd_p);
    }
    return out;
}

}  // namespace oracle
