#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "causalgen/dataset.hpp"
#include "causalgen/special_functions.hpp"

namespace causalgen {

inline std::vector<double> midranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based midrank
        for (std::size_t q = i; q <= j; ++q) ranks[order[q]] = r;
        i = j + 1;
    }
    return ranks;
}

inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// two-sided p-value of the correlation via the exact t transform
inline double correlation_p_value(double r, std::size_t n) {
    if (n < 3) return 1.0;
    const double df = static_cast<double>(n) - 2.0;
    const double denom = 1.0 - r * r;
    if (denom <= 0.0) return 0.0;
    const double t = r * std::sqrt(df / denom);
    return student_t_two_sided_p(t, df);
}

inline double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_r(midranks(x), midranks(y));
}

// Hoeffding's D with midrank tie handling; O(n^2), fine at benchmark scale.
inline double hoeffding_d(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 5) throw SampleTooSmallError("Hoeffding's D requires at least 5 samples");
    const std::vector<double> r = midranks(x);
    const std::vector<double> s = midranks(y);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        double qi = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const bool xl = x[j] < x[i], xe = x[j] == x[i];
            const bool yl = y[j] < y[i], ye = y[j] == y[i];
            if (xl && yl)
                qi += 1.0;
            else if ((xl && ye) || (xe && yl))
                qi += 0.5;
            else if (xe && ye)
                qi += 0.25;
        }
        q[i] = qi;
    }
    double d1 = 0.0, d2 = 0.0, d3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        d1 += (q[i] - 1.0) * (q[i] - 2.0);
        d2 += (r[i] - 1.0) * (r[i] - 2.0) * (s[i] - 1.0) * (s[i] - 2.0);
        d3 += (r[i] - 2.0) * (s[i] - 2.0) * (q[i] - 1.0);
    }
    const double nd = static_cast<double>(n);
    return 30.0 * ((nd - 2.0) * (nd - 3.0) * d1 + d2 - 2.0 * (nd - 2.0) * d3) /
           (nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0) * (nd - 4.0));
}

enum class CorrelationMethod { Pearson, Spearman, Hoeffding };

inline CorrelationMethod correlation_method_from_string(const std::string& s) {
    if (s == "pearson") return CorrelationMethod::Pearson;
    if (s == "spearman") return CorrelationMethod::Spearman;
    if (s == "hoeffding") return CorrelationMethod::Hoeffding;
    throw ConfigError("unknown correlation method: " + s);
}

inline double default_correlation_threshold(CorrelationMethod m) {
    return m == CorrelationMethod::Hoeffding ? 0.03 : 0.05;
}

// Undirected pairwise relation flags; scored as both directed edges.
struct PairwiseFlags {
    int n_nodes = 0;
    std::set<std::pair<int, int>> pairs;  // i < j

    bool flagged(int i, int j) const {
        return pairs.count({std::min(i, j), std::max(i, j)}) > 0;
    }
};

// Pearson/Spearman flag a pair when the p-value falls below the threshold;
// Hoeffding when the D statistic exceeds it.
inline PairwiseFlags correlation_baselines(const Dataset& data, CorrelationMethod method,
                                           double threshold) {
    data.validate();
    PairwiseFlags out;
    out.n_nodes = static_cast<int>(data.n_cols());
    for (int i = 0; i < out.n_nodes; ++i) {
        for (int j = i + 1; j < out.n_nodes; ++j) {
            const auto& x = data.columns[static_cast<std::size_t>(i)];
            const auto& y = data.columns[static_cast<std::size_t>(j)];
            bool flag = false;
            switch (method) {
                case CorrelationMethod::Pearson:
                    flag = correlation_p_value(pearson_r(x, y), x.size()) < threshold;
                    break;
                case CorrelationMethod::Spearman:
                    flag = correlation_p_value(spearman_rho(x, y), x.size()) < threshold;
                    break;
                case CorrelationMethod::Hoeffding:
                    flag = hoeffding_d(x, y) > threshold;
                    break;
            }
            if (flag) out.pairs.insert({i, j});
        }
    }
    return out;
}

inline PairwiseFlags correlation_baselines(const Dataset& data, CorrelationMethod method) {
    return correlation_baselines(data, method, default_correlation_threshold(method));
}

}  // namespace causalgen
