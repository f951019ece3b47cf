#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "causalgen/dataset.hpp"
#include "causalgen/errors.hpp"

namespace causalgen {

// One categorical value of a discretized feature.
struct Item {
    int feature = 0;
    int bin = 0;

    auto operator<=>(const Item&) const = default;
};

// Dense transactional view of a dataset: every row becomes a transaction
// holding exactly one item per feature. bin_edges[j] has n_bins+1 ascending
// entries spanning [min, max] of column j.
struct TransactionDb {
    std::vector<std::vector<int>> row_bins;        // n_rows x n_features
    std::vector<std::vector<double>> bin_edges;    // per feature
    std::vector<std::string> attribute_names;

    std::size_t n_transactions() const { return row_bins.size(); }
    std::size_t n_features() const { return bin_edges.size(); }
    int n_bins(int feature) const {
        return static_cast<int>(bin_edges[static_cast<std::size_t>(feature)].size()) - 1;
    }

    // "age_[20,32)"; the last bin is right-closed: "age_[68,80]"
    std::string item_label(const Item& it) const {
        const auto& edges = bin_edges[static_cast<std::size_t>(it.feature)];
        const bool last = it.bin + 2 == static_cast<int>(edges.size());
        return attribute_names[static_cast<std::size_t>(it.feature)] + "_[" +
               format_double(edges[static_cast<std::size_t>(it.bin)]) + "," +
               format_double(edges[static_cast<std::size_t>(it.bin) + 1]) + (last ? "]" : ")");
    }
};

// Equal-width binning of every column into n_bins intervals over [min, max].
// The maximum value falls into the last (right-closed) bin.
inline TransactionDb discretize(const Dataset& data, int n_bins) {
    if (n_bins < 2) throw ConfigError("n_bins must be at least 2");
    data.validate();
    const std::size_t m = data.n_cols();
    const std::size_t n = data.n_rows();

    std::string degenerate;
    for (std::size_t j = 0; j < m; ++j) {
        auto [lo, hi] = std::minmax_element(data.columns[j].begin(), data.columns[j].end());
        if (*hi - *lo <= 0.0) {
            if (!degenerate.empty()) degenerate += ", ";
            degenerate += data.attributes[j];
        }
    }
    if (!degenerate.empty())
        throw DegenerateColumnError("constant column(s): " + degenerate);

    TransactionDb db;
    db.attribute_names = data.attributes;
    db.bin_edges.resize(m);
    db.row_bins.assign(n, std::vector<int>(m, 0));
    for (std::size_t j = 0; j < m; ++j) {
        auto [lo_it, hi_it] = std::minmax_element(data.columns[j].begin(), data.columns[j].end());
        const double lo = *lo_it, hi = *hi_it;
        const double width = (hi - lo) / n_bins;
        auto& edges = db.bin_edges[j];
        edges.resize(static_cast<std::size_t>(n_bins) + 1);
        for (int b = 0; b <= n_bins; ++b) edges[static_cast<std::size_t>(b)] = lo + width * b;
        edges.back() = hi;  // guard against rounding drift
        for (std::size_t i = 0; i < n; ++i) {
            int b = static_cast<int>((data.columns[j][i] - lo) / width);
            b = std::clamp(b, 0, n_bins - 1);
            db.row_bins[i][j] = b;
        }
    }
    return db;
}

}  // namespace causalgen
