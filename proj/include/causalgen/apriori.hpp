#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "causalgen/discretize.hpp"
#include "causalgen/variable_set.hpp"

namespace causalgen {

struct ItemSet {
    std::vector<Item> items;  // sorted, duplicate-free
    double support = 0.0;

    std::size_t size() const { return items.size(); }

    bool contains(const ItemSet& other) const {
        return std::includes(items.begin(), items.end(), other.items.begin(), other.items.end());
    }
};

namespace detail {

inline bool transaction_contains(const std::vector<int>& row_bins, const std::vector<Item>& items) {
    for (const Item& it : items)
        if (row_bins[static_cast<std::size_t>(it.feature)] != it.bin) return false;
    return true;
}

inline double support_of(const TransactionDb& db, const std::vector<Item>& items) {
    std::size_t count = 0;
    for (const auto& row : db.row_bins)
        if (transaction_contains(row, items)) ++count;
    return static_cast<double>(count) / static_cast<double>(db.n_transactions());
}

}  // namespace detail

// Level-wise Apriori. Candidates of size k are produced by the sorted-prefix
// join of the frequent (k-1)-sets and pruned by downward closure before any
// support is counted; supports are then counted in one pass per level.
inline std::vector<ItemSet> apriori(const TransactionDb& db, double min_sup, int max_len) {
    if (min_sup <= 0.0 || min_sup > 1.0) throw ConfigError("min_sup must be in (0, 1]");
    if (max_len < 2) throw ConfigError("max_len must be at least 2");
    if (db.n_transactions() == 0) return {};

    std::vector<ItemSet> result;

    // level 1: count every item directly
    std::map<Item, std::size_t> counts;
    for (const auto& row : db.row_bins)
        for (std::size_t j = 0; j < row.size(); ++j)
            counts[Item{static_cast<int>(j), row[j]}]++;
    std::vector<std::vector<Item>> level;
    for (const auto& [item, c] : counts) {
        double sup = static_cast<double>(c) / static_cast<double>(db.n_transactions());
        if (sup >= min_sup) {
            result.push_back({{item}, sup});
            level.push_back({item});
        }
    }

    for (int k = 2; k <= max_len && level.size() > 1; ++k) {
        std::set<std::vector<Item>> prev(level.begin(), level.end());
        std::vector<std::vector<Item>> candidates;
        for (std::size_t a = 0; a < level.size(); ++a) {
            for (std::size_t b = a + 1; b < level.size(); ++b) {
                if (!std::equal(level[a].begin(), level[a].end() - 1, level[b].begin(),
                                level[b].end() - 1))
                    continue;
                std::vector<Item> cand = level[a];
                cand.push_back(level[b].back());
                if (cand[cand.size() - 2] > cand.back())
                    std::swap(cand[cand.size() - 2], cand.back());
                // two bins of the same feature never co-occur
                if (cand[cand.size() - 2].feature == cand.back().feature) continue;
                bool all_frequent = true;
                for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
                    std::vector<Item> sub;
                    sub.reserve(cand.size() - 1);
                    for (std::size_t q = 0; q < cand.size(); ++q)
                        if (q != drop) sub.push_back(cand[q]);
                    all_frequent = prev.count(sub) > 0;
                }
                if (all_frequent) candidates.push_back(std::move(cand));
            }
        }
        level.clear();
        for (auto& cand : candidates) {
            double sup = detail::support_of(db, cand);
            if (sup >= min_sup) {
                result.push_back({cand, sup});
                level.push_back(std::move(cand));
            }
        }
    }
    return result;
}

// Frequent itemsets not strictly contained in another frequent itemset.
// Input must be downward-closed (apriori output), so it is enough to mark
// the k-subsets of every (k+1)-set.
inline std::vector<ItemSet> maximal_itemsets(const std::vector<ItemSet>& frequents) {
    std::set<std::vector<Item>> shadowed;
    for (const ItemSet& s : frequents) {
        if (s.size() < 2) continue;
        for (std::size_t drop = 0; drop < s.items.size(); ++drop) {
            std::vector<Item> sub;
            sub.reserve(s.items.size() - 1);
            for (std::size_t q = 0; q < s.items.size(); ++q)
                if (q != drop) sub.push_back(s.items[q]);
            shadowed.insert(std::move(sub));
        }
    }
    std::vector<ItemSet> out;
    for (const ItemSet& s : frequents)
        if (!shadowed.count(s.items)) out.push_back(s);
    return out;
}

// Distinct feature sets of the maximal itemsets; singleton sets carry no
// relationship and are dropped. Output is sorted for deterministic iteration.
inline std::vector<VariableSet> variable_sets(const std::vector<ItemSet>& maximals) {
    std::set<VariableSet> seen;
    for (const ItemSet& s : maximals) {
        std::vector<int> feats;
        for (const Item& it : s.items) feats.push_back(it.feature);
        VariableSet vs(std::move(feats));
        if (vs.size() >= 2) seen.insert(std::move(vs));
    }
    return {seen.begin(), seen.end()};
}

// One itemset per line: "support<TAB>item,item,...".
inline void dump_itemsets(std::ostream& out, const TransactionDb& db,
                          const std::vector<ItemSet>& sets) {
    for (const ItemSet& s : sets) {
        out << format_double(s.support) << '\t';
        for (std::size_t i = 0; i < s.items.size(); ++i) {
            if (i) out << ',';
            out << db.item_label(s.items[i]);
        }
        out << '\n';
    }
}

}  // namespace causalgen
