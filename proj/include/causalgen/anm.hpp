#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <utility>
#include <vector>

#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/hsic.hpp"
#include "causalgen/kernel_ridge.hpp"

namespace causalgen {

// All DAGs on k labeled nodes, as canonical sorted edge lists. Generated from
// every node permutation crossed with every subset of forward pairs, then
// deduplicated; ordered by edge count, then lexicographically. Counts follow
// the labeled-DAG sequence: 1, 1, 3, 25, 543, 29281.
inline const std::vector<std::vector<Edge>>& enumerate_dags(int k) {
    if (k < 0 || k > 5) throw EnumerationLimitError("DAG enumeration supports at most 5 nodes");
    static const auto tables = [] {
        std::vector<std::vector<std::vector<Edge>>> all(6);
        for (int n = 0; n <= 5; ++n) {
            std::set<std::vector<Edge>> seen;
            std::vector<int> perm(static_cast<std::size_t>(n));
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<Edge> forward;  // position pairs (a earlier than b)
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) forward.push_back({a, b});
            do {
                const std::size_t n_pairs = forward.size();
                for (std::uint64_t mask = 0; mask < (1ULL << n_pairs); ++mask) {
                    std::vector<Edge> edges;
                    for (std::size_t p = 0; p < n_pairs; ++p) {
                        if (mask & (1ULL << p))
                            edges.push_back({perm[static_cast<std::size_t>(forward[p].first)],
                                             perm[static_cast<std::size_t>(forward[p].second)]});
                    }
                    std::sort(edges.begin(), edges.end());
                    seen.insert(std::move(edges));
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            std::vector<std::vector<Edge>> list(seen.begin(), seen.end());
            std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
                if (a.size() != b.size()) return a.size() < b.size();
                return a < b;
            });
            all[static_cast<std::size_t>(n)] = std::move(list);
        }
        return all;
    }();
    return tables[static_cast<std::size_t>(k)];
}

// Per-dataset cache for the discovery machinery. Columns are standardized
// once; bivariate test p-values, per-(target, parents) regressions and the
// kernel eigendecompositions they need are computed at most once each.
//
// max_rows > 0 caps the number of rows used by tests and regressions via a
// deterministic stride subsample; 0 means use everything.
class DiscoveryContext {
public:
    DiscoveryContext(const Dataset& data, double alpha, std::size_t max_rows = 0)
        : alpha_(alpha) {
        data.validate();
        const std::size_t n_full = data.n_rows();
        std::vector<std::size_t> rows;
        if (max_rows > 0 && n_full > max_rows) {
            const double stride = static_cast<double>(n_full) / static_cast<double>(max_rows);
            rows.reserve(max_rows);
            for (std::size_t i = 0; i < max_rows; ++i)
                rows.push_back(static_cast<std::size_t>(static_cast<double>(i) * stride));
        } else {
            rows.resize(n_full);
            std::iota(rows.begin(), rows.end(), std::size_t{0});
        }
        cols_.resize(static_cast<Eigen::Index>(rows.size()),
                     static_cast<Eigen::Index>(data.n_cols()));
        for (std::size_t j = 0; j < data.n_cols(); ++j)
            for (std::size_t i = 0; i < rows.size(); ++i)
                cols_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    data.columns[j][rows[i]];
        const ColumnScaler scaler = fit_scaler(cols_);
        cols_ = scaler.transform(cols_);
    }

    double alpha() const { return alpha_; }
    Eigen::Index n_rows() const { return cols_.rows(); }

    Matrix block(const VariableSet& vars) const {
        Matrix out(cols_.rows(), static_cast<Eigen::Index>(vars.size()));
        for (std::size_t c = 0; c < vars.size(); ++c)
            out.col(static_cast<Eigen::Index>(c)) = cols_.col(vars.indices[c]);
        return out;
    }

    // bivariate HSIC p-value, symmetric in (i, j)
    double pair_p(int i, int j) {
        const auto key = std::minmax(i, j);
        auto it = pair_p_.find(key);
        if (it != pair_p_.end()) return it->second;
        ++hsic_tests_;
        const double p =
            hsic_from_grams(singleton_gram(key.first), singleton_gram(key.second), alpha_).p_value;
        pair_p_.emplace(key, p);
        return p;
    }

    // residuals of regressing column `target` on the parent block
    const Vector& residuals(int target, const VariableSet& parents) {
        const RegKey key{target, parents};
        auto it = residuals_.find(key);
        if (it != residuals_.end()) return it->second;
        ++regressions_;
        auto model = KernelRidgeModel::fit(decomp(parents), cols_.col(target));
        return residuals_.emplace(key, model.residuals()).first->second;
    }

    // p-value of HSIC(residual of target | parents, parent block)
    double joint_residual_p(int target, const VariableSet& parents) {
        const RegKey key{target, parents};
        auto it = joint_p_.find(key);
        if (it != joint_p_.end()) return it->second;
        const Vector& resid = residuals(target, parents);
        Matrix rm(resid.size(), 1);
        rm.col(0) = resid;
        ++hsic_tests_;
        const double p = hsic_from_grams(hsic_gram(rm), block_gram(parents), alpha_).p_value;
        joint_p_.emplace(key, p);
        return p;
    }

    // HSIC between two disjoint multivariate blocks (not cached)
    HsicResult block_test(const VariableSet& a, const VariableSet& b) {
        ++hsic_tests_;
        return hsic_from_grams(block_gram(a), block_gram(b), alpha_);
    }

    Matrix block_gram(const VariableSet& vars) {
        if (vars.size() == 1) return singleton_gram(vars.indices.front());
        return hsic_gram(block(vars));
    }

    std::shared_ptr<const KernelDecomp> decomp(const VariableSet& parents) {
        auto it = decomps_.find(parents);
        if (it != decomps_.end()) return it->second;
        auto kd = std::make_shared<KernelDecomp>(KernelDecomp::build(block(parents)));
        decomps_.emplace(parents, kd);
        return kd;
    }

    // Eigendecompositions of multi-feature parent blocks are the bulky part
    // of the cache; callers drop them between variable sets. Cached p-values
    // and residuals stay.
    void clear_multi_decomps() {
        for (auto it = decomps_.begin(); it != decomps_.end();)
            it = it->first.size() > 1 ? decomps_.erase(it) : std::next(it);
    }

    std::size_t regressions_run() const { return regressions_; }
    std::size_t hsic_tests_run() const { return hsic_tests_; }

private:
    using RegKey = std::pair<int, VariableSet>;

    const Matrix& singleton_gram(int j) {
        auto it = single_grams_.find(j);
        if (it != single_grams_.end()) return it->second;
        return single_grams_.emplace(j, hsic_gram(cols_.col(j))).first->second;
    }

    double alpha_;
    Matrix cols_;
    std::map<std::pair<int, int>, double> pair_p_;
    std::map<RegKey, Vector> residuals_;
    std::map<RegKey, double> joint_p_;
    std::map<VariableSet, std::shared_ptr<const KernelDecomp>> decomps_;
    std::map<int, Matrix> single_grams_;
    std::size_t regressions_ = 0;
    std::size_t hsic_tests_ = 0;
};

enum class PartitionOutcome {
    Independent,
    UCausesV,
    VCausesU,
    NeitherConsistent,
    BothConsistent,
};

inline const char* to_string(PartitionOutcome o) {
    switch (o) {
        case PartitionOutcome::Independent: return "independent";
        case PartitionOutcome::UCausesV: return "u-causes-v";
        case PartitionOutcome::VCausesU: return "v-causes-u";
        case PartitionOutcome::NeitherConsistent: return "neither-consistent";
        case PartitionOutcome::BothConsistent: return "both-consistent";
    }
    return "?";
}

struct PartitionResult {
    PartitionOutcome outcome = PartitionOutcome::Independent;
    double pretest_p = std::numeric_limits<double>::quiet_NaN();
    // NaN when the pre-test already declared independence
    double forward_p = std::numeric_limits<double>::quiet_NaN();
    double reverse_p = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline double residual_block_p(DiscoveryContext& ctx, const VariableSet& targets,
                               const VariableSet& predictors) {
    Matrix resid(ctx.n_rows(), static_cast<Eigen::Index>(targets.size()));
    for (std::size_t c = 0; c < targets.size(); ++c)
        resid.col(static_cast<Eigen::Index>(c)) = ctx.residuals(targets.indices[c], predictors);
    return hsic_from_grams(hsic_gram(resid), ctx.block_gram(predictors), ctx.alpha()).p_value;
}

}  // namespace detail

// The five-outcome additive-noise-model direction test between two disjoint
// variable groups: pre-test independence, then check whether the residuals
// of each directional regression are independent of the regressors.
inline PartitionResult test_partition_with_context(DiscoveryContext& ctx, const VariableSet& u,
                                                   const VariableSet& v) {
    if (u.empty() || v.empty()) throw ValidationError("partition groups must be nonempty");
    if (u.intersects(v)) throw ValidationError("partition groups must be disjoint");

    PartitionResult res;
    res.pretest_p = ctx.block_test(u, v).p_value;
    if (res.pretest_p > ctx.alpha()) {
        res.outcome = PartitionOutcome::Independent;
        return res;
    }
    res.forward_p = detail::residual_block_p(ctx, v, u);   // v = f(u) + noise
    res.reverse_p = detail::residual_block_p(ctx, u, v);   // u = f(v) + noise
    const bool fwd_ok = res.forward_p > ctx.alpha();
    const bool rev_ok = res.reverse_p > ctx.alpha();
    if (fwd_ok && !rev_ok)
        res.outcome = PartitionOutcome::UCausesV;
    else if (rev_ok && !fwd_ok)
        res.outcome = PartitionOutcome::VCausesU;
    else if (fwd_ok && rev_ok)
        res.outcome = PartitionOutcome::BothConsistent;
    else
        res.outcome = PartitionOutcome::NeitherConsistent;
    return res;
}

inline PartitionResult test_partition(const Dataset& data, const VariableSet& u,
                                      const VariableSet& v, double alpha) {
    DiscoveryContext ctx(data, alpha);
    return test_partition_with_context(ctx, u, v);
}

// A candidate causal model over a variable subset. The DAG is positional:
// node p stands for variable_set.indices[p].
struct CandidateModel {
    VariableSet variable_set;
    Dag dag;
    bool accepted = false;
    std::vector<double> test_p_values;               // one per residual test, node-ascending
    std::vector<std::pair<int, double>> node_p;      // (non-source node, its test p)
    double avg_p_value = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct DagEvaluation {
    bool accepted = false;
    std::vector<std::pair<int, double>> node_p;
    double avg_p = 0.0;
};

inline DagEvaluation evaluate_dag(DiscoveryContext& ctx, const std::vector<Edge>& edges, int k,
                                  const std::vector<int>& vars) {
    DagEvaluation ev;
    const double alpha = ctx.alpha();

    // per-edge bivariate dependence: an edge between variables the data shows
    // as independent cannot be part of a consistent model
    for (const auto& [a, b] : edges)
        if (ctx.pair_p(vars[static_cast<std::size_t>(a)], vars[static_cast<std::size_t>(b)]) >
            alpha)
            return ev;

    std::vector<std::vector<int>> parent_sets(static_cast<std::size_t>(k));
    for (const auto& [a, b] : edges)
        parent_sets[static_cast<std::size_t>(b)].push_back(vars[static_cast<std::size_t>(a)]);

    // sources must be mutually independent
    std::vector<int> sources;
    for (int p = 0; p < k; ++p)
        if (parent_sets[static_cast<std::size_t>(p)].empty()) sources.push_back(p);
    for (std::size_t a = 0; a < sources.size(); ++a)
        for (std::size_t b = a + 1; b < sources.size(); ++b)
            if (ctx.pair_p(vars[static_cast<std::size_t>(sources[a])],
                           vars[static_cast<std::size_t>(sources[b])]) <= alpha)
                return ev;

    // every non-source: residual jointly independent of its parents
    double sum_p = 0.0;
    for (int p = 0; p < k; ++p) {
        if (parent_sets[static_cast<std::size_t>(p)].empty()) continue;
        const double jp = ctx.joint_residual_p(vars[static_cast<std::size_t>(p)],
                                               VariableSet(parent_sets[static_cast<std::size_t>(p)]));
        if (jp <= alpha) return ev;
        ev.node_p.push_back({p, jp});
        sum_p += jp;
    }
    ev.accepted = true;
    ev.avg_p = ev.node_p.empty() ? 0.0 : sum_p / static_cast<double>(ev.node_p.size());
    return ev;
}

inline std::vector<Edge> reversed_edges(const std::vector<Edge>& edges) {
    std::vector<Edge> rev;
    rev.reserve(edges.size());
    for (const auto& [a, b] : edges) rev.push_back({b, a});
    std::sort(rev.begin(), rev.end());
    return rev;
}

}  // namespace detail

// Model search over the variables `vars` of the context's dataset: every DAG on the
// subset is scored; a DAG is consistent when all its tests pass. Among the
// consistent DAGs, any model whose full edge reversal is also consistent is
// direction-ambiguous and discarded (for two variables this reproduces the
// five-outcome table exactly; in particular the empty DAG, being its own
// reversal, is never reported as a causal finding). The winner is the
// consistent DAG with the highest average residual-test p-value, ties going
// to fewer edges, then lexicographic edge order.
inline CandidateModel search_causal_model(DiscoveryContext& ctx, const VariableSet& vars) {
    const int k = static_cast<int>(vars.size());
    if (k < 2) throw ValidationError("model search needs at least two variables");
    if (k > 5) throw EnumerationLimitError("model search supports at most 5 variables");

    CandidateModel best;
    best.variable_set = vars;
    best.dag = Dag(k);

    const auto& dags = enumerate_dags(k);
    std::vector<detail::DagEvaluation> evals(dags.size());
    std::set<std::vector<Edge>> accepted_keys;
    for (std::size_t d = 0; d < dags.size(); ++d) {
        evals[d] = detail::evaluate_dag(ctx, dags[d], k, vars.indices);
        if (evals[d].accepted) accepted_keys.insert(dags[d]);
    }

    double best_avg = -1.0;
    std::size_t best_idx = dags.size();
    for (std::size_t d = 0; d < dags.size(); ++d) {
        if (!evals[d].accepted) continue;
        if (accepted_keys.count(detail::reversed_edges(dags[d]))) continue;  // ambiguous
        const auto& ev = evals[d];
        bool better = false;
        if (best_idx == dags.size()) {
            better = true;
        } else if (ev.avg_p != best_avg) {
            better = ev.avg_p > best_avg;
        } else if (dags[d].size() != dags[best_idx].size()) {
            better = dags[d].size() < dags[best_idx].size();
        } else {
            better = dags[d] < dags[best_idx];
        }
        if (better) {
            best_idx = d;
            best_avg = ev.avg_p;
        }
    }

    if (best_idx == dags.size()) return best;  // nothing unambiguous survived

    best.accepted = true;
    for (const auto& [a, b] : dags[best_idx]) best.dag.add_edge(a, b);
    best.node_p = evals[best_idx].node_p;
    for (const auto& [node, p] : best.node_p) best.test_p_values.push_back(p);
    best.avg_p_value = best_avg;
    return best;
}

// Model search on a dataset restricted to the variables of interest (all columns).
inline CandidateModel search_causal_model(const Dataset& data_subset, double alpha) {
    if (data_subset.n_cols() > 5)
        throw EnumerationLimitError("model search supports at most 5 variables");
    DiscoveryContext ctx(data_subset, alpha);
    std::vector<int> all(data_subset.n_cols());
    std::iota(all.begin(), all.end(), 0);
    return search_causal_model(ctx, VariableSet(all));
}

}  // namespace causalgen
