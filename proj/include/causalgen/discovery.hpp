#pragma once

#include <chrono>
#include <ostream>
#include <string>
#include <vector>

#include "causalgen/anm.hpp"
#include "causalgen/apriori.hpp"
#include "causalgen/config.hpp"

namespace causalgen {

// Merge an accepted candidate model into the global graph. Edges are mapped
// from subset positions to dataset indices and inserted in descending order
// of their residual-test p-value (ties lexicographic); an edge that would
// close a cycle is skipped, never fatal.
inline Dag update_graph(const Dag& graph, const CandidateModel& candidate,
                        std::vector<Edge>* skipped = nullptr) {
    if (!candidate.accepted) throw ValidationError("update_graph requires an accepted model");
    struct Scored {
        Edge edge;
        double p;
    };
    std::vector<Scored> scored;
    for (const auto& [a, b] : candidate.dag.edges()) {
        double p = 0.0;
        for (const auto& [node, np] : candidate.node_p)
            if (node == b) p = np;
        scored.push_back({{candidate.variable_set.indices[static_cast<std::size_t>(a)],
                           candidate.variable_set.indices[static_cast<std::size_t>(b)]},
                          p});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
        if (x.p != y.p) return x.p > y.p;
        return x.edge < y.edge;
    });
    Dag out = graph;
    for (const auto& [edge, p] : scored) {
        if (out.has_edge(edge.first, edge.second)) continue;
        if (out.would_create_cycle(edge.first, edge.second)) {
            if (skipped) skipped->push_back(edge);
            continue;
        }
        out.add_edge(edge.first, edge.second);
    }
    return out;
}

struct CandidateDiagnostic {
    VariableSet variables;
    std::vector<Edge> edges;  // dataset indices
    bool accepted = false;
    double avg_p = std::numeric_limits<double>::quiet_NaN();
};

struct DiscoveryResult {
    Dag dag;
    std::vector<CandidateDiagnostic> candidates;
    std::size_t model_searches = 0;
    std::vector<Edge> skipped_edges;
    double apriori_seconds = 0.0;  // discretize + mining + variable extraction
    double search_seconds = 0.0;      // model search over the suggested sets
};

// Pattern-boosted structure discovery: mine maximal frequent itemsets from
// the discretized data, then run the additive-noise-model search only on the
// variable sets the patterns suggest. Each distinct variable set is analyzed
// once; accepted models are merged in sorted variable-set order so the
// result does not depend on scheduling.
inline DiscoveryResult discover_structure(const Dataset& data, const RunConfig& config) {
    config.validate();
    using Clock = std::chrono::steady_clock;
    DiscoveryResult result;
    result.dag = Dag(static_cast<int>(data.n_cols()));

    const auto t0 = Clock::now();
    const TransactionDb db = discretize(data, config.n_bins);
    const auto frequents = apriori(db, config.min_sup, config.max_len);
    const auto maximals = maximal_itemsets(frequents);
    const auto vsets = variable_sets(maximals);
    const auto t1 = Clock::now();
    result.apriori_seconds = std::chrono::duration<double>(t1 - t0).count();

    DiscoveryContext ctx(data, config.alpha, config.discovery_max_rows);
    for (const VariableSet& vars : vsets) {
        CandidateModel cand = search_causal_model(ctx, vars);
        ++result.model_searches;
        CandidateDiagnostic diag;
        diag.variables = vars;
        diag.accepted = cand.accepted;
        diag.avg_p = cand.avg_p_value;
        for (const auto& [a, b] : cand.dag.edges())
            diag.edges.push_back({vars.indices[static_cast<std::size_t>(a)],
                                  vars.indices[static_cast<std::size_t>(b)]});
        result.candidates.push_back(std::move(diag));
        if (cand.accepted) result.dag = update_graph(result.dag, cand, &result.skipped_edges);
        ctx.clear_multi_decomps();
    }
    result.search_seconds = std::chrono::duration<double>(Clock::now() - t1).count();
    return result;
}

inline DiscoveryResult discover_structure(const Dataset& data, int n_bins, double min_sup,
                                          int max_len, double alpha,
                                          std::size_t discovery_max_rows = 500) {
    RunConfig cfg;
    cfg.n_bins = n_bins;
    cfg.min_sup = min_sup;
    cfg.max_len = max_len;
    cfg.alpha = alpha;
    cfg.discovery_max_rows = discovery_max_rows;
    return discover_structure(data, cfg);
}

// Diagnostic CSV: one row per analyzed variable set.
inline void write_candidate_log(std::ostream& out, const DiscoveryResult& result,
                                const std::vector<std::string>& names) {
    out << "variables,edges,accepted,avg_p\n";
    for (const auto& c : result.candidates) {
        std::string vars;
        for (std::size_t i = 0; i < c.variables.size(); ++i) {
            if (i) vars += ';';
            vars += names[static_cast<std::size_t>(c.variables.indices[i])];
        }
        std::string edges;
        for (std::size_t i = 0; i < c.edges.size(); ++i) {
            if (i) edges += ';';
            edges += names[static_cast<std::size_t>(c.edges[i].first)] + "->" +
                     names[static_cast<std::size_t>(c.edges[i].second)];
        }
        out << vars << ',' << edges << ',' << (c.accepted ? 1 : 0) << ','
            << (std::isnan(c.avg_p) ? "" : format_double(c.avg_p)) << '\n';
    }
}

}  // namespace causalgen
