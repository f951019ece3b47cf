#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "causalgen/config.hpp"
#include "causalgen/discovery.hpp"
#include "causalgen/generation.hpp"
#include "causalgen/ground_truth.hpp"
#include "causalgen/lof.hpp"
#include "causalgen/metrics.hpp"
#include "causalgen/parallel.hpp"

namespace causalgen {

struct BenchmarkRow {
    std::size_t dag_index = 0;
    std::size_t dataset_index = 0;
    int n_nodes = 0;
    int n_edges = 0;
    EdgeMetrics discovery;          // pattern-boosted ANM search vs truth
    EdgeMetrics pearson;
    EdgeMetrics spearman;
    EdgeMetrics hoeffding;
    DistributionError gen_error;    // causality-respecting generator
    DistributionError rnd_error;    // uniform-independence baseline
    double gen_lof_median = 0.0;
    double rnd_lof_median = 0.0;
    std::size_t gen_outliers = 0;       // LOF > 1
    std::size_t rnd_outliers = 0;
    std::size_t gen_far_outliers = 0;   // LOF > 1.5, the novelty-prediction cut
    std::size_t rnd_far_outliers = 0;
};

struct BenchmarkSummary {
    std::vector<BenchmarkRow> rows;
};

namespace detail {

inline DistributionError distribution_error_against(const std::vector<KdeModel>& real_kdes,
                                                    const Dataset& synth, Rng& rng) {
    constexpr std::size_t kGridPoints = 1000;
    DistributionError total;
    for (std::size_t j = 0; j < synth.n_cols(); ++j) {
        const KdeModel kde_synth = kde_fit(synth.columns[j]);
        double sse = 0.0;
        for (std::size_t t = 0; t < kGridPoints; ++t) {
            const double x = real_kdes[j].sample_point(rng);
            const double diff = real_kdes[j].pdf(x) - kde_synth.pdf(x);
            sse += diff * diff;
        }
        total.sse += sse;
        total.rmse += std::sqrt(sse / static_cast<double>(kGridPoints));
    }
    total.sse /= static_cast<double>(synth.n_cols());
    total.rmse /= static_cast<double>(synth.n_cols());
    return total;
}

}  // namespace detail

// Full pipeline on one ground-truth dataset: discovery plus correlation
// baselines scored against the true DAG, then generation (discovered graph)
// against the uniform random baseline, scored by KDE error and LOF outlier
// counts. All randomness derives from `seed` and the (dag, dataset) index.
inline BenchmarkRow evaluate_dataset(const BenchmarkDag& entry, std::size_t dag_index,
                                     std::size_t dataset_index, const RunConfig& config) {
    const GroundTruthData& gt = entry.datasets[dataset_index];
    const Dataset& real = gt.dataset;
    BenchmarkRow row;
    row.dag_index = dag_index;
    row.dataset_index = dataset_index;
    row.n_nodes = entry.spec.n_nodes;
    row.n_edges = entry.spec.n_edges;

    const DiscoveryResult discovery = discover_structure(real, config);
    row.discovery = edge_metrics(entry.dag, discovery.dag);
    row.pearson = edge_metrics(
        entry.dag, correlation_baselines(real, CorrelationMethod::Pearson));
    row.spearman = edge_metrics(
        entry.dag, correlation_baselines(real, CorrelationMethod::Spearman));
    row.hoeffding = edge_metrics(
        entry.dag, correlation_baselines(real, CorrelationMethod::Hoeffding));

    const Rng root(config.seed);
    GenerationConfig gen_cfg;
    gen_cfg.n_rows = config.rows;
    gen_cfg.rng_seed = root.substream("generate").substream(dag_index, dataset_index).seed();
    const Dataset synth = generate_synthetic(real, discovery.dag, gen_cfg);

    Rng rnd_rng = root.substream("baseline").substream(dag_index, dataset_index);
    const Dataset rnd = random_baseline(real, config.rows, rnd_rng);

    std::vector<KdeModel> real_kdes;
    real_kdes.reserve(real.n_cols());
    for (std::size_t j = 0; j < real.n_cols(); ++j) real_kdes.push_back(kde_fit(real.columns[j]));

    Rng eval_gen = root.substream("eval-gen").substream(dag_index, dataset_index);
    row.gen_error = detail::distribution_error_against(real_kdes, synth, eval_gen);
    Rng eval_rnd = root.substream("eval-rnd").substream(dag_index, dataset_index);
    row.rnd_error = detail::distribution_error_against(real_kdes, rnd, eval_rnd);

    const LofReport gen_lof = lof_report(real, synth);
    const LofReport rnd_lof = lof_report(real, rnd);
    row.gen_lof_median = median_of(gen_lof.scores);
    row.rnd_lof_median = median_of(rnd_lof.scores);
    row.gen_outliers = gen_lof.n_outliers;
    row.rnd_outliers = rnd_lof.n_outliers;
    row.gen_far_outliers = count_scores_above(gen_lof, 1.5);
    row.rnd_far_outliers = count_scores_above(rnd_lof, 1.5);
    return row;
}

inline BenchmarkSummary run_benchmark(const BenchmarkBundle& bundle, const RunConfig& config,
                                      int threads = 1) {
    std::vector<std::pair<std::size_t, std::size_t>> items;
    for (std::size_t k = 0; k < bundle.dags.size(); ++k)
        for (std::size_t i = 0; i < bundle.dags[k].datasets.size(); ++i) items.push_back({k, i});
    BenchmarkSummary summary;
    summary.rows.resize(items.size());
    parallel_for(items.size(), threads, [&](std::size_t idx) {
        const auto [k, i] = items[idx];
        summary.rows[idx] = evaluate_dataset(bundle.dags[k], k, i, config);
    });
    return summary;
}

inline void write_summary_csv(std::ostream& out, const BenchmarkSummary& summary) {
    out << "dag,dataset,n_nodes,n_edges,"
           "accuracy,precision,recall,f1,"
           "pc_accuracy,pc_precision,pc_recall,pc_f1,"
           "sc_accuracy,sc_precision,sc_recall,sc_f1,"
           "hc_accuracy,hc_precision,hc_recall,hc_f1,"
           "gen_sse,gen_rmse,gen_lof_median,gen_outliers,gen_far_outliers,"
           "rnd_sse,rnd_rmse,rnd_lof_median,rnd_outliers,rnd_far_outliers\n";
    auto put_metrics = [&](const EdgeMetrics& m) {
        out << ',' << format_double(m.accuracy) << ',' << format_double(m.precision) << ','
            << format_double(m.recall) << ',' << format_double(m.f1);
    };
    for (const auto& r : summary.rows) {
        out << r.dag_index << ',' << r.dataset_index << ',' << r.n_nodes << ',' << r.n_edges;
        put_metrics(r.discovery);
        put_metrics(r.pearson);
        put_metrics(r.spearman);
        put_metrics(r.hoeffding);
        out << ',' << format_double(r.gen_error.sse) << ',' << format_double(r.gen_error.rmse)
            << ',' << format_double(r.gen_lof_median) << ',' << r.gen_outliers << ','
            << r.gen_far_outliers << ',' << format_double(r.rnd_error.sse) << ','
            << format_double(r.rnd_error.rmse) << ',' << format_double(r.rnd_lof_median) << ','
            << r.rnd_outliers << ',' << r.rnd_far_outliers << '\n';
    }
}

}  // namespace causalgen
