#pragma once

#include <cstdint>
#include <vector>

#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/distribution_fit.hpp"
#include "causalgen/regressors.hpp"

namespace causalgen {

struct GenerationConfig {
    std::size_t n_rows = 1000;
    std::uint64_t rng_seed = 0;
    std::vector<DistFamily> families = default_families();
    // resample training residuals onto dependent columns; off by default, in
    // which case dependent features are deterministic functions of their
    // sampled parents
    bool residual_noise = false;
};

// Causality-respecting synthetic data: walk the graph in topological order;
// source features are sampled from their best-fitting parametric
// distribution, dependent features are the ensemble prediction applied to
// the already-generated synthetic parents. Column j draws from an RNG
// substream keyed by j, so output is independent of scheduling and
// bit-reproducible for a fixed (data, graph, seed).
inline Dataset generate_synthetic(const Dataset& real, const Dag& graph,
                                  const GenerationConfig& config,
                                  const EnsembleFactory& factory = default_ensemble_factory(),
                                  std::vector<int>* trace = nullptr) {
    real.validate();
    if (graph.n_nodes() != static_cast<int>(real.n_cols()))
        throw NodeCountMismatchError("graph node count does not match dataset columns");
    if (config.n_rows < 1) throw ConfigError("n_rows must be positive");

    const Rng root(config.rng_seed);
    Dataset synth;
    synth.attributes = real.attributes;
    synth.columns.assign(real.n_cols(), {});
    std::vector<bool> generated(real.n_cols(), false);

    for (int j : topological_sort(graph)) {
        const std::size_t col = static_cast<std::size_t>(j);
        const VariableSet pa = parents(graph, j);
        Rng stream = root.substream("column", static_cast<std::uint64_t>(j));
        if (pa.empty()) {
            const DistributionFit fit = fit_distribution(real.columns[col], config.families);
            synth.columns[col] = sample_distribution(fit, config.n_rows, stream);
        } else {
            for (int p : pa.indices)
                if (!generated[static_cast<std::size_t>(p)])
                    throw Error("internal: parent generated after child");
            const Matrix train_x = to_matrix(real, pa);
            Vector train_y(static_cast<Eigen::Index>(real.n_rows()));
            for (std::size_t i = 0; i < real.n_rows(); ++i)
                train_y(static_cast<Eigen::Index>(i)) = real.columns[col][i];
            RegressorEnsemble ens = factory(train_x, train_y, stream.substream("rff").seed());
            ens.input_features = pa;

            Matrix synth_x(static_cast<Eigen::Index>(config.n_rows),
                           static_cast<Eigen::Index>(pa.size()));
            for (std::size_t c = 0; c < pa.size(); ++c) {
                const auto& src = synth.columns[static_cast<std::size_t>(pa.indices[c])];
                for (std::size_t i = 0; i < config.n_rows; ++i)
                    synth_x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = src[i];
            }
            Vector pred = predict_ensemble(ens, synth_x);
            if (config.residual_noise) {
                const Vector in_sample = predict_ensemble(ens, train_x);
                const Vector resid = train_y - in_sample;
                Rng noise = stream.substream("residuals");
                for (Eigen::Index i = 0; i < pred.size(); ++i)
                    pred(i) += resid(static_cast<Eigen::Index>(
                        noise.uniform_index(static_cast<std::uint64_t>(resid.size()))));
            }
            synth.columns[col].assign(pred.data(), pred.data() + pred.size());
        }
        for (double v : synth.columns[col])
            if (!std::isfinite(v)) throw Error("generation produced a non-finite value");
        generated[col] = true;
        if (trace) trace->push_back(j);
    }
    return synth;
}

}  // namespace causalgen
