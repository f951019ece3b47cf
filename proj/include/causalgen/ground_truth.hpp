#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/errors.hpp"
#include "causalgen/rng.hpp"

namespace causalgen {

enum class IndependentMode { UniformRandomBounds, MixedFamilies };

inline const char* to_string(IndependentMode m) {
    return m == IndependentMode::UniformRandomBounds ? "uniform-random-bounds" : "mixed-families";
}
inline IndependentMode independent_mode_from_string(const std::string& s) {
    if (s == "uniform-random-bounds" || s == "uniform") return IndependentMode::UniformRandomBounds;
    if (s == "mixed-families" || s == "mixed") return IndependentMode::MixedFamilies;
    throw ConfigError("unknown independent mode: " + s);
}

struct GroundTruthSpec {
    int n_nodes = 5;
    int n_edges = 2;
    IndependentMode independent_mode = IndependentMode::UniformRandomBounds;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (n_nodes < 1) throw ConfigError("n_nodes must be positive");
        if (n_edges < 0 || n_edges > n_nodes * (n_nodes - 1) / 2)
            throw ConfigError("n_edges out of range for node count");
    }
};

enum class UnaryOp { Sin, Cos, Sqrt, Log, Tan };
enum class BinaryOp { Add, Sub, Mul };

inline const char* to_string(UnaryOp op) {
    switch (op) {
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Sqrt: return "sqrt";
        case UnaryOp::Log: return "log";
        case UnaryOp::Tan: return "tan";
    }
    return "?";
}
inline const char* to_string(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "add";
        case BinaryOp::Sub: return "sub";
        case BinaryOp::Mul: return "mul";
    }
    return "?";
}
inline UnaryOp unary_from_string(const std::string& s) {
    if (s == "sin") return UnaryOp::Sin;
    if (s == "cos") return UnaryOp::Cos;
    if (s == "sqrt") return UnaryOp::Sqrt;
    if (s == "log") return UnaryOp::Log;
    if (s == "tan") return UnaryOp::Tan;
    throw ConfigError("unknown unary op: " + s);
}
inline BinaryOp binary_from_string(const std::string& s) {
    if (s == "add") return BinaryOp::Add;
    if (s == "sub") return BinaryOp::Sub;
    if (s == "mul") return BinaryOp::Mul;
    throw ConfigError("unknown binary op: " + s);
}

// Domain-guarded nonlinearities keep every structural value finite: sqrt and
// log act on magnitudes, tan is clamped.
inline double apply_unary(UnaryOp op, double x) {
    switch (op) {
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Sqrt: return std::sqrt(std::fabs(x));
        case UnaryOp::Log: return std::log1p(std::fabs(x));
        case UnaryOp::Tan: return std::clamp(std::tan(x), -10.0, 10.0);
    }
    return 0.0;
}
inline double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
    }
    return 0.0;
}

// child = fold(unary(parents)) + U(-1, 1); parents ordered ascending, the
// fold combines left to right.
struct StructuralEquation {
    int child = 0;
    VariableSet parents;
    std::vector<UnaryOp> unary_ops;      // one per parent
    std::vector<BinaryOp> combiner_ops;  // |parents| - 1

    double evaluate(const std::vector<double>& parent_values) const {
        double acc = apply_unary(unary_ops[0], parent_values[0]);
        for (std::size_t k = 1; k < parent_values.size(); ++k)
            acc = apply_binary(combiner_ops[k - 1], acc, apply_unary(unary_ops[k], parent_values[k]));
        return acc;
    }
};

// How a source (parentless) column was drawn, for manifest auditability.
struct SourceSpec {
    int node = 0;
    std::string family;
    std::vector<double> params;
};

// DAG with exactly spec.n_edges edges: pairs are rejection-sampled and every
// pair is oriented from earlier to later in a random node permutation, so
// the result is acyclic by construction.
inline Dag random_dag(const GroundTruthSpec& spec, Rng& rng) {
    spec.validate();
    const int n = spec.n_nodes;
    std::vector<int> position(static_cast<std::size_t>(n));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[rng.uniform_index(static_cast<std::uint64_t>(i) + 1)]);
    for (int i = 0; i < n; ++i) position[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = i;

    Dag dag(n);
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < spec.n_edges) {
        int a = rng.uniform_int(0, n - 1);
        int b = rng.uniform_int(0, n - 1);
        if (a == b) continue;
        if (position[static_cast<std::size_t>(a)] > position[static_cast<std::size_t>(b)])
            std::swap(a, b);
        if (chosen.insert({a, b}).second) dag.add_edge(a, b);
    }
    return dag;
}

namespace detail {

inline SourceSpec draw_source_spec(int node, IndependentMode mode, Rng& rng) {
    SourceSpec s;
    s.node = node;
    if (mode == IndependentMode::UniformRandomBounds) {
        double lo = rng.uniform(5.0, 100.0);
        double hi = rng.uniform(5.0, 100.0);
        if (hi < lo) std::swap(lo, hi);
        if (hi - lo < 0.5) hi = lo + 0.5;
        s.family = "uniform";
        s.params = {lo, hi};
        return s;
    }
    switch (rng.uniform_int(0, 5)) {
        case 0: {
            double lo = rng.uniform(5.0, 100.0);
            double hi = rng.uniform(5.0, 100.0);
            if (hi < lo) std::swap(lo, hi);
            if (hi - lo < 0.5) hi = lo + 0.5;
            s.family = "uniform";
            s.params = {lo, hi};
            break;
        }
        case 1:
            s.family = "normal";
            s.params = {rng.uniform(5.0, 100.0), rng.uniform(1.0, 10.0)};
            break;
        case 2:
            s.family = "exponential";
            s.params = {rng.uniform(1.0, 15.0)};
            break;
        case 3:
            s.family = "lognormal";
            s.params = {rng.uniform(0.0, 3.0), rng.uniform(0.25, 0.75)};
            break;
        case 4:
            s.family = "chisquare";
            s.params = {static_cast<double>(rng.uniform_int(1, 10))};
            break;
        default:
            s.family = "beta";
            s.params = {rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0), rng.uniform(10.0, 50.0)};
            break;
    }
    return s;
}

inline double sample_source(const SourceSpec& s, Rng& rng) {
    if (s.family == "uniform") return rng.uniform(s.params[0], s.params[1]);
    if (s.family == "normal") return rng.normal(s.params[0], s.params[1]);
    if (s.family == "exponential") return rng.exponential(s.params[0]);
    if (s.family == "lognormal") return rng.lognormal(s.params[0], s.params[1]);
    if (s.family == "chisquare") return rng.chi_squared(s.params[0]);
    if (s.family == "beta") return s.params[2] * rng.beta_dist(s.params[0], s.params[1]);
    throw ConfigError("unknown source family: " + s.family);
}

}  // namespace detail

struct GroundTruthData {
    Dataset dataset;
    std::vector<SourceSpec> sources;
    std::vector<StructuralEquation> equations;
};

// Continuous dataset respecting the DAG: sources drawn per the independent
// mode, children computed from their (already generated) parents through
// random unary/binary op draws; every column gets uniform [-1, 1] noise.
// Noise propagates downstream because children read the noisy parent values.
inline GroundTruthData synthesize_dataset(const Dag& graph, std::size_t n_rows,
                                          IndependentMode mode, Rng& rng) {
    if (n_rows < 1) throw ConfigError("n_rows must be positive");
    GroundTruthData out;
    out.dataset.attributes.resize(static_cast<std::size_t>(graph.n_nodes()));
    out.dataset.columns.assign(static_cast<std::size_t>(graph.n_nodes()),
                               std::vector<double>(n_rows, 0.0));
    for (int j = 0; j < graph.n_nodes(); ++j)
        out.dataset.attributes[static_cast<std::size_t>(j)] = "x" + std::to_string(j);

    for (int j : topological_sort(graph)) {
        auto& col = out.dataset.columns[static_cast<std::size_t>(j)];
        const VariableSet pa = parents(graph, j);
        if (pa.empty()) {
            SourceSpec spec = detail::draw_source_spec(j, mode, rng);
            for (std::size_t i = 0; i < n_rows; ++i)
                col[i] = detail::sample_source(spec, rng) + rng.uniform(-1.0, 1.0);
            out.sources.push_back(std::move(spec));
        } else {
            StructuralEquation eq;
            eq.child = j;
            eq.parents = pa;
            for (std::size_t k = 0; k < pa.size(); ++k)
                eq.unary_ops.push_back(static_cast<UnaryOp>(rng.uniform_int(0, 4)));
            for (std::size_t k = 0; k + 1 < pa.size(); ++k)
                eq.combiner_ops.push_back(static_cast<BinaryOp>(rng.uniform_int(0, 2)));
            std::vector<double> pv(pa.size());
            for (std::size_t i = 0; i < n_rows; ++i) {
                for (std::size_t k = 0; k < pa.size(); ++k)
                    pv[k] = out.dataset.columns[static_cast<std::size_t>(pa.indices[k])][i];
                col[i] = eq.evaluate(pv) + rng.uniform(-1.0, 1.0);
            }
            out.equations.push_back(std::move(eq));
        }
    }
    return out;
}

struct BenchmarkDag {
    GroundTruthSpec spec;
    Dag dag;
    std::vector<GroundTruthData> datasets;
};

struct BenchmarkBundle {
    std::uint64_t seed = 0;
    std::size_t n_dags = 0;
    std::size_t datasets_per_dag = 0;
    std::size_t n_rows = 0;
    IndependentMode mode = IndependentMode::UniformRandomBounds;
    std::vector<BenchmarkDag> dags;
};

// Ground-truth bundle: n_dags random DAGs, datasets_per_dag fresh generative
// runs each. RNG streams are partitioned by (dag index, dataset index), so
// any dataset can be regenerated in isolation.
inline BenchmarkBundle make_benchmark(std::size_t n_dags, std::size_t datasets_per_dag,
                                      std::size_t n_rows, std::uint64_t seed,
                                      IndependentMode mode) {
    if (n_dags < 1 || datasets_per_dag < 1 || n_rows < 1)
        throw ConfigError("benchmark counts must be positive");
    BenchmarkBundle bundle;
    bundle.seed = seed;
    bundle.n_dags = n_dags;
    bundle.datasets_per_dag = datasets_per_dag;
    bundle.n_rows = n_rows;
    bundle.mode = mode;
    const Rng root(seed);
    for (std::size_t k = 0; k < n_dags; ++k) {
        BenchmarkDag entry;
        Rng dag_rng = root.substream("dag", k);
        entry.spec.n_nodes = dag_rng.uniform_int(5, 20);
        entry.spec.n_edges = dag_rng.uniform_int(2, entry.spec.n_nodes / 2);
        entry.spec.independent_mode = mode;
        entry.spec.rng_seed = dag_rng.seed();
        entry.dag = random_dag(entry.spec, dag_rng);
        for (std::size_t i = 0; i < datasets_per_dag; ++i) {
            Rng data_rng = root.substream("data").substream(k, i);
            entry.datasets.push_back(synthesize_dataset(entry.dag, n_rows, mode, data_rng));
        }
        bundle.dags.push_back(std::move(entry));
    }
    return bundle;
}

inline nlohmann::json bundle_manifest(const BenchmarkBundle& bundle) {
    nlohmann::json manifest;
    manifest["seed"] = bundle.seed;
    manifest["n_dags"] = bundle.n_dags;
    manifest["datasets_per_dag"] = bundle.datasets_per_dag;
    manifest["n_rows"] = bundle.n_rows;
    manifest["independent_mode"] = to_string(bundle.mode);
    auto dags = nlohmann::json::array();
    for (std::size_t k = 0; k < bundle.dags.size(); ++k) {
        const auto& entry = bundle.dags[k];
        nlohmann::json dj;
        dj["index"] = k;
        dj["n_nodes"] = entry.spec.n_nodes;
        dj["n_edges"] = entry.spec.n_edges;
        auto edges = nlohmann::json::array();
        for (const auto& [a, b] : entry.dag.edges()) edges.push_back({a, b});
        dj["edges"] = edges;
        auto datasets = nlohmann::json::array();
        for (std::size_t i = 0; i < entry.datasets.size(); ++i) {
            const auto& data = entry.datasets[i];
            nlohmann::json dsj;
            dsj["file"] = "dag_" + std::to_string(k) + "/data_" + std::to_string(i) + ".csv";
            auto sources = nlohmann::json::array();
            for (const auto& s : data.sources)
                sources.push_back({{"node", s.node}, {"family", s.family}, {"params", s.params}});
            dsj["sources"] = sources;
            auto eqs = nlohmann::json::array();
            for (const auto& eq : data.equations) {
                std::vector<std::string> unary, binary;
                for (auto op : eq.unary_ops) unary.push_back(to_string(op));
                for (auto op : eq.combiner_ops) binary.push_back(to_string(op));
                eqs.push_back({{"child", eq.child},
                               {"parents", eq.parents.indices},
                               {"unary", unary},
                               {"binary", binary}});
            }
            dsj["equations"] = eqs;
            datasets.push_back(std::move(dsj));
        }
        dj["datasets"] = datasets;
        dags.push_back(std::move(dj));
    }
    manifest["dags"] = dags;
    return manifest;
}

// dag_<k>.json, dag_<k>/data_<i>.csv and manifest.json under dir
inline void write_bundle(const BenchmarkBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < bundle.dags.size(); ++k) {
        const auto& entry = bundle.dags[k];
        {
            std::ofstream f(fs::path(dir) / ("dag_" + std::to_string(k) + ".json"));
            if (!f) throw IoError("cannot write DAG file in " + dir);
            f << entry.dag.to_json(entry.datasets.front().dataset.attributes).dump(2) << '\n';
        }
        fs::create_directories(fs::path(dir) / ("dag_" + std::to_string(k)));
        for (std::size_t i = 0; i < entry.datasets.size(); ++i) {
            const auto path =
                fs::path(dir) / ("dag_" + std::to_string(k)) / ("data_" + std::to_string(i) + ".csv");
            entry.datasets[i].dataset.to_csv_file(path.string());
        }
    }
    std::ofstream mf(fs::path(dir) / "manifest.json");
    if (!mf) throw IoError("cannot write manifest in " + dir);
    mf << bundle_manifest(bundle).dump(2) << '\n';
}

}  // namespace causalgen
