#include <catch2/catch.hpp>

#include "causalgen/correlation.hpp"
#include "causalgen/distribution_fit.hpp"
#include "causalgen/generation.hpp"
#include "causalgen/rng.hpp"
#include "test_helpers.hpp"

using namespace causalgen;

namespace {

Dataset uniform_table(int n, int cols, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> data(static_cast<std::size_t>(cols),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<std::string> names;
    for (int c = 0; c < cols; ++c) {
        names.push_back("c" + std::to_string(c));
        for (auto& v : data[static_cast<std::size_t>(c)]) v = rng.uniform(c, c + 1.0);
    }
    return testutil::make_dataset(names, data);
}

Dataset cubic_chain(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = rng.uniform(-3, 3);
        v[static_cast<std::size_t>(i)] =
            std::pow(u[static_cast<std::size_t>(i)], 3) + rng.uniform(-1, 1);
    }
    return testutil::make_dataset({"u", "v"}, {u, v});
}

// single shared stub: every member predicts 2 * first parent
struct StubRegressor final : Regressor {
    void fit(const Matrix&, const Vector&) override {}
    Vector predict(const Matrix& x) const override { return 2.0 * x.col(0); }
};

}  // namespace

TEST_CASE("independent columns pass a KS check against their fits", "[slow]") {
    // empty graph: every synthetic column should look like its real marginal
    int passes = 0;
    for (int run = 0; run < 10; ++run) {
        const Dataset real = uniform_table(800, 2, 100 + static_cast<std::uint64_t>(run));
        GenerationConfig cfg;
        cfg.n_rows = 800;
        cfg.rng_seed = 7000 + static_cast<std::uint64_t>(run);
        const Dataset synth = generate_synthetic(real, Dag(2), cfg);
        bool all_ok = true;
        for (std::size_t j = 0; j < real.n_cols(); ++j) {
            const auto fit = fit_distribution(real.columns[j], cfg.families);
            // 1% KS critical value
            if (ks_statistic(fit, synth.columns[j]) >= 1.63 / std::sqrt(800.0)) all_ok = false;
        }
        if (all_ok) ++passes;
    }
    CHECK(passes >= 9);
}

TEST_CASE("chain generation preserves the parent-child correlation", "[slow]") {
    const Dataset real = cubic_chain(1000, 3);
    Dag dag(2);
    dag.add_edge(0, 1);
    GenerationConfig cfg;
    cfg.n_rows = 1000;
    cfg.rng_seed = 99;
    const Dataset synth = generate_synthetic(real, dag, cfg);
    const double real_rho = spearman_rho(real.columns[0], real.columns[1]);
    const double synth_rho = spearman_rho(synth.columns[0], synth.columns[1]);
    CHECK(std::fabs(real_rho - synth_rho) < 0.15);

    SECTION("dependent values stay within the real range envelope") {
        double lo = real.columns[1][0], hi = lo, mean = 0.0;
        for (double v : real.columns[1]) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= static_cast<double>(real.n_rows());
        double sd = 0.0;
        for (double v : real.columns[1]) sd += (v - mean) * (v - mean);
        sd = std::sqrt(sd / static_cast<double>(real.n_rows()));
        std::size_t inside = 0;
        for (double v : synth.columns[1])
            if (v >= lo - 3 * sd && v <= hi + 3 * sd) ++inside;
        CHECK(static_cast<double>(inside) >= 0.99 * static_cast<double>(synth.n_rows()));
    }
}

TEST_CASE("generation is deterministic per seed") {
    const Dataset real = cubic_chain(300, 5);
    Dag dag(2);
    dag.add_edge(0, 1);
    GenerationConfig cfg;
    cfg.n_rows = 200;
    cfg.rng_seed = 41;
    const Dataset a = generate_synthetic(real, dag, cfg);
    const Dataset b = generate_synthetic(real, dag, cfg);
    CHECK(a.columns == b.columns);
    cfg.rng_seed = 42;
    const Dataset c = generate_synthetic(real, dag, cfg);
    CHECK(a.columns != c.columns);
}

TEST_CASE("single-row generation works and is finite") {
    const Dataset real = cubic_chain(200, 6);
    Dag dag(2);
    dag.add_edge(0, 1);
    GenerationConfig cfg;
    cfg.n_rows = 1;
    cfg.rng_seed = 5;
    const Dataset synth = generate_synthetic(real, dag, cfg);
    REQUIRE(synth.n_rows() == 1);
    for (const auto& col : synth.columns)
        for (double v : col) CHECK(std::isfinite(v));
}

TEST_CASE("parents are always generated before children") {
    Rng rng(8);
    // diamond: 0 -> 1, 0 -> 2, 1 -> 3, 2 -> 3
    Dag dag(4);
    dag.add_edge(0, 1);
    dag.add_edge(0, 2);
    dag.add_edge(1, 3);
    dag.add_edge(2, 3);
    std::vector<std::vector<double>> cols(4, std::vector<double>(200));
    for (int i = 0; i < 200; ++i) {
        const double a = rng.uniform(-2, 2);
        cols[0][static_cast<std::size_t>(i)] = a;
        cols[1][static_cast<std::size_t>(i)] = a * a + rng.uniform(-0.1, 0.1);
        cols[2][static_cast<std::size_t>(i)] = std::sin(a) + rng.uniform(-0.1, 0.1);
        cols[3][static_cast<std::size_t>(i)] = cols[1][static_cast<std::size_t>(i)] +
                                               cols[2][static_cast<std::size_t>(i)] +
                                               rng.uniform(-0.1, 0.1);
    }
    const auto real = testutil::make_dataset({"a", "b", "c", "d"}, cols);
    GenerationConfig cfg;
    cfg.n_rows = 50;
    std::vector<int> trace;
    generate_synthetic(real, dag, cfg, default_ensemble_factory(), &trace);
    REQUIRE(trace.size() == 4);
    std::vector<int> pos(4);
    for (std::size_t i = 0; i < trace.size(); ++i) pos[static_cast<std::size_t>(trace[i])] =
        static_cast<int>(i);
    for (const auto& [a, b] : dag.edges()) CHECK(pos[static_cast<std::size_t>(a)] <
                                                 pos[static_cast<std::size_t>(b)]);
}

TEST_CASE("stub ensemble drives dependent columns exactly") {
    const Dataset real = cubic_chain(200, 9);
    Dag dag(2);
    dag.add_edge(0, 1);
    GenerationConfig cfg;
    cfg.n_rows = 100;
    cfg.rng_seed = 77;
    const EnsembleFactory stub_factory = [](const Matrix& x, const Vector&, std::uint64_t) {
        RegressorEnsemble ens;
        ens.train_cols = x.cols();
        for (int m = 0; m < 4; ++m) ens.members.push_back(std::make_unique<StubRegressor>());
        return ens;
    };
    const Dataset synth = generate_synthetic(real, dag, cfg, stub_factory);
    for (std::size_t i = 0; i < synth.n_rows(); ++i)
        CHECK(synth.columns[1][i] == Approx(2.0 * synth.columns[0][i]).margin(1e-12));
}

TEST_CASE("graph/dataset mismatches are rejected") {
    const Dataset real = cubic_chain(100, 10);
    CHECK_THROWS_AS(generate_synthetic(real, Dag(3), GenerationConfig{}),
                    NodeCountMismatchError);
}

TEST_CASE("residual resampling adds spread to dependent columns") {
    const Dataset real = cubic_chain(500, 11);
    Dag dag(2);
    dag.add_edge(0, 1);
    GenerationConfig plain;
    plain.n_rows = 500;
    plain.rng_seed = 1;
    GenerationConfig noisy = plain;
    noisy.residual_noise = true;
    const Dataset a = generate_synthetic(real, dag, plain);
    const Dataset b = generate_synthetic(real, dag, noisy);
    // same parents, so the dependent columns differ only by resampled residuals
    CHECK(a.columns[0] == b.columns[0]);
    double spread = 0.0;
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        spread = std::max(spread, std::fabs(a.columns[1][i] - b.columns[1][i]));
    CHECK(spread > 0.0);
}
