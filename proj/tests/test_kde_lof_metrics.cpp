#include <catch2/catch.hpp>

#include "causalgen/kde.hpp"
#include "causalgen/lof.hpp"
#include "causalgen/metrics.hpp"
#include "causalgen/rng.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace causalgen;

TEST_CASE("KDE density of a standard normal sample") {
    Rng rng(1);
    std::vector<double> x(2000);
    for (auto& v : x) v = rng.normal();
    const KdeModel kde = kde_fit(x);
    // true density at 0 is 1/sqrt(2 pi) ~ 0.3989
    CHECK(kde.pdf(0.0) == Approx(0.3989).epsilon(0.25));

    SECTION("density integrates to one on a wide grid") {
        const double lo = -10.0, hi = 10.0;
        const int steps = 4000;
        double integral = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double a = lo + (hi - lo) * i / steps;
            const double b = lo + (hi - lo) * (i + 1) / steps;
            integral += 0.5 * (kde.pdf(a) + kde.pdf(b)) * (b - a);
        }
        CHECK(integral == Approx(1.0).margin(1e-3));
    }
    SECTION("identical samples select identical bandwidths") {
        const KdeModel again = kde_fit(x);
        CHECK(again.bandwidth == kde.bandwidth);
    }
    SECTION("chosen bandwidth maximizes the CV score") {
        std::size_t chosen = 0;
        for (std::size_t c = 0; c < kde.candidate_bandwidths.size(); ++c)
            if (kde.candidate_bandwidths[c] == kde.bandwidth) chosen = c;
        for (double score : kde.cv_scores) CHECK(kde.cv_scores[chosen] >= score);
    }
}

TEST_CASE("KDE input validation") {
    std::vector<double> flat(100, 2.0);
    CHECK_THROWS_AS(kde_fit(flat), DegenerateColumnError);
    std::vector<double> tiny(10, 0.0);
    CHECK_THROWS_AS(kde_fit(tiny), SampleTooSmallError);
}

TEST_CASE("edge metrics") {
    SECTION("identical DAGs score perfectly") {
        Dag truth(3);
        truth.add_edge(0, 1);
        truth.add_edge(1, 2);
        const EdgeMetrics m = edge_metrics(truth, truth);
        CHECK(m.accuracy == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
        CHECK(m.f1 == 1.0);
        CHECK(m.tp + m.tn + m.fp + m.fn == 6);  // n(n-1) ordered pairs
    }
    SECTION("two-node perfect match scores all ones") {
        Dag truth(2);
        truth.add_edge(0, 1);
        const EdgeMetrics m = edge_metrics(truth, truth);
        CHECK(m.accuracy == 1.0);
        CHECK(m.precision == 1.0);
        CHECK(m.recall == 1.0);
    }
    SECTION("reversed edge on two nodes: hand-counted confusion") {
        Dag truth(2), pred(2);
        truth.add_edge(0, 1);
        pred.add_edge(1, 0);
        const EdgeMetrics m = edge_metrics(truth, pred);
        CHECK(m.tp == 0);
        CHECK(m.fp == 1);
        CHECK(m.fn == 1);
        CHECK(m.tn == 0);
        CHECK(m.accuracy == 0.0);
        CHECK(m.f1 == 0.0);
    }
    SECTION("swapping the arguments swaps fp and fn") {
        Rng rng(4);
        Dag a(6), b(6);
        for (int t = 0; t < 8; ++t) {
            const int i = rng.uniform_int(0, 5), j = rng.uniform_int(0, 5);
            if (i == j) continue;
            if (!a.would_create_cycle(i, j) && rng.uniform01() < 0.5) a.add_edge(i, j);
            if (!b.would_create_cycle(i, j) && rng.uniform01() < 0.5) b.add_edge(i, j);
        }
        const EdgeMetrics ab = edge_metrics(a, b);
        const EdgeMetrics ba = edge_metrics(b, a);
        CHECK(ab.tp == ba.tp);
        CHECK(ab.tn == ba.tn);
        CHECK(ab.fp == ba.fn);
        CHECK(ab.fn == ba.fp);
    }
    SECTION("undirected flags count both directions") {
        Dag truth(3);
        truth.add_edge(0, 1);
        PairwiseFlags flags;
        flags.n_nodes = 3;
        flags.pairs.insert({0, 1});
        const EdgeMetrics m = edge_metrics(truth, flags);
        CHECK(m.tp == 1);   // 0 -> 1
        CHECK(m.fp == 1);   // 1 -> 0
        CHECK(m.precision == 0.5);
        CHECK(m.recall == 1.0);
    }
    SECTION("node count mismatch") {
        CHECK_THROWS_AS(edge_metrics(Dag(2), Dag(3)), NodeCountMismatchError);
    }
}

TEST_CASE("distribution error") {
    Rng rng(5);
    std::vector<double> col(600);
    for (auto& v : col) v = rng.normal(3.0, 1.0);
    const auto real = testutil::make_dataset({"a"}, {col});

    SECTION("identity gives exactly zero") {
        Rng grid(6);
        const auto err = distribution_error(real, real, grid);
        CHECK(err.sse == 0.0);
        CHECK(err.rmse == 0.0);
    }
    SECTION("disjoint support gives a large error") {
        std::vector<double> shifted(600);
        Rng r2(7);
        for (auto& v : shifted) v = r2.uniform(30.0, 40.0);
        const auto synth = testutil::make_dataset({"a"}, {shifted});
        Rng grid(8);
        const auto err = distribution_error(real, synth, grid);
        CHECK(err.sse > 0.1);
        // definitional: rmse = sqrt(sse / 1000) per feature
        CHECK(err.rmse == Approx(std::sqrt(err.sse / 1000.0)));
    }
    SECTION("attribute mismatch is rejected") {
        const auto other = testutil::make_dataset({"b"}, {col});
        Rng grid(9);
        CHECK_THROWS_AS(distribution_error(real, other, grid), ShapeError);
    }
}

TEST_CASE("LOF") {
    Rng rng(10);
    // dense gaussian cluster as the real population
    std::vector<std::vector<double>> real_cols(2, std::vector<double>(300));
    for (std::size_t i = 0; i < 300; ++i) {
        real_cols[0][i] = rng.normal();
        real_cols[1][i] = rng.normal();
    }
    const auto real = testutil::make_dataset({"x", "y"}, real_cols);

    SECTION("a duplicated real row is an inlier; a far point is an outlier") {
        std::vector<std::vector<double>> synth_cols(2);
        synth_cols[0] = {real_cols[0][0], 100.0};
        synth_cols[1] = {real_cols[1][0], 100.0};
        const auto synth = testutil::make_dataset({"x", "y"}, synth_cols);
        const LofReport report = lof_report(real, synth, 30);
        REQUIRE(report.scores.size() == 2);
        CHECK(report.scores[0] < 1.2);
        CHECK(report.scores[1] > 10.0);
        CHECK(report.n_outliers >= 1);
    }
    SECTION("matches the naive Breunig oracle to 1e-9") {
        // 50-point fixture, plus queries at varying positions
        std::vector<std::vector<double>> ref_rows;
        std::vector<std::vector<double>> fix_cols(2, std::vector<double>(50));
        Rng r2(11);
        for (std::size_t i = 0; i < 50; ++i) {
            fix_cols[0][i] = r2.uniform(-1, 1);
            fix_cols[1][i] = r2.uniform(-1, 1);
            ref_rows.push_back({0.0, 0.0});
        }
        const auto fixture = testutil::make_dataset({"x", "y"}, fix_cols);
        std::vector<std::vector<double>> q_cols(2, std::vector<double>(20));
        for (std::size_t i = 0; i < 20; ++i) {
            q_cols[0][i] = r2.uniform(-2, 2);
            q_cols[1][i] = r2.uniform(-2, 2);
        }
        const auto queries = testutil::make_dataset({"x", "y"}, q_cols);

        const LofReport fast = lof_report(fixture, queries, 5);

        // oracle works on the same standardized coordinates
        const ColumnScaler scaler = fit_scaler(to_matrix(fixture));
        const Matrix rs = scaler.transform(to_matrix(fixture));
        const Matrix qs = scaler.transform(to_matrix(queries));
        std::vector<std::vector<double>> ref(50), qr(20);
        for (int i = 0; i < 50; ++i) ref[static_cast<std::size_t>(i)] = {rs(i, 0), rs(i, 1)};
        for (int i = 0; i < 20; ++i) qr[static_cast<std::size_t>(i)] = {qs(i, 0), qs(i, 1)};
        const auto slow = oracle::naive_lof(ref, qr, 5);
        for (std::size_t i = 0; i < 20; ++i)
            CHECK(fast.scores[i] == Approx(slow[i]).margin(1e-9));
    }
    SECTION("larger fixture against the oracle, k = 30") {
        std::vector<std::vector<double>> fix_cols(3, std::vector<double>(200));
        Rng r3(12);
        for (std::size_t i = 0; i < 200; ++i)
            for (std::size_t c = 0; c < 3; ++c) fix_cols[c][i] = r3.normal();
        const auto fixture = testutil::make_dataset({"x", "y", "z"}, fix_cols);
        std::vector<std::vector<double>> q_cols(3, std::vector<double>(30));
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t c = 0; c < 3; ++c) q_cols[c][i] = r3.normal(0, 2);
        const auto queries = testutil::make_dataset({"x", "y", "z"}, q_cols);
        const LofReport fast = lof_report(fixture, queries, 30);

        const ColumnScaler scaler = fit_scaler(to_matrix(fixture));
        const Matrix rs = scaler.transform(to_matrix(fixture));
        const Matrix qs = scaler.transform(to_matrix(queries));
        std::vector<std::vector<double>> ref(200), qr(30);
        for (int i = 0; i < 200; ++i)
            ref[static_cast<std::size_t>(i)] = {rs(i, 0), rs(i, 1), rs(i, 2)};
        for (int i = 0; i < 30; ++i)
            qr[static_cast<std::size_t>(i)] = {qs(i, 0), qs(i, 1), qs(i, 2)};
        const auto slow = oracle::naive_lof(ref, qr, 30);
        for (std::size_t i = 0; i < 30; ++i)
            CHECK(fast.scores[i] == Approx(slow[i]).margin(1e-9));
    }
    SECTION("too few reference rows") {
        std::vector<std::vector<double>> few(2, std::vector<double>(10));
        Rng r4(13);
        for (auto& c : few)
            for (auto& v : c) v = r4.normal();
        const auto small = testutil::make_dataset({"x", "y"}, few);
        CHECK_THROWS_AS(lof_report(small, small, 30), TooFewReferenceRowsError);
    }
}

TEST_CASE("random baseline") {
    Rng rng(14);
    std::vector<double> col(200);
    for (auto& v : col) v = rng.normal(10.0, 3.0);
    const auto real = testutil::make_dataset({"a"}, {col});
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());

    Rng gen(15);
    const Dataset synth = random_baseline(real, 500, gen);
    REQUIRE(synth.n_rows() == 500);
    for (double v : synth.columns[0]) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
    }
    Rng gen2(15);
    const Dataset again = random_baseline(real, 500, gen2);
    CHECK(synth.columns == again.columns);
}

TEST_CASE("median helper") {
    CHECK(median_of({1.0, 3.0, 2.0}) == 2.0);
    CHECK(median_of({4.0, 1.0, 2.0, 3.0}) == 2.5);
    CHECK(median_of({}) == 0.0);
}
