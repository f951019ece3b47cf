#include <catch2/catch.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "causalgen/dag.hpp"
#include "causalgen/dataset.hpp"
#include "causalgen/rng.hpp"
#include "test_helpers.hpp"

using namespace causalgen;
namespace fs = std::filesystem;

namespace {

const fs::path kWorkDir = fs::temp_directory_path() / "causalgen_cli_tests";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CAUSALGEN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_cubic_fixture(const fs::path& path, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = rng.uniform(-3, 3);
        v[static_cast<std::size_t>(i)] =
            std::pow(u[static_cast<std::size_t>(i)], 3) + rng.uniform(-1, 1);
    }
    testutil::make_dataset({"u", "v"}, {u, v}).to_csv_file(path.string());
}

void write_independent_fixture(const fs::path& path, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (auto& x : a) x = rng.uniform(0, 10);
    for (auto& x : b) x = rng.uniform(0, 10);
    testutil::make_dataset({"a", "b"}, {a, b}).to_csv_file(path.string());
}

struct WorkDir {
    WorkDir() {
        fs::remove_all(kWorkDir);
        fs::create_directories(kWorkDir);
    }
};

}  // namespace

TEST_CASE("cli: help exits 0") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("discover --help") == 0);
    CHECK(run_cli("generate --help") == 0);
    CHECK(run_cli("benchmark --help") == 0);
    CHECK(run_cli("evaluate --help") == 0);
    CHECK(run_cli("ground-truth --help") == 0);
}

TEST_CASE("cli: discover on the cubic fixture", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "cubic.csv";
    write_cubic_fixture(csv, 800, 42);
    const auto dag_path = kWorkDir / "dag.json";
    const auto diag_path = kWorkDir / "diag.csv";
    const auto items_path = kWorkDir / "items.txt";
    const int rc = run_cli("discover " + csv.string() + " --out-dag " + dag_path.string() +
                           " --diagnostics " + diag_path.string() + " --dump-itemsets " +
                           items_path.string());
    REQUIRE(rc == 0);
    const auto [dag, names] = Dag::from_json_file(dag_path.string());
    CHECK(names == std::vector<std::string>{"u", "v"});
    CHECK(dag.has_edge(0, 1));
    CHECK(dag.n_edges() == 1);
    CHECK(slurp(diag_path).find("variables,edges,accepted,avg_p") == 0);
    CHECK(!slurp(items_path).empty());
}

TEST_CASE("cli: discover on independent columns gives the empty DAG", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "indep.csv";
    write_independent_fixture(csv, 600, 7);
    const auto dag_path = kWorkDir / "empty.json";
    REQUIRE(run_cli("discover " + csv.string() + " --out-dag " + dag_path.string()) == 0);
    const auto [dag, names] = Dag::from_json_file(dag_path.string());
    CHECK(dag.n_edges() == 0);
}

TEST_CASE("cli: error exit codes") {
    WorkDir wd;
    SECTION("missing file -> 2") {
        CHECK(run_cli("discover /nonexistent.csv --out-dag x.json") == 2);
    }
    SECTION("malformed csv -> 2") {
        const auto bad = kWorkDir / "bad.csv";
        std::ofstream(bad) << "a,b\n1,zzz\n";
        CHECK(run_cli("discover " + bad.string() + " --out-dag x.json") == 2);
    }
    SECTION("degenerate column -> 3") {
        const auto flat = kWorkDir / "flat.csv";
        std::ofstream f(flat);
        f << "a,flat\n";
        Rng rng(1);
        for (int i = 0; i < 50; ++i) f << rng.uniform01() << ",5.0\n";
        f.close();
        CHECK(run_cli("discover " + flat.string() + " --out-dag x.json") == 3);
    }
    SECTION("dag/csv mismatch -> 4") {
        const auto csv = kWorkDir / "pair.csv";
        write_independent_fixture(csv, 100, 3);
        const auto dag3 = kWorkDir / "dag3.json";
        std::ofstream(dag3) << R"({"nodes":["a","b","c"],"edges":[]})";
        CHECK(run_cli("generate " + csv.string() + " --dag " + dag3.string() + " --out " +
                      (kWorkDir / "out.csv").string()) == 4);
    }
    SECTION("evaluate shape mismatch -> 5") {
        const auto csv = kWorkDir / "pair2.csv";
        write_independent_fixture(csv, 100, 4);
        const auto dag2 = kWorkDir / "dag2.json";
        const auto dag3 = kWorkDir / "dag3b.json";
        std::ofstream(dag2) << R"({"nodes":["a","b"],"edges":[]})";
        std::ofstream(dag3) << R"({"nodes":["a","b","c"],"edges":[]})";
        CHECK(run_cli("evaluate --truth-dag " + dag2.string() + " --predicted-dag " +
                      dag3.string() + " --real " + csv.string() + " --synth " + csv.string()) ==
              5);
    }
    SECTION("generate without --dag or --discover -> 2") {
        const auto csv = kWorkDir / "pair3.csv";
        write_independent_fixture(csv, 100, 5);
        CHECK(run_cli("generate " + csv.string() + " --out " +
                      (kWorkDir / "out3.csv").string()) == 2);
    }
    SECTION("evaluate with a missing file -> 2") {
        const auto csv = kWorkDir / "pair4.csv";
        write_independent_fixture(csv, 100, 6);
        const auto dag2 = kWorkDir / "dag2c.json";
        std::ofstream(dag2) << R"({"nodes":["a","b"],"edges":[]})";
        CHECK(run_cli("evaluate --truth-dag " + dag2.string() + " --predicted-dag " +
                      dag2.string() + " --real /missing.csv --synth " + csv.string()) == 2);
    }
}

TEST_CASE("cli: generate with inline discovery", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "inline.csv";
    write_cubic_fixture(csv, 600, 21);
    const auto out = kWorkDir / "inline_synth.csv";
    REQUIRE(run_cli("generate " + csv.string() + " --discover --rows 150 --seed 4 --out " +
                    out.string()) == 0);
    const Dataset synth = Dataset::from_csv_file(out.string());
    CHECK(synth.n_rows() == 150);
    CHECK(synth.attributes == std::vector<std::string>{"u", "v"});
}

TEST_CASE("cli: benchmark smoke run", "[slow]") {
    WorkDir wd;
    const auto dir = kWorkDir / "bench_smoke";
    // desk-scale smoke: 1 DAG x 1 dataset x 50 rows finishes in seconds
    REQUIRE(run_cli("benchmark --dags 1 --per-dag 1 --gt-rows 50 --rows 50 --seed 3 --out " +
                    dir.string()) == 0);
    const std::string summary = slurp(dir / "summary.csv");
    CHECK(summary.find("dag,dataset,") == 0);
    // header + exactly one data row
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 2);
    CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("cli: generate is deterministic per seed", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "gen.csv";
    write_cubic_fixture(csv, 300, 9);
    const auto dag_path = kWorkDir / "gen_dag.json";
    std::ofstream(dag_path) << R"({"nodes":["u","v"],"edges":[[0,1]]})";

    const auto out1 = kWorkDir / "synth1.csv";
    const auto out2 = kWorkDir / "synth2.csv";
    const auto out3 = kWorkDir / "synth3.csv";
    REQUIRE(run_cli("generate " + csv.string() + " --dag " + dag_path.string() + " --rows 100" +
                    " --seed 7 --out " + out1.string()) == 0);
    REQUIRE(run_cli("generate " + csv.string() + " --dag " + dag_path.string() + " --rows 100" +
                    " --seed 7 --out " + out2.string()) == 0);
    REQUIRE(run_cli("generate " + csv.string() + " --dag " + dag_path.string() + " --rows 100" +
                    " --seed 8 --out " + out3.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1) != slurp(out3));

    const Dataset synth = Dataset::from_csv_file(out1.string());
    CHECK(synth.n_rows() == 100);
    CHECK(synth.attributes == std::vector<std::string>{"u", "v"});

    SECTION("--rows 1 emits one data row") {
        const auto tiny = kWorkDir / "tiny.csv";
        REQUIRE(run_cli("generate " + csv.string() + " --dag " + dag_path.string() +
                        " --rows 1 --seed 3 --out " + tiny.string()) == 0);
        CHECK(Dataset::from_csv_file(tiny.string()).n_rows() == 1);
    }
}

TEST_CASE("cli: evaluate on identical inputs is all-perfect", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "eval.csv";
    write_cubic_fixture(csv, 200, 11);
    const auto dag_path = kWorkDir / "eval_dag.json";
    std::ofstream(dag_path) << R"({"nodes":["u","v"],"edges":[[0,1]]})";
    const auto out = kWorkDir / "metrics.csv";
    REQUIRE(run_cli("evaluate --truth-dag " + dag_path.string() + " --predicted-dag " +
                    dag_path.string() + " --real " + csv.string() + " --synth " + csv.string() +
                    " --out " + out.string()) == 0);
    const std::string metrics = slurp(out);
    CHECK(metrics.find("accuracy,precision,recall,f1,sse,rmse,lof_median,n_outliers") == 0);
    // identical DAGs and identical tables: f1 = 1, sse = 0
    std::istringstream lines(metrics);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::vector<std::string> fields;
    std::string cell;
    std::istringstream rs(row);
    while (std::getline(rs, cell, ',')) fields.push_back(cell);
    REQUIRE(fields.size() == 8);
    CHECK(fields[0] == "1");  // accuracy
    CHECK(fields[3] == "1");  // f1
    CHECK(fields[4] == "0");  // sse
    CHECK(fields[5] == "0");  // rmse

    SECTION("reversed edge scores zero f1") {
        const auto rev = kWorkDir / "rev_dag.json";
        std::ofstream(rev) << R"({"nodes":["u","v"],"edges":[[1,0]]})";
        const auto out2 = kWorkDir / "metrics2.csv";
        REQUIRE(run_cli("evaluate --truth-dag " + dag_path.string() + " --predicted-dag " +
                        rev.string() + " --real " + csv.string() + " --synth " + csv.string() +
                        " --out " + out2.string()) == 0);
        std::istringstream l2(slurp(out2));
        std::string h2, r2;
        std::getline(l2, h2);
        std::getline(l2, r2);
        CHECK(r2.rfind("0,0,0,0,", 0) == 0);
    }
}

TEST_CASE("cli: config file precedence", "[slow]") {
    WorkDir wd;
    const auto csv = kWorkDir / "conf.csv";
    write_independent_fixture(csv, 200, 12);
    const auto conf = kWorkDir / "run.conf";
    std::ofstream(conf) << "n_bins=9\nmin_sup=0.2\nseed=123\n";
    // invalid flag value is rejected by the parser
    CHECK(run_cli("discover " + csv.string() + " --n-bins 99") != 0);
    // config file applies when the flag is absent
    CHECK(run_cli("discover " + csv.string() + " --config " + conf.string() + " --out-dag " +
                  (kWorkDir / "c1.json").string()) == 0);
    // explicit flag beats the file
    CHECK(run_cli("discover " + csv.string() + " --config " + conf.string() +
                  " --n-bins 5 --out-dag " + (kWorkDir / "c2.json").string()) == 0);
}

TEST_CASE("cli: ground-truth bundle layout", "[slow]") {
    WorkDir wd;
    const auto dir = kWorkDir / "bundle";
    REQUIRE(run_cli("ground-truth --dags 2 --per-dag 2 --gt-rows 40 --seed 5 --out " +
                    dir.string()) == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "dag_0.json"));
    CHECK(fs::exists(dir / "dag_0" / "data_0.csv"));
    CHECK(fs::exists(dir / "dag_1" / "data_1.csv"));
    const Dataset d = Dataset::from_csv_file((dir / "dag_0" / "data_0.csv").string());
    CHECK(d.n_rows() == 40);
}
