// Command-line pipeline: discover causal structure from a CSV, generate
// causality-respecting synthetic data, build ground-truth benchmarks and
// score discovery/generation quality. All commands are file-driven and
// deterministic under --seed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "causalgen/causalgen.hpp"

namespace fs = std::filesystem;
using namespace causalgen;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitDegenerateColumns = 3;
constexpr int kExitDagMismatch = 4;
constexpr int kExitShapeMismatch = 5;

struct CliError {
    int code;
    std::string message;
};

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream f(path);
    if (!f) throw CliError{kExitBadInput, "cannot open config file: " + path};
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CliError{kExitBadInput, "config file line is not key=value: " + line};
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
        };
        trim(key);
        trim(val);
        kv[key] = val;
    }
    return kv;
}

// flags > config file > built-in defaults > env seed fallback
struct CommonOptions {
    RunConfig config;
    int threads = 1;
    std::string config_file;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "config file with key=value lines");
        cmd->add_option("--n-bins", config.n_bins, "discretization bins")
            ->check(CLI::Range(3, 10))
            ->capture_default_str();
        cmd->add_option("--min-sup", config.min_sup, "minimum itemset support")
            ->check(CLI::Range(1e-9, 0.4))
            ->capture_default_str();
        cmd->add_option("--max-len", config.max_len, "maximum itemset length")
            ->check(CLI::IsMember({3, 4, 5}))
            ->capture_default_str();
        cmd->add_option("--alpha", config.alpha, "independence test p-value threshold")
            ->check(CLI::IsMember(std::vector<double>{0.001, 0.01, 0.02, 0.05, 0.1}))
            ->capture_default_str();
        cmd->add_option("--rows", config.rows, "synthetic rows to generate")
            ->capture_default_str();
        cmd->add_option("--seed", config.seed, "RNG seed (env CAUSAL_SYNTH_SEED as fallback)")
            ->capture_default_str();
        cmd->add_option("--discovery-rows", config.discovery_max_rows,
                        "row cap inside the model search, 0 = no cap")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "worker thread cap")->capture_default_str();
    }

    void finalize(CLI::App* cmd) {
        std::map<std::string, std::string> file_kv;
        if (!config_file.empty()) file_kv = load_config_file(config_file);
        auto apply = [&](const char* flag, const char* key, auto& target) {
            if (cmd->count(flag) > 0) return;  // explicit flag wins
            auto it = file_kv.find(key);
            if (it == file_kv.end()) return;
            std::istringstream ss(it->second);
            ss >> target;
            if (ss.fail())
                throw CliError{kExitBadInput, std::string("bad config value for ") + key};
        };
        apply("--n-bins", "n_bins", config.n_bins);
        apply("--min-sup", "min_sup", config.min_sup);
        apply("--max-len", "max_len", config.max_len);
        apply("--alpha", "alpha", config.alpha);
        apply("--rows", "rows", config.rows);
        apply("--seed", "seed", config.seed);
        apply("--discovery-rows", "discovery_max_rows", config.discovery_max_rows);
        apply("--threads", "threads", threads);
        if (cmd->count("--seed") == 0 && file_kv.find("seed") == file_kv.end()) {
            if (const char* env = std::getenv("CAUSAL_SYNTH_SEED"))
                config.seed = std::strtoull(env, nullptr, 10);
        }
        config.validate();
    }
};

Dataset load_dataset(const std::string& path) {
    if (!fs::exists(path)) throw CliError{kExitBadInput, "no such file: " + path};
    try {
        return Dataset::from_csv_file(path);
    } catch (const CsvFormatError& e) {
        throw CliError{kExitBadInput, std::string("malformed CSV ") + path + ": " + e.what()};
    } catch (const ValidationError& e) {
        throw CliError{kExitBadInput, std::string("invalid dataset ") + path + ": " + e.what()};
    }
}

std::pair<Dag, std::vector<std::string>> load_dag(const std::string& path) {
    if (!fs::exists(path)) throw CliError{kExitBadInput, "no such file: " + path};
    return Dag::from_json_file(path);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f) throw CliError{kExitBadInput, "cannot write file: " + path};
    f << content;
}

int cmd_discover(const CommonOptions& opts, const std::string& input,
                 const std::string& out_dag, const std::string& out_dot,
                 const std::string& diagnostics, const std::string& itemset_dump) {
    const Dataset data = load_dataset(input);
    DiscoveryResult result;
    try {
        result = discover_structure(data, opts.config);
    } catch (const DegenerateColumnError& e) {
        throw CliError{kExitDegenerateColumns, e.what()};
    }
    if (!out_dag.empty())
        write_text_file(out_dag, result.dag.to_json(data.attributes).dump(2) + "\n");
    if (!out_dot.empty()) write_text_file(out_dot, result.dag.to_dot(data.attributes));
    if (!diagnostics.empty()) {
        std::ofstream f(diagnostics);
        if (!f) throw CliError{kExitBadInput, "cannot write file: " + diagnostics};
        write_candidate_log(f, result, data.attributes);
    }
    if (!itemset_dump.empty()) {
        const TransactionDb db = discretize(data, opts.config.n_bins);
        const auto maximals =
            maximal_itemsets(apriori(db, opts.config.min_sup, opts.config.max_len));
        std::ofstream f(itemset_dump);
        if (!f) throw CliError{kExitBadInput, "cannot write file: " + itemset_dump};
        dump_itemsets(f, db, maximals);
    }
    std::cout << "edges " << result.dag.n_edges() << " from " << result.model_searches
              << " variable sets\n";
    std::cout << "apriori_seconds " << result.apriori_seconds << "\n";
    std::cout << "search_seconds " << result.search_seconds << "\n";
    if (!result.skipped_edges.empty())
        std::cout << "skipped_cycle_edges " << result.skipped_edges.size() << "\n";
    for (const auto& [a, b] : result.dag.edges())
        std::cout << "edge " << data.attributes[static_cast<std::size_t>(a)] << " -> "
                  << data.attributes[static_cast<std::size_t>(b)] << "\n";
    return 0;
}

int cmd_generate(const CommonOptions& opts, const std::string& input, const std::string& dag_path,
                 bool discover, const std::string& out_csv, bool residual_noise) {
    const Dataset data = load_dataset(input);
    Dag dag;
    if (discover) {
        try {
            dag = discover_structure(data, opts.config).dag;
        } catch (const DegenerateColumnError& e) {
            throw CliError{kExitDegenerateColumns, e.what()};
        }
    } else {
        auto [loaded, names] = load_dag(dag_path);
        if (loaded.n_nodes() != static_cast<int>(data.n_cols()))
            throw CliError{kExitDagMismatch, "DAG has " + std::to_string(loaded.n_nodes()) +
                                                 " nodes but CSV has " +
                                                 std::to_string(data.n_cols()) + " columns"};
        dag = loaded;
    }
    GenerationConfig gen;
    gen.n_rows = opts.config.rows;
    gen.rng_seed = Rng(opts.config.seed).substream("generate").seed();
    gen.residual_noise = residual_noise;
    const Dataset synth = generate_synthetic(data, dag, gen);
    synth.to_csv_file(out_csv);
    std::cout << "wrote " << synth.n_rows() << " rows to " << out_csv << "\n";
    return 0;
}

int cmd_ground_truth(const CommonOptions& opts, std::size_t n_dags, std::size_t per_dag,
                     std::size_t rows, const std::string& mode, const std::string& out_dir) {
    const BenchmarkBundle bundle =
        make_benchmark(n_dags, per_dag, rows, opts.config.seed, independent_mode_from_string(mode));
    write_bundle(bundle, out_dir);
    std::cout << "wrote " << n_dags << " DAGs x " << per_dag << " datasets to " << out_dir << "\n";
    return 0;
}

int cmd_benchmark(const CommonOptions& opts, std::size_t n_dags, std::size_t per_dag,
                  std::size_t rows, const std::string& mode, const std::string& out_dir) {
    const BenchmarkBundle bundle =
        make_benchmark(n_dags, per_dag, rows, opts.config.seed, independent_mode_from_string(mode));
    write_bundle(bundle, out_dir);
    const BenchmarkSummary summary = run_benchmark(bundle, opts.config, opts.threads);
    std::ofstream f(fs::path(out_dir) / "summary.csv");
    if (!f) throw CliError{kExitBadInput, "cannot write summary in " + out_dir};
    write_summary_csv(f, summary);
    double mean_precision = 0.0;
    for (const auto& r : summary.rows) mean_precision += r.discovery.precision;
    mean_precision /= static_cast<double>(summary.rows.size());
    std::cout << "datasets " << summary.rows.size() << "\n";
    std::cout << "mean_precision " << mean_precision << "\n";
    std::cout << "summary " << (fs::path(out_dir) / "summary.csv").string() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& predicted_path,
                 const std::string& real_path, const std::string& synth_path,
                 const std::string& out_csv, int lof_k, std::uint64_t seed) {
    auto [truth, truth_names] = load_dag(truth_path);
    auto [predicted, pred_names] = load_dag(predicted_path);
    const Dataset real = load_dataset(real_path);
    const Dataset synth = load_dataset(synth_path);
    EdgeMetrics em;
    DistributionError de;
    LofReport lof;
    try {
        em = edge_metrics(truth, predicted);
        Rng rng = Rng(seed).substream("evaluate");
        de = distribution_error(real, synth, rng);
        lof = lof_report(real, synth, lof_k);
    } catch (const NodeCountMismatchError& e) {
        throw CliError{kExitShapeMismatch, e.what()};
    } catch (const ShapeError& e) {
        throw CliError{kExitShapeMismatch, e.what()};
    } catch (const TooFewReferenceRowsError& e) {
        throw CliError{kExitShapeMismatch, e.what()};
    }
    std::ostringstream out;
    out << "accuracy,precision,recall,f1,sse,rmse,lof_median,n_outliers\n"
        << format_double(em.accuracy) << ',' << format_double(em.precision) << ','
        << format_double(em.recall) << ',' << format_double(em.f1) << ','
        << format_double(de.sse) << ',' << format_double(de.rmse) << ','
        << format_double(median_of(lof.scores)) << ',' << lof.n_outliers << '\n';
    if (out_csv.empty())
        std::cout << out.str();
    else
        write_text_file(out_csv, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causality-aware synthetic tabular data toolkit"};
    app.require_subcommand(1);

    // discover
    auto* discover = app.add_subcommand("discover", "discover causal structure from a CSV");
    CommonOptions d_opts;
    std::string d_input, d_out_dag, d_out_dot, d_diag, d_items;
    discover->add_option("input", d_input, "input CSV")->required();
    discover->add_option("--out-dag", d_out_dag, "output DAG JSON path");
    discover->add_option("--out-dot", d_out_dot, "output DOT path");
    discover->add_option("--diagnostics", d_diag, "candidate-model log CSV");
    discover->add_option("--dump-itemsets", d_items, "maximal itemset dump file");
    d_opts.add_flags(discover);

    // generate
    auto* generate = app.add_subcommand("generate", "generate synthetic data for a CSV");
    CommonOptions g_opts;
    std::string g_input, g_dag, g_out = "synthetic.csv";
    bool g_discover = false, g_residual_noise = false;
    generate->add_option("input", g_input, "input CSV")->required();
    generate->add_option("--dag", g_dag, "DAG JSON describing the causal structure");
    generate->add_flag("--discover", g_discover, "discover the DAG from the input first");
    generate->add_option("--out", g_out, "output CSV")->capture_default_str();
    generate->add_flag("--residual-noise", g_residual_noise,
                       "resample training residuals onto dependent columns");
    g_opts.add_flags(generate);

    // ground-truth
    auto* ground = app.add_subcommand("ground-truth", "emit a ground-truth benchmark bundle");
    CommonOptions t_opts;
    std::size_t t_dags = 10, t_per = 10, t_rows = 1000;
    std::string t_mode = "mixed-families", t_out = "ground-truth";
    ground->add_option("--dags", t_dags, "number of DAGs")->capture_default_str();
    ground->add_option("--per-dag", t_per, "datasets per DAG")->capture_default_str();
    ground->add_option("--gt-rows", t_rows, "rows per dataset")->capture_default_str();
    ground->add_option("--mode", t_mode, "independent mode: uniform | mixed")
        ->capture_default_str();
    ground->add_option("--out", t_out, "output directory")->capture_default_str();
    t_opts.add_flags(ground);

    // benchmark
    auto* bench = app.add_subcommand("benchmark",
                                     "ground truth + discovery + generation + evaluation");
    CommonOptions b_opts;
    std::size_t b_dags = 10, b_per = 10, b_rows = 1000;
    std::string b_mode = "mixed-families", b_out = "benchmark";
    bench->add_option("--dags", b_dags, "number of DAGs")->capture_default_str();
    bench->add_option("--per-dag", b_per, "datasets per DAG")->capture_default_str();
    bench->add_option("--gt-rows", b_rows, "rows per ground-truth dataset")
        ->capture_default_str();
    bench->add_option("--mode", b_mode, "independent mode: uniform | mixed")
        ->capture_default_str();
    bench->add_option("--out", b_out, "output directory")->capture_default_str();
    b_opts.add_flags(bench);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score a discovered DAG and synthetic data");
    std::string e_truth, e_pred, e_real, e_synth, e_out;
    int e_lof_k = 30;
    std::uint64_t e_seed = 0;
    evaluate->add_option("--truth-dag", e_truth, "ground-truth DAG JSON")->required();
    evaluate->add_option("--predicted-dag", e_pred, "predicted DAG JSON")->required();
    evaluate->add_option("--real", e_real, "real CSV")->required();
    evaluate->add_option("--synth", e_synth, "synthetic CSV")->required();
    evaluate->add_option("--out", e_out, "metrics CSV (stdout when omitted)");
    evaluate->add_option("--lof-k", e_lof_k, "LOF neighbor count")->capture_default_str();
    evaluate->add_option("--seed", e_seed, "seed for the KDE evaluation grid")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (discover->parsed()) {
            d_opts.finalize(discover);
            return cmd_discover(d_opts, d_input, d_out_dag, d_out_dot, d_diag, d_items);
        }
        if (generate->parsed()) {
            g_opts.finalize(generate);
            if (g_discover && !g_dag.empty())
                throw CliError{kExitBadInput, "use either --dag or --discover, not both"};
            if (!g_discover && g_dag.empty())
                throw CliError{kExitBadInput, "provide --dag FILE or --discover"};
            return cmd_generate(g_opts, g_input, g_dag, g_discover, g_out, g_residual_noise);
        }
        if (ground->parsed()) {
            t_opts.finalize(ground);
            return cmd_ground_truth(t_opts, t_dags, t_per, t_rows, t_mode, t_out);
        }
        if (bench->parsed()) {
            b_opts.finalize(bench);
            return cmd_benchmark(b_opts, b_dags, b_per, b_rows, b_mode, b_out);
        }
        if (evaluate->parsed()) {
            if (const char* env = std::getenv("CAUSAL_SYNTH_SEED");
                env && evaluate->count("--seed") == 0)
                e_seed = std::strtoull(env, nullptr, 10);
            return cmd_evaluate(e_truth, e_pred, e_real, e_synth, e_out, e_lof_k, e_seed);
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
