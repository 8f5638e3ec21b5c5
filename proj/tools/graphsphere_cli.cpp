// Command-line surface: train / eval / score / embed / synth / split / bench /
// convert-citation. Exit codes: 0 success, 1 usage or config error, 2 data
// error, 3 numeric failure. All randomness flows from --seed via named
// substreams, so identical invocations produce byte-identical primary outputs;
// wall-clock only ever lands in manifests.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <graphsphere/graphsphere.hpp>

namespace gs = graphsphere;
using gs::io::json;
namespace fs = std::filesystem;

namespace {

std::string version_string() { return std::string("v") + gs::kVersion; }

std::string timestamp_utc() {
    const std::time_t t =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& flag) {
    std::vector<double> out;
    for (auto tok : gs::io::split(s, ',')) {
        tok = gs::io::trim(tok);
        double v = 0.0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
            throw gs::ConfigError(flag + ": bad number '" + std::string(tok) + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw gs::ConfigError(flag + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const std::string& flag) {
    std::vector<int> out;
    for (double v : parse_double_list(s, flag)) {
        if (v != std::floor(v)) throw gs::ConfigError(flag + ": expected integers");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared flag bundles

struct DataFlags {
    std::string data;
    std::string split;
    bool no_rescale = false;
};

struct TrainFlags {
    std::string mode = "an";
    double lambda = 0.0;
    std::string lambda_grid;  // comma list; when set, keeps the best-by-validation leg
    std::string layers;       // hidden layer dims, e.g. "32,32,32"
    std::string final_activation = "identity";
    double learning_rate = 1e-3;
    int max_epochs = 500;
    int patience = 50;
    std::uint64_t seed = 0;
    std::string precision = "float64";
    double l2_weight = 0.0;
    std::uint64_t auc_max_pairs = 10'000'000;
};

void add_data_flags(CLI::App* cmd, DataFlags& f, bool need_split_flag = true) {
    cmd->add_option("--data", f.data, "dataset bundle directory")->required();
    if (need_split_flag) {
        cmd->add_option("--split", f.split,
                        "split JSON (overrides the bundle's split.json)");
    }
    cmd->add_flag("--no-rescale", f.no_rescale,
                  "skip per-column min-max rescaling of attributes");
}

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
    cmd->add_option("--mode", f.mode, "supervision mode: an | n");
    cmd->add_option("--lambda", f.lambda, "ranking-regularizer weight");
    cmd->add_option("--lambda-grid", f.lambda_grid,
                    "comma list of lambdas; keeps the best by validation");
    cmd->add_option("--layers", f.layers,
                    "hidden layer dims, comma list (input dim is prepended)");
    cmd->add_option("--final-activation", f.final_activation, "identity | relu");
    cmd->add_option("--learning-rate", f.learning_rate, "Adam step size");
    cmd->add_option("--max-epochs", f.max_epochs, "full-batch epochs");
    cmd->add_option("--patience", f.patience,
                    "epochs without validation improvement before stopping (0 disables)");
    cmd->add_option("--seed", f.seed, "master seed; all substreams derive from it");
    cmd->add_option("--precision", f.precision, "float64 | float32");
    cmd->add_option("--l2-weight", f.l2_weight, "weight decay coefficient");
    cmd->add_option("--auc-max-pairs", f.auc_max_pairs,
                    "pair budget before the regularizer subsamples");
}

template <class Real>
gs::TrainConfig<Real> make_config(const TrainFlags& f, int input_dim) {
    gs::TrainConfig<Real> cfg;
    cfg.mode = gs::parse_mode(f.mode);
    cfg.lambda = static_cast<Real>(f.lambda);
    if (!f.layers.empty()) {
        cfg.layer_dims.push_back(input_dim);
        for (int d : parse_int_list(f.layers, "--layers")) cfg.layer_dims.push_back(d);
    }
    cfg.final_activation = gs::parse_activation(f.final_activation);
    cfg.learning_rate = static_cast<Real>(f.learning_rate);
    cfg.max_epochs = f.max_epochs;
    cfg.patience = f.patience;
    cfg.seed = f.seed;
    cfg.precision = gs::precision_name<Real>();
    cfg.l2_weight = static_cast<Real>(f.l2_weight);
    cfg.auc_max_pairs = static_cast<std::size_t>(f.auc_max_pairs);
    return cfg;
}

template <class Real>
std::pair<gs::io::DatasetBundle, gs::io::LoadedBundle<Real>> load_data(const DataFlags& f) {
    gs::io::DatasetBundle bundle = gs::io::resolve_bundle(f.data);
    if (!f.split.empty()) bundle.split = fs::path(f.split);
    gs::io::LoadedBundle<Real> loaded = gs::io::load_bundle<Real>(bundle, !f.no_rescale);
    return {std::move(bundle), std::move(loaded)};
}

json data_hashes(const gs::io::DatasetBundle& bundle) {
    json j;
    j["edges"] = gs::io::hash_hex(gs::io::hash_file(bundle.edges));
    j["labels"] = gs::io::hash_hex(gs::io::hash_file(bundle.labels));
    if (bundle.attributes) {
        j["attributes"] = gs::io::hash_hex(gs::io::hash_file(*bundle.attributes));
    }
    if (bundle.split) j["split"] = gs::io::hash_hex(gs::io::hash_file(*bundle.split));
    return j;
}

// Picks the arithmetic matching a checkpoint's stored precision tag.
template <class Fn>
int dispatch_checkpoint(const std::string& path, Fn&& fn) {
    const std::string tag = gs::io::checkpoint_precision(path);
    if (tag == "float64") return fn(double{});
    if (tag == "float32") return fn(float{});
    throw gs::DataError("checkpoint: unknown precision tag '" + tag + "'");
}

// ---------------------------------------------------------------------------
// lambda-grid training, shared by train and bench

template <class Real>
struct GridOutcome {
    gs::TrainResult<Real> best;
    double chosen_lambda = 0.0;
    json legs = json::array();
};

template <class Real>
double best_criterion_of(const gs::TrainResult<Real>& result, bool maximize) {
    if (result.history.best_epoch < 0) {
        return maximize ? -std::numeric_limits<double>::infinity()
                        : std::numeric_limits<double>::infinity();
    }
    const auto& rec =
        result.history.epochs[static_cast<std::size_t>(result.history.best_epoch)];
    return static_cast<double>(rec.validation_criterion);
}

template <class Real>
GridOutcome<Real> train_grid(const gs::AttributedGraph<Real>& graph,
                             const gs::LabelSplit& split, gs::TrainConfig<Real> cfg,
                             const std::vector<double>& lambdas) {
    GridOutcome<Real> out;
    const bool maximize = cfg.mode == gs::Mode::an;
    bool have = false;
    double best = 0.0;
    for (double lam : lambdas) {
        cfg.lambda = static_cast<Real>(lam);
        gs::TrainResult<Real> result = gs::train(graph, split, cfg);
        const double crit = best_criterion_of(result, maximize);

        json leg;
        leg["lambda"] = lam;
        leg["validation_criterion"] = crit;
        leg["best_epoch"] = result.history.best_epoch;
        leg["stop_reason"] = result.history.stop_reason;
        leg["epochs_run"] = result.history.epochs.size();
        out.legs.push_back(leg);

        if (!have || (maximize ? crit > best : crit < best)) {
            have = true;
            best = crit;
            out.chosen_lambda = lam;
            out.best = std::move(result);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// subcommand bodies

template <class Real>
int run_train(const DataFlags& df, const TrainFlags& tf, const std::string& out_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    auto [bundle, loaded] = load_data<Real>(df);
    if (!loaded.split) {
        throw gs::ConfigError("train: no split given (--split or bundle split.json)");
    }
    const int input_dim =
        loaded.graph.dim() == 0 ? loaded.graph.n_nodes : loaded.graph.dim();
    gs::TrainConfig<Real> cfg = make_config<Real>(tf, input_dim);
    const std::vector<double> lambdas = tf.lambda_grid.empty()
                                            ? std::vector<double>{tf.lambda}
                                            : parse_double_list(tf.lambda_grid, "--lambda-grid");

    GridOutcome<Real> outcome = train_grid(loaded.graph, *loaded.split, cfg, lambdas);

    fs::create_directories(out_dir);
    const fs::path ckpt_path = fs::path(out_dir) / "checkpoint.bin";
    const fs::path metrics_path = fs::path(out_dir) / "metrics.jsonl";
    const fs::path manifest_path = fs::path(out_dir) / "manifest.json";

    gs::TrainConfig<Real> resolved = cfg;
    resolved.lambda = static_cast<Real>(outcome.chosen_lambda);
    resolved.layer_dims = outcome.best.model.layer_dims;
    gs::io::save_checkpoint(ckpt_path, outcome.best.model, outcome.best.center, resolved);
    gs::io::write_metrics_jsonl(metrics_path, outcome.best.history);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    json manifest;
    manifest["version"] = version_string();
    manifest["command"] = "train";
    manifest["config"] = gs::io::config_to_json(resolved);
    manifest["seed"] = tf.seed;
    manifest["rescale"] = !df.no_rescale;
    manifest["data_hashes"] = data_hashes(bundle);
    manifest["artifacts"] = {{"checkpoint", ckpt_path.string()},
                             {"metrics", metrics_path.string()}};
    manifest["lambda_grid"] = lambdas;
    manifest["grid"] = outcome.legs;
    manifest["chosen_lambda"] = outcome.chosen_lambda;
    manifest["best_epoch"] = outcome.best.history.best_epoch;
    manifest["stop_reason"] = outcome.best.history.stop_reason;
    manifest["timestamp_utc"] = timestamp_utc();
    manifest["elapsed_s"] = elapsed;
    gs::io::write_json_file(manifest_path, manifest);

    std::cout << "train: wrote " << ckpt_path.string() << " (lambda="
              << gs::io::format_real(outcome.chosen_lambda) << ", best_epoch="
              << outcome.best.history.best_epoch << ", validation="
              << gs::io::format_real(
                     best_criterion_of(outcome.best, cfg.mode == gs::Mode::an))
              << ")\n";
    return 0;
}

template <class Real>
int run_eval(const DataFlags& df, const std::string& ckpt_path, const std::string& mode_flag,
             const std::string& out_path) {
    auto [bundle, loaded] = load_data<Real>(df);
    if (!loaded.split) {
        throw gs::ConfigError("eval: no split given (--split or bundle split.json)");
    }
    const gs::io::Checkpoint<Real> ckpt = gs::io::load_checkpoint<Real>(ckpt_path);
    const gs::Mode mode = mode_flag.empty() ? ckpt.config.mode : gs::parse_mode(mode_flag);

    const gs::EvalReport<Real> report =
        gs::evaluate(ckpt.model, ckpt.center, loaded.graph, *loaded.split, mode);
    json j = gs::io::report_to_json(report);
    j["checkpoint"] = ckpt_path;
    if (out_path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        gs::io::write_json_file(out_path, j);
        std::cout << "eval: test_auc=" << gs::io::format_real(static_cast<double>(report.test_auc))
                  << " -> " << out_path << '\n';
    }
    return 0;
}

template <class Real>
int run_score(const DataFlags& df, const std::string& ckpt_path, const std::string& out_path,
              bool include_truth) {
    auto [bundle, loaded] = load_data<Real>(df);
    const gs::io::Checkpoint<Real> ckpt = gs::io::load_checkpoint<Real>(ckpt_path);
    const gs::NormalizedAdjacency<Real> s = gs::normalized_adjacency(loaded.graph);
    const gs::Matrix<Real> x = gs::effective_attributes(loaded.graph);
    const gs::ForwardCache<Real> cache = gs::forward(ckpt.model, s, x);
    const gs::Vector<Real> scores = gs::anomaly_scores(cache.embeddings(), ckpt.center);
    gs::io::write_scores_csv(out_path, scores, include_truth ? &loaded.truth : nullptr);
    std::cout << "score: wrote " << out_path << " (" << scores.size() << " nodes)\n";
    return 0;
}

template <class Real>
int run_embed(const DataFlags& df, const std::string& ckpt_path, const std::string& out_path) {
    auto [bundle, loaded] = load_data<Real>(df);
    const gs::io::Checkpoint<Real> ckpt = gs::io::load_checkpoint<Real>(ckpt_path);
    const gs::NormalizedAdjacency<Real> s = gs::normalized_adjacency(loaded.graph);
    const gs::Matrix<Real> x = gs::effective_attributes(loaded.graph);
    const gs::ForwardCache<Real> cache = gs::forward(ckpt.model, s, x);
    gs::io::write_embeddings_csv(out_path, cache.embeddings());
    std::cout << "embed: wrote " << out_path << " (" << cache.embeddings().rows() << " x "
              << cache.embeddings().cols() << ")\n";
    return 0;
}

int run_synth(const gs::SynthConfig& cfg, const std::string& out_dir) {
    const gs::SynthResult<double> result = gs::generate_synthetic<double>(cfg);
    fs::create_directories(out_dir);
    gs::io::write_edge_file(fs::path(out_dir) / "edges.tsv", result.graph.edges);
    gs::io::write_attributes_dense(fs::path(out_dir) / "attributes.csv",
                                   result.graph.attributes);
    gs::io::write_labels(fs::path(out_dir) / "labels.csv", result.truth);
    std::size_t anomalies = 0;
    for (auto v : result.truth) anomalies += v;
    std::cout << "synth: wrote bundle to " << out_dir << " (" << result.graph.n_nodes
              << " nodes, " << result.graph.edges.size() << " edges, " << anomalies
              << " anomalies)\n";
    return 0;
}

int run_split(const std::string& data_dir, const std::string& labels_file, double ratio,
              double validation_ratio, int replicates, std::uint64_t seed,
              bool require_anomalous, const std::string& out_dir) {
    if (replicates < 1) throw gs::ConfigError("split: --replicates must be >= 1");
    fs::path labels_path;
    if (!labels_file.empty()) {
        labels_path = labels_file;
    } else if (!data_dir.empty()) {
        labels_path = fs::path(data_dir) / "labels.csv";
    } else {
        throw gs::ConfigError("split: give --data or --labels");
    }
    const gs::GroundTruth truth = gs::io::read_labels(labels_path);

    fs::create_directories(out_dir);
    gs::SplitSpec spec;
    spec.labeled_ratio = ratio;
    spec.validation_ratio = validation_ratio;
    spec.seed = seed;
    spec.require_anomalous = require_anomalous;
    for (int r = 0; r < replicates; ++r) {
        spec.replicate = static_cast<std::uint64_t>(r);
        const gs::LabelSplit split = gs::make_split(truth, spec);
        const fs::path out = fs::path(out_dir) / (replicates == 1
                                                      ? std::string("split.json")
                                                      : "split_" + std::to_string(r) + ".json");
        gs::io::write_split_json(out, split);
        std::cout << "split: wrote " << out.string() << " (|A|=" << split.anomalous_train.size()
                  << ", |N|=" << split.normal_train.size() << ", val="
                  << split.validation.size() << ", test=" << split.test.size() << ")\n";
    }
    return 0;
}

template <class Real>
int run_bench(const DataFlags& df, const TrainFlags& tf, const std::string& ratios_flag,
              int replicates, double validation_ratio, const std::string& out_dir) {
    if (replicates < 1) throw gs::ConfigError("bench: --replicates must be >= 1");
    const std::vector<double> ratios = parse_double_list(ratios_flag, "--ratios");
    const std::vector<double> lambdas = tf.lambda_grid.empty()
                                            ? std::vector<double>{tf.lambda}
                                            : parse_double_list(tf.lambda_grid, "--lambda-grid");

    gs::io::DatasetBundle bundle = gs::io::resolve_bundle(df.data);
    bundle.split.reset();  // bench draws its own splits
    const gs::io::LoadedBundle<Real> loaded = gs::io::load_bundle<Real>(bundle, !df.no_rescale);
    const int input_dim =
        loaded.graph.dim() == 0 ? loaded.graph.n_nodes : loaded.graph.dim();
    gs::TrainConfig<Real> base_cfg = make_config<Real>(tf, input_dim);
    const bool require_anomalous = base_cfg.mode == gs::Mode::an;

    const fs::path results_dir = fs::path(out_dir) / "results";
    fs::create_directories(results_dir);

    json completed = json::array();
    std::vector<json> rows;
    int reused = 0;
    for (std::size_t ri = 0; ri < ratios.size(); ++ri) {
        std::vector<double> aucs;
        for (int r = 0; r < replicates; ++r) {
            const fs::path result_path =
                results_dir / ("ratio" + std::to_string(ri) + "_rep" + std::to_string(r) +
                               ".json");
            json result;
            if (fs::exists(result_path)) {
                std::ifstream in(result_path);
                try {
                    in >> result;
                } catch (const json::parse_error&) {
                    result = json();
                }
            }
            if (result.contains("test_auc")) {
                ++reused;
            } else {
                gs::SplitSpec spec;
                spec.labeled_ratio = ratios[ri];
                spec.validation_ratio = validation_ratio;
                spec.seed = gs::substream_seed(tf.seed, "bench-split", ri);
                spec.replicate = static_cast<std::uint64_t>(r);
                spec.require_anomalous = require_anomalous;
                const gs::LabelSplit split = gs::make_split(loaded.truth, spec);

                gs::TrainConfig<Real> cfg = base_cfg;
                cfg.seed = gs::substream_seed(tf.seed, "bench-train",
                                              ri * 1000003ULL + static_cast<std::uint64_t>(r));
                GridOutcome<Real> outcome = train_grid(loaded.graph, split, cfg, lambdas);
                const gs::EvalReport<Real> report = gs::evaluate(
                    outcome.best.model, outcome.best.center, loaded.graph, split, cfg.mode);

                result = json();
                result["labeled_ratio"] = ratios[ri];
                result["replicate"] = r;
                result["test_auc"] = static_cast<double>(report.test_auc);
                result["chosen_lambda"] = outcome.chosen_lambda;
                result["validation_criterion"] =
                    best_criterion_of(outcome.best, cfg.mode == gs::Mode::an);
                result["best_epoch"] = outcome.best.history.best_epoch;
                gs::io::write_json_file(result_path, result);
            }
            aucs.push_back(result["test_auc"].get<double>());
            completed.push_back(result_path.string());
        }

        double mean = 0.0;
        for (double a : aucs) mean += a;
        mean /= static_cast<double>(aucs.size());
        double var = 0.0;
        for (double a : aucs) var += (a - mean) * (a - mean);
        var /= static_cast<double>(aucs.size());
        const double stddev = std::sqrt(var);

        json row;
        row["labeled_ratio"] = ratios[ri];
        row["mean_test_auc"] = mean;
        row["std_test_auc"] = stddev;
        row["replicates"] = replicates;
        rows.push_back(row);
    }

    const fs::path table_path = fs::path(out_dir) / "bench.csv";
    {
        std::ofstream out(table_path, std::ios::binary);
        if (!out) throw gs::DataError("cannot write " + table_path.string());
        out << "labeled_ratio,mean_test_auc,std_test_auc,replicates,summary\n";
        for (const auto& row : rows) {
            char summary[64];
            std::snprintf(summary, sizeof summary, "%.1f(%.1f)",
                          100.0 * row["mean_test_auc"].get<double>(),
                          100.0 * row["std_test_auc"].get<double>());
            out << gs::io::format_real(row["labeled_ratio"].get<double>()) << ','
                << gs::io::format_real(row["mean_test_auc"].get<double>()) << ','
                << gs::io::format_real(row["std_test_auc"].get<double>()) << ','
                << row["replicates"].get<int>() << ',' << summary << '\n';
        }
    }

    json manifest;
    manifest["version"] = version_string();
    manifest["command"] = "bench";
    manifest["config"] = gs::io::config_to_json(base_cfg);
    manifest["seed"] = tf.seed;
    manifest["rescale"] = !df.no_rescale;
    manifest["data_hashes"] = data_hashes(bundle);
    manifest["ratios"] = ratios;
    manifest["replicates"] = replicates;
    manifest["validation_ratio"] = validation_ratio;
    manifest["lambda_grid"] = lambdas;
    manifest["results"] = completed;
    manifest["table"] = table_path.string();
    manifest["rows"] = rows;
    manifest["timestamp_utc"] = timestamp_utc();
    gs::io::write_json_file(fs::path(out_dir) / "manifest.json", manifest);

    if (reused > 0) {
        std::cout << "bench: resumed, reused " << reused << " completed replicate"
                  << (reused == 1 ? "" : "s") << '\n';
    }
    for (const auto& row : rows) {
        std::cout << "bench: ratio=" << gs::io::format_real(row["labeled_ratio"].get<double>())
                  << " mean_auc=" << gs::io::format_real(row["mean_test_auc"].get<double>())
                  << " std=" << gs::io::format_real(row["std_test_auc"].get<double>()) << '\n';
    }
    std::cout << "bench: wrote " << table_path.string() << '\n';
    return 0;
}

int run_convert(const std::string& content, const std::string& cites,
                const std::string& out_dir) {
    const gs::io::CitationSummary summary = gs::io::convert_citation(content, cites, out_dir);
    std::cout << "convert-citation: " << summary.n_nodes << " nodes, " << summary.n_attributes
              << " attributes, " << summary.n_edges_written << " edges ("
              << summary.unknown_id_edges << " skipped for unknown ids), anomalous class '"
              << summary.anomalous_class << "' (" << summary.anomaly_count << " nodes) -> "
              << out_dir << '\n';
    return 0;
}

// Expands a flat key=value config file into command-line tokens for `sub`.
// Tokens are inserted before the user's flags, so the command line wins.
std::vector<std::string> config_tokens(const std::string& path, CLI::App* sub) {
    std::ifstream in(path);
    if (!in) throw gs::ConfigError("--config: cannot open " + path);
    std::vector<std::string> tokens;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = gs::io::trim(line);
        if (content.empty() || content.front() == '#') continue;
        const std::size_t eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw gs::ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
        }
        const std::string key{gs::io::trim(content.substr(0, eq))};
        const std::string value{gs::io::trim(content.substr(eq + 1))};
        const CLI::Option* opt =
            key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
        if (opt == nullptr) {
            throw gs::ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
        }
        if (opt->get_expected_min() == 0) {  // flag
            if (value == "true" || value == "1") {
                tokens.push_back("--" + key);
            } else if (value != "false" && value != "0") {
                throw gs::ConfigError(path + ":" + std::to_string(line_no) + ": flag '" + key +
                                      "' takes true or false");
            }
        } else {
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
    }
    return tokens;
}

int run(const std::vector<std::string>& raw_args, bool config_expanded) {
    CLI::App app{"hypersphere-embedding anomaly detection on attributed graphs"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    DataFlags train_df, eval_df, score_df, embed_df, bench_df;
    TrainFlags train_tf, bench_tf;
    std::string train_out = ".", train_config, bench_config;

    CLI::App* train_cmd = app.add_subcommand("train", "fit a model on a bundle + split");
    add_data_flags(train_cmd, train_df);
    add_train_flags(train_cmd, train_tf);
    train_cmd->add_option("--out", train_out, "output directory");
    train_cmd->add_option("--config", train_config,
                          "flat key=value file; command-line flags win");

    std::string eval_ckpt, eval_mode, eval_out;
    CLI::App* eval_cmd = app.add_subcommand("eval", "report test AUC for a checkpoint");
    add_data_flags(eval_cmd, eval_df);
    eval_cmd->add_option("--checkpoint", eval_ckpt, "checkpoint file")->required();
    eval_cmd->add_option("--mode", eval_mode, "override the checkpoint's mode: an | n");
    eval_cmd->add_option("--out", eval_out, "report JSON path (default: stdout)");

    std::string score_ckpt, score_out;
    bool score_truth = false;
    CLI::App* score_cmd = app.add_subcommand("score", "export per-node anomaly scores");
    add_data_flags(score_cmd, score_df, /*need_split_flag=*/false);
    score_cmd->add_option("--checkpoint", score_ckpt, "checkpoint file")->required();
    score_cmd->add_option("--out", score_out, "score CSV path")->required();
    score_cmd->add_flag("--include-truth", score_truth, "append the ground-truth column");

    std::string embed_ckpt, embed_out;
    CLI::App* embed_cmd = app.add_subcommand("embed", "export node embeddings");
    add_data_flags(embed_cmd, embed_df, /*need_split_flag=*/false);
    embed_cmd->add_option("--checkpoint", embed_ckpt, "checkpoint file")->required();
    embed_cmd->add_option("--out", embed_out, "embedding CSV path")->required();

    gs::SynthConfig synth_cfg;
    std::string synth_out = ".";
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "generate a planted-anomaly synthetic bundle");
    synth_cmd->add_option("--nodes", synth_cfg.n_nodes, "node count");
    synth_cmd->add_option("--anomaly-rate", synth_cfg.anomaly_rate, "anomalous fraction");
    synth_cmd->add_option("--p-in", synth_cfg.p_in, "within-block edge probability");
    synth_cmd->add_option("--p-out", synth_cfg.p_out, "cross-block edge probability");
    synth_cmd->add_option("--dim", synth_cfg.dim, "attribute dimension");
    synth_cmd->add_option("--mu-shift", synth_cfg.mu_shift, "anomalous attribute mean shift");
    synth_cmd->add_option("--seed", synth_cfg.seed, "master seed");
    synth_cmd->add_option("--out", synth_out, "output bundle directory");

    std::string split_data, split_labels, split_out = ".";
    double split_ratio = 0.10, split_vratio = 0.10;
    int split_replicates = 1;
    std::uint64_t split_seed = 0;
    bool split_require_anom = false;
    CLI::App* split_cmd = app.add_subcommand("split", "draw labeled/validation/test splits");
    split_cmd->add_option("--data", split_data, "bundle directory (reads labels.csv)");
    split_cmd->add_option("--labels", split_labels, "label file (overrides --data)");
    split_cmd->add_option("--ratio", split_ratio, "labeled fraction");
    split_cmd->add_option("--validation-ratio", split_vratio, "validation fraction");
    split_cmd->add_option("--replicates", split_replicates, "number of split files");
    split_cmd->add_option("--seed", split_seed, "master seed");
    split_cmd->add_flag("--require-anomalous", split_require_anom,
                        "redraw until the split is usable for mode AN (labeled anomaly "
                        "present, two-class validation)");
    split_cmd->add_option("--out", split_out, "output directory");

    std::string bench_ratios = "0.10", bench_out = ".";
    int bench_replicates = 10;
    double bench_vratio = 0.10;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "train+eval over replicate splits, tabulate AUC");
    add_data_flags(bench_cmd, bench_df, /*need_split_flag=*/false);
    add_train_flags(bench_cmd, bench_tf);
    bench_cmd->add_option("--ratios", bench_ratios, "comma list of labeled fractions");
    bench_cmd->add_option("--replicates", bench_replicates, "splits per ratio");
    bench_cmd->add_option("--validation-ratio", bench_vratio, "validation fraction");
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_option("--config", bench_config,
                          "flat key=value file; command-line flags win");

    std::string conv_content, conv_cites, conv_out;
    CLI::App* conv_cmd = app.add_subcommand(
        "convert-citation", "convert a raw citation-network dump into a bundle");
    conv_cmd->add_option("--content", conv_content, "content file: id, features..., class")
        ->required();
    conv_cmd->add_option("--cites", conv_cites, "cites file: cited citing")->required();
    conv_cmd->add_option("--out", conv_out, "output bundle directory")->required();

    std::vector<const char*> argv_shim;
    argv_shim.push_back("graphsphere");
    for (const auto& a : raw_args) argv_shim.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv_shim.size()), argv_shim.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (!config_expanded) {
            CLI::App* sub = nullptr;
            std::string cfg_path;
            if (train_cmd->parsed() && !train_config.empty()) {
                sub = train_cmd;
                cfg_path = train_config;
            } else if (bench_cmd->parsed() && !bench_config.empty()) {
                sub = bench_cmd;
                cfg_path = bench_config;
            }
            if (sub != nullptr) {
                const std::vector<std::string> tokens = config_tokens(cfg_path, sub);
                std::vector<std::string> expanded = raw_args;
                const auto it =
                    std::find(expanded.begin(), expanded.end(), sub->get_name());
                expanded.insert(it + 1, tokens.begin(), tokens.end());
                return run(expanded, true);
            }
        }
        auto pick = [](const std::string& precision) {
            if (precision == "float64" || precision == "float32") return precision == "float64";
            throw gs::ConfigError("--precision must be float64 or float32");
        };
        if (train_cmd->parsed()) {
            return pick(train_tf.precision) ? run_train<double>(train_df, train_tf, train_out)
                                            : run_train<float>(train_df, train_tf, train_out);
        }
        if (eval_cmd->parsed()) {
            return dispatch_checkpoint(eval_ckpt, [&](auto real) {
                return run_eval<decltype(real)>(eval_df, eval_ckpt, eval_mode, eval_out);
            });
        }
        if (score_cmd->parsed()) {
            return dispatch_checkpoint(score_ckpt, [&](auto real) {
                return run_score<decltype(real)>(score_df, score_ckpt, score_out, score_truth);
            });
        }
        if (embed_cmd->parsed()) {
            return dispatch_checkpoint(embed_ckpt, [&](auto real) {
                return run_embed<decltype(real)>(embed_df, embed_ckpt, embed_out);
            });
        }
        if (synth_cmd->parsed()) return run_synth(synth_cfg, synth_out);
        if (split_cmd->parsed()) {
            return run_split(split_data, split_labels, split_ratio, split_vratio,
                             split_replicates, split_seed, split_require_anom, split_out);
        }
        if (bench_cmd->parsed()) {
            return pick(bench_tf.precision)
                       ? run_bench<double>(bench_df, bench_tf, bench_ratios, bench_replicates,
                                           bench_vratio, bench_out)
                       : run_bench<float>(bench_df, bench_tf, bench_ratios, bench_replicates,
                                          bench_vratio, bench_out);
        }
        if (conv_cmd->parsed()) return run_convert(conv_content, conv_cites, conv_out);
        std::cerr << "no subcommand given\n";
        return 1;
    } catch (const gs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const gs::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const gs::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, false);
}
