// Release gate: one line per criterion, PASS/FAIL/SKIP, exit 0 iff nothing
// failed. Each check carries its tolerance and time budget inline so a red
// line is diagnosable from the output alone.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "support/oracles.hpp"

namespace gs = graphsphere;
namespace gio = graphsphere::io;

namespace {

struct CheckResult {
    bool ok = false;
    std::string detail;
};

int g_failures = 0;

void report(int index, const std::string& name, const char* status, const std::string& detail,
            double seconds) {
    std::ostringstream line;
    line << status << ": criterion " << index << " (" << name << ")";
    if (!detail.empty()) line << " " << detail;
    line << " [" << std::fixed;
    line.precision(2);
    line << seconds << " s]";
    std::cout << line.str() << std::endl;
}

void run_criterion(int index, const std::string& name, double time_limit_s,
                   const std::function<CheckResult()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
        r = fn();
    } catch (const std::exception& e) {
        r.ok = false;
        r.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.ok && time_limit_s > 0.0 && elapsed > time_limit_s) {
        r.ok = false;
        r.detail += " (over the " + gio::format_real(time_limit_s) + " s budget)";
    }
    if (!r.ok) ++g_failures;
    report(index, name, r.ok ? "PASS" : "FAIL", r.detail, elapsed);
}

void skip_criterion(int index, const std::string& name, const std::string& why) {
    report(index, name, "SKIP", why, 0.0);
}

std::string fmt(double v) { return gio::format_real(v); }

// ---------------------------------------------------------------------------
// shared fixtures

struct LabeledSets {
    std::vector<int> anomalous;
    std::vector<int> normal;
};

// deterministic id layout: first a anomalous, next m normal, rest unlabeled
LabeledSets fixed_sets(int n_anom, int n_norm) {
    LabeledSets sets;
    for (int i = 0; i < n_anom; ++i) sets.anomalous.push_back(i);
    for (int i = n_anom; i < n_anom + n_norm; ++i) sets.normal.push_back(i);
    return sets;
}

std::string cli_path;  // set in main

struct Subprocess {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Subprocess run_cli(const std::filesystem::path& log_dir, const std::string& args) {
    static int counter = 0;
    const auto log = log_dir / ("cli." + std::to_string(counter++) + ".log");
    const std::string cmd = cli_path + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    Subprocess p;
    p.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    p.out = slurp(log);
    return p;
}

// ---------------------------------------------------------------------------
// criterion 1: analytic weight gradients vs central finite differences

CheckResult check_gradients() {
    const int n = 12, dim = 5;
    const std::vector<int> dims = {5, 8, 4};
    const double step = 1e-6, tol = 1e-5;
    double worst = 0.0;

    for (int instance = 0; instance < 5; ++instance) {
        gs::Rng rng(1000 + static_cast<std::uint64_t>(instance));
        const auto g = oracles::random_graph<double>(rng, n, 0.35, dim);
        const auto s = gs::normalized_adjacency(g);
        const auto sets = fixed_sets(3, 5);
        const auto activation =
            instance % 2 == 0 ? gs::Activation::identity : gs::Activation::relu;

        for (const double lambda : {0.0, 10.0}) {
            auto model = gs::init_model<double>(dims, 77 + static_cast<std::uint64_t>(instance),
                                                activation);
            // the center is part of the data, frozen before any update
            const auto center = gs::init_center(model, s, g.attributes, sets.normal);

            const auto loss = [&]() {
                const auto cache = gs::forward(model, s, g.attributes);
                return gs::objective(cache.embeddings(), center, sets.anomalous, sets.normal,
                                     lambda)
                    .total;
            };

            auto cache = gs::forward(model, s, g.attributes);
            const auto loss_grad = gs::objective_grad_embeddings(
                cache.embeddings(), center, sets.anomalous, sets.normal, lambda);
            const auto analytic = gs::backward(model, cache, loss_grad, s);

            for (std::size_t l = 0; l < model.weights.size(); ++l) {
                const auto numeric =
                    oracles::finite_difference<double>(model.weights[l], loss, step);
                // floor 1e-4: entries below it are held to an absolute 1e-9
                worst = std::max(worst,
                                 oracles::max_relative_error(analytic[l], numeric, 1e-4));
            }
        }
    }
    return {worst < tol, "max_rel=" + fmt(worst) + " tol=" + fmt(tol)};
}

// ---------------------------------------------------------------------------
// criterion 2: sparse propagation vs the dense normalized operator

CheckResult check_sparse_vs_dense() {
    gs::Rng rng(2);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(50));
        const int d = 1 + static_cast<int>(rng.below(6));
        const auto g = oracles::random_graph<double>(rng, n, 0.3, d, trial % 2 == 1);
        const auto s = gs::normalized_adjacency(g);
        const auto dense = oracles::dense_normalized(g);
        const auto out = gs::propagate(s, g.attributes);
        const gs::Matrix<double> want = dense * g.attributes;
        worst = std::max(worst, (out - want).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-12, "graphs=100 max_abs=" + fmt(worst) + " tol=1e-12"};
}

// ---------------------------------------------------------------------------
// criterion 3: rank-based AUC equals brute-force pair counting exactly

CheckResult check_auc_exact() {
    gs::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(199);
        std::vector<double> scores(n);
        for (auto& v : scores) {
            v = rng.normal();
            if (trial % 2 == 0) v = std::floor(v * 4.0) / 4.0;  // force tie groups
        }
        std::vector<std::uint8_t> labels(n, 0);
        for (auto& l : labels) l = rng.below(2) ? 1 : 0;
        labels[0] = 1;
        labels[n - 1] = 0;
        if (gs::auc<double>(scores, labels) != oracles::brute_auc(scores, labels)) {
            return {false, "mismatch at case " + std::to_string(trial)};
        }
    }
    return {true, "vectors=200 (ties included), bitwise equal"};
}

// ---------------------------------------------------------------------------
// criterion 4: an edgeless graph reduces to a bias-free dense network

CheckResult check_edgeless_reduction() {
    gs::Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(20));
        const int d = 1 + static_cast<int>(rng.below(6));
        gs::Matrix<double> x(n, d);
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            for (Eigen::Index c = 0; c < x.cols(); ++c) x(r, c) = rng.normal();
        }
        const auto g = gs::build_graph<double>(n, {}, x);
        const auto s = gs::normalized_adjacency(g);
        const auto activation =
            trial % 2 == 0 ? gs::Activation::identity : gs::Activation::relu;
        const auto model = gs::init_model<double>({d, 7, 3},
                                                  40 + static_cast<std::uint64_t>(trial),
                                                  activation);
        const auto cache = gs::forward(model, s, x);
        const auto mlp = oracles::mlp_forward(model.weights, x, activation);
        if (!(cache.embeddings() == mlp)) {
            return {false, "bitwise mismatch at case " + std::to_string(trial)};
        }
    }
    return {true, "cases=20, embeddings bit-identical to the dense network"};
}

// ---------------------------------------------------------------------------
// criterion 5: planted anomalies are found; the null case sits at chance

double synthetic_auc(double mu_shift, double p_in, double p_out, std::uint64_t seed) {
    gs::SynthConfig synth;
    synth.n_nodes = 500;
    synth.anomaly_rate = 0.05;
    synth.p_in = p_in;
    synth.p_out = p_out;
    synth.mu_shift = mu_shift;
    synth.seed = seed;
    const auto data = gs::generate_synthetic<double>(synth);

    gs::SplitSpec spec;
    spec.labeled_ratio = 0.10;
    spec.validation_ratio = 0.10;
    spec.seed = seed;
    spec.require_anomalous = true;
    const auto split = gs::make_split(data.truth, spec);

    gs::TrainConfig<double> cfg;
    cfg.lambda = 10.0;
    cfg.learning_rate = 0.001;
    cfg.max_epochs = 300;
    cfg.patience = 50;
    cfg.seed = seed;
    const auto result = gs::train(data.graph, split, cfg);
    return static_cast<double>(
        gs::evaluate(result.model, result.center, data.graph, split, gs::Mode::an).test_auc);
}

CheckResult check_end_to_end() {
    double planted = 0.0, null_mean = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        planted += synthetic_auc(4.0, 0.05, 0.005, seed);
        null_mean += synthetic_auc(0.0, 0.05, 0.05, seed);
    }
    planted /= 5.0;
    null_mean /= 5.0;

    const bool ok = planted >= 0.95 && std::abs(null_mean - 0.5) <= 0.1;
    return {ok, "planted_mean=" + fmt(planted) + " (>=0.95), null_mean=" + fmt(null_mean) +
                    " (0.5 +- 0.1), seeds=5"};
}

// ---------------------------------------------------------------------------
// criterion 6: mode-N output is invariant to the anomalous-label slot

CheckResult check_mode_n_invariance() {
    // library level: arbitrary sentinel content cannot change a mode-N run
    gs::SynthConfig synth;
    synth.n_nodes = 120;
    synth.dim = 6;
    synth.anomaly_rate = 0.1;
    synth.seed = 6;
    const auto data = gs::generate_synthetic<double>(synth);
    gs::SplitSpec spec;
    spec.labeled_ratio = 0.2;
    spec.validation_ratio = 0.2;
    spec.seed = 6;
    auto split = gs::make_split(data.truth, spec);

    gs::TrainConfig<double> cfg;
    cfg.mode = gs::Mode::n;
    cfg.layer_dims = {6, 8, 4};
    cfg.max_epochs = 20;
    cfg.patience = 20;
    cfg.seed = 7;

    auto clean = split;
    clean.anomalous_train.clear();
    auto poisoned = split;
    poisoned.anomalous_train = {-1, 999999, 3, 3, -42};

    const auto a = gs::train(data.graph, clean, cfg);
    const auto b = gs::train(data.graph, poisoned, cfg);
    if (a.history.epochs.size() != b.history.epochs.size()) {
        return {false, "library run lengths differ"};
    }
    for (std::size_t i = 0; i < a.history.epochs.size(); ++i) {
        if (a.history.epochs[i].total != b.history.epochs[i].total) {
            return {false, "library totals diverge at epoch " + std::to_string(i)};
        }
    }
    for (std::size_t l = 0; l < a.model.weights.size(); ++l) {
        if (!(a.model.weights[l] == b.model.weights[l])) {
            return {false, "library weights diverge at layer " + std::to_string(l)};
        }
    }

    // command level: byte-identical artifacts under a poisoned split file
    if (cli_path.empty()) return {false, "no CLI binary path provided"};
    oracles::TempDir tmp;
    const auto dir = tmp.path / "data";
    std::filesystem::create_directories(dir);
    gio::write_edge_file(dir / "edges.tsv", data.graph.edges);
    gio::write_attributes_dense(dir / "attributes.csv", data.graph.attributes);
    gio::write_labels(dir / "labels.csv", data.truth);
    gio::write_split_json(dir / "split.json", clean);
    const auto poisoned_json = tmp.path / "poisoned.json";
    gio::write_split_json(poisoned_json, poisoned);

    const std::string train_args = " --mode n --layers 8,4 --max-epochs 20 --patience 20 "
                                   "--seed 7 --data " +
                                   dir.string();
    const auto r1 =
        run_cli(tmp.path, "train" + train_args + " --out " + (tmp.path / "clean").string());
    const auto r2 = run_cli(tmp.path, "train" + train_args + " --split " +
                                          poisoned_json.string() + " --out " +
                                          (tmp.path / "poisoned").string());
    if (r1.exit_code != 0 || r2.exit_code != 0) {
        return {false, "CLI train exited " + std::to_string(r1.exit_code) + "/" +
                           std::to_string(r2.exit_code)};
    }
    if (slurp(tmp.path / "clean" / "checkpoint.bin") !=
        slurp(tmp.path / "poisoned" / "checkpoint.bin")) {
        return {false, "CLI checkpoints differ under a poisoned anomalous slot"};
    }
    if (slurp(tmp.path / "clean" / "metrics.jsonl") !=
        slurp(tmp.path / "poisoned" / "metrics.jsonl")) {
        return {false, "CLI metrics differ under a poisoned anomalous slot"};
    }
    return {true, "library + CLI artifacts bit-identical under sentinel anomalous ids"};
}

// ---------------------------------------------------------------------------
// criterion 7: citation benchmark (needs an external converted bundle)

CheckResult check_citation_benchmark(const std::string& bundle_dir) {
    const auto loaded = gio::load_bundle<double>(gio::resolve_bundle(bundle_dir));
    const std::vector<double> grid = {1.0, 10.0, 100.0, 1000.0, 10000.0};

    double an_sum = 0.0, n_sum = 0.0;
    for (std::uint64_t rep = 0; rep < 10; ++rep) {
        gs::SplitSpec spec;
        spec.labeled_ratio = 0.10;
        spec.validation_ratio = 0.10;
        spec.seed = 17;
        spec.replicate = rep;
        spec.require_anomalous = true;
        const auto split = gs::make_split(loaded.truth, spec);

        gs::TrainConfig<double> cfg;
        cfg.learning_rate = 0.001;
        cfg.max_epochs = 500;
        cfg.patience = 50;
        cfg.seed = rep;

        double best_criterion = -std::numeric_limits<double>::infinity();
        double best_auc = 0.0;
        for (double lambda : grid) {
            cfg.lambda = lambda;
            const auto result = gs::train(loaded.graph, split, cfg);
            if (result.history.best_epoch < 0) continue;
            const double crit =
                result.history.epochs[static_cast<std::size_t>(result.history.best_epoch)]
                    .validation_criterion;
            if (crit > best_criterion) {
                best_criterion = crit;
                best_auc = static_cast<double>(
                    gs::evaluate(result.model, result.center, loaded.graph, split,
                                 gs::Mode::an)
                        .test_auc);
            }
        }
        an_sum += best_auc;

        gs::TrainConfig<double> ncfg = cfg;
        ncfg.mode = gs::Mode::n;
        ncfg.lambda = 0.0;
        const auto nresult = gs::train(loaded.graph, split, ncfg);
        n_sum += static_cast<double>(
            gs::evaluate(nresult.model, nresult.center, loaded.graph, split, gs::Mode::n)
                .test_auc);
    }
    const double an_mean = 100.0 * an_sum / 10.0;
    const double n_mean = 100.0 * n_sum / 10.0;

    // single full-length run, timed
    gs::SplitSpec spec;
    spec.labeled_ratio = 0.10;
    spec.validation_ratio = 0.10;
    spec.seed = 17;
    spec.require_anomalous = true;
    const auto split = gs::make_split(loaded.truth, spec);
    gs::TrainConfig<double> cfg;
    cfg.lambda = 10.0;
    cfg.max_epochs = 500;
    cfg.patience = 500;
    cfg.seed = 99;
    const auto t0 = std::chrono::steady_clock::now();
    gs::train(loaded.graph, split, cfg);
    const double run_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool ok = an_mean >= 90.0 && an_mean <= 98.5 && n_mean < an_mean && run_s < 60.0;
    return {ok, "an_mean=" + fmt(an_mean) + "% (in [90.0, 98.5]), n_mean=" + fmt(n_mean) +
                    "% (< an), 500-epoch run " + fmt(run_s) + " s (< 60)"};
}

// ---------------------------------------------------------------------------
// criterion 8: repeated CLI training runs emit identical bytes

CheckResult check_cli_determinism() {
    if (cli_path.empty()) return {false, "no CLI binary path provided"};
    oracles::TempDir tmp;
    const auto data = (tmp.path / "data").string();
    auto r = run_cli(tmp.path, "synth --nodes 80 --dim 5 --anomaly-rate 0.1 --p-in 0.15 "
                               "--p-out 0.02 --seed 21 --out " +
                                   data);
    if (r.exit_code != 0) return {false, "synth failed: " + r.out};
    r = run_cli(tmp.path, "split --data " + data +
                              " --ratio 0.2 --validation-ratio 0.2 --require-anomalous "
                              "--seed 5 --out " +
                              data);
    if (r.exit_code != 0) return {false, "split failed: " + r.out};

    const std::string train_args = "train --data " + data +
                                   " --lambda 10 --layers 8,4 --max-epochs 30 --patience 30 "
                                   "--seed 13 --out ";
    const auto a = run_cli(tmp.path, train_args + (tmp.path / "a").string());
    const auto b = run_cli(tmp.path, train_args + (tmp.path / "b").string());
    if (a.exit_code != 0 || b.exit_code != 0) {
        return {false, "train exited " + std::to_string(a.exit_code) + "/" +
                           std::to_string(b.exit_code)};
    }
    if (slurp(tmp.path / "a" / "metrics.jsonl") != slurp(tmp.path / "b" / "metrics.jsonl")) {
        return {false, "metrics streams differ between identical runs"};
    }
    if (slurp(tmp.path / "a" / "checkpoint.bin") != slurp(tmp.path / "b" / "checkpoint.bin")) {
        return {false, "checkpoints differ between identical runs"};
    }
    return {true, "metrics.jsonl and checkpoint.bin byte-identical across reruns"};
}

// ---------------------------------------------------------------------------
// criterion 9: module invariants as randomized property checks

bool property_permutation_equivariance() {
    gs::Rng rng(91);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(16));
        const int d = 1 + static_cast<int>(rng.below(5));
        const auto g = oracles::random_graph<double>(rng, n, 0.3, d);
        const auto model = gs::init_model<double>(
            {d, 6, 3}, trial, trial % 2 ? gs::Activation::relu : gs::Activation::identity);

        std::vector<int> perm(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[rng.below(static_cast<std::uint64_t>(i + 1))]);
        }

        // permuted copy of the graph: relabel endpoints, reorder attribute rows
        std::vector<gs::Edge<double>> edges = g.edges;
        for (auto& e : edges) {
            e.u = perm[static_cast<std::size_t>(e.u)];
            e.v = perm[static_cast<std::size_t>(e.v)];
        }
        gs::Matrix<double> px(n, d);
        for (int i = 0; i < n; ++i) px.row(perm[static_cast<std::size_t>(i)]) = g.attributes.row(i);
        const auto pg = gs::build_graph<double>(n, std::move(edges), px);

        const auto h = gs::forward(model, gs::normalized_adjacency(g), g.attributes);
        const auto ph = gs::forward(model, gs::normalized_adjacency(pg), pg.attributes);
        for (int i = 0; i < n; ++i) {
            const auto diff = (ph.embeddings().row(perm[static_cast<std::size_t>(i)]) -
                               h.embeddings().row(i))
                                  .cwiseAbs()
                                  .maxCoeff();
            if (diff > 1e-10) return false;
        }
    }
    return true;
}

bool property_translation_consistency() {
    gs::Rng rng(92);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(10));
        const int k = 1 + static_cast<int>(rng.below(4));
        gs::Matrix<double> h(n, k);
        for (Eigen::Index r = 0; r < h.rows(); ++r) {
            for (Eigen::Index c = 0; c < h.cols(); ++c) h(r, c) = rng.normal();
        }
        gs::Center<double> center;
        center.c = gs::Vector<double>::Zero(k);
        for (int j = 0; j < k; ++j) center.c[j] = rng.normal();

        gs::Vector<double> t(k);
        for (int j = 0; j < k; ++j) t[j] = rng.normal();
        gs::Matrix<double> h2 = h;
        h2.rowwise() += t.transpose();
        gs::Center<double> c2 = center;
        c2.c += t;

        const auto s1 = gs::anomaly_scores(h, center);
        const auto s2 = gs::anomaly_scores(h2, c2);
        if ((s1 - s2).cwiseAbs().maxCoeff() > 1e-10) return false;

        std::vector<int> anomalous = {0};
        std::vector<int> normal;
        for (int i = 1; i < n; ++i) normal.push_back(i);
        const auto v1 = gs::objective(h, center, anomalous, normal, 2.5);
        const auto v2 = gs::objective(h2, c2, anomalous, normal, 2.5);
        if (std::abs(v1.total - v2.total) > 1e-10) return false;
    }
    return true;
}

bool property_auc_monotone_invariance() {
    gs::Rng rng(93);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng.below(80);
        std::vector<double> scores(n);
        for (auto& v : scores) v = 3.0 * rng.normal();
        std::vector<std::uint8_t> labels(n, 0);
        for (auto& l : labels) l = rng.below(2) ? 1 : 0;
        labels[0] = 1;
        labels[n - 1] = 0;

        std::vector<double> warped(n);
        for (std::size_t i = 0; i < n; ++i) warped[i] = std::exp(0.5 * scores[i]) + 2.0;
        if (gs::auc<double>(scores, labels) != gs::auc<double>(warped, labels)) return false;
    }
    return true;
}

bool property_sigmoid_saturation() {
    gs::Rng rng(94);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = 4000.0 * (rng.uniform01() - 0.5);
        const double y = gs::stable_sigmoid(x);
        if (!(y >= 0.0 && y <= 1.0) || !std::isfinite(y)) return false;
        if (x > 40.0 && y != 1.0) return false;     // 1 + exp(-x) rounds to 1
        if (x < -800.0 && y != 0.0) return false;   // exp(x) underflows
        if (x < -40.0 && y > 1e-17) return false;
        if (std::abs(x) < 30.0) {
            const double want = 1.0 / (1.0 + std::exp(-x));
            if (std::abs(y - want) > 1e-12) return false;
        }
    }
    return true;
}

bool property_center_freeze() {
    gs::Rng rng(95);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 8 + static_cast<int>(rng.below(8));
        const auto g = oracles::random_graph<double>(rng, n, 0.25, 3);
        gs::LabelSplit split;
        split.anomalous_train = {0};
        split.normal_train = {1, 2};
        split.validation = {3, 4};
        split.test = {5, 6, 7};
        split.truth.assign(static_cast<std::size_t>(n), 0);
        split.truth[0] = 1;
        split.truth[3] = 1;

        gs::TrainConfig<double> cfg;
        cfg.lambda = trial % 2 ? 2.0 : 0.0;
        cfg.layer_dims = {3, 5, 2};
        cfg.max_epochs = 3;
        cfg.patience = 3;
        cfg.seed = static_cast<std::uint64_t>(trial);
        const auto result = gs::train(g, split, cfg);

        const auto model0 = gs::init_model<double>({3, 5, 2},
                                                   gs::substream_seed(cfg.seed, "init"),
                                                   cfg.final_activation);
        const auto c0 = gs::init_center(model0, gs::normalized_adjacency(g), g.attributes,
                                        split.normal_train);
        if (!(result.center.c == c0.c)) return false;
    }
    return true;
}

CheckResult check_properties() {
    struct Property {
        const char* name;
        bool (*fn)();
    };
    const Property properties[] = {
        {"permutation-equivariance", property_permutation_equivariance},
        {"translation-consistency", property_translation_consistency},
        {"auc-monotone-invariance", property_auc_monotone_invariance},
        {"sigmoid-saturation", property_sigmoid_saturation},
        {"center-freeze", property_center_freeze},
    };
    std::string failed;
    for (const auto& p : properties) {
        if (!p.fn()) failed += std::string(failed.empty() ? "" : ", ") + p.name;
    }
    if (!failed.empty()) return {false, "failed: " + failed};
    return {true, "5 properties x 100 randomized cases each"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        cli_path = argv[1];
    } else if (const char* env = std::getenv("GRAPHSPHERE_CLI")) {
        cli_path = env;
    }

    run_criterion(1, "analytic vs numeric gradients", 10.0, check_gradients);
    run_criterion(2, "sparse vs dense propagation", 5.0, check_sparse_vs_dense);
    run_criterion(3, "auc vs brute-force pairs", 5.0, check_auc_exact);
    run_criterion(4, "edgeless reduction to a dense network", 5.0, check_edgeless_reduction);
    run_criterion(5, "planted-anomaly end to end", 120.0, check_end_to_end);
    run_criterion(6, "mode-n label-slot invariance", 60.0, check_mode_n_invariance);

    if (const char* bundle = std::getenv("GRAPHSPHERE_CORA_BUNDLE")) {
        const std::string dir = bundle;
        run_criterion(7, "citation benchmark", 0.0,
                      [&dir] { return check_citation_benchmark(dir); });
    } else {
        skip_criterion(7, "citation benchmark",
                       "set GRAPHSPHERE_CORA_BUNDLE to a converted bundle directory to run");
    }

    run_criterion(8, "CLI training determinism", 120.0, check_cli_determinism);
    run_criterion(9, "module invariants as property checks", 60.0, check_properties);

    if (g_failures > 0) {
        std::cout << g_failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all criteria satisfied" << std::endl;
    return 0;
}
