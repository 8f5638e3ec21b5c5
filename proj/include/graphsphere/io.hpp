#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "graphsphere/datagen.hpp"
#include "graphsphere/errors.hpp"
#include "graphsphere/eval.hpp"
#include "graphsphere/graph.hpp"
#include "graphsphere/matrix.hpp"
#include "graphsphere/model.hpp"
#include "graphsphere/objective.hpp"
#include "graphsphere/rng.hpp"
#include "graphsphere/trainer.hpp"

// On-disk formats. Text files are line-oriented UTF-8 with `#` comment lines
// and locale-independent numerics (to_chars/from_chars). The checkpoint is a
// little-endian binary container with a trailing FNV-1a checksum.

namespace graphsphere {

namespace io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// numeric text helpers

inline std::string format_real(double v) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline double parse_real(std::string_view token, const std::string& file, std::size_t line) {
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw DataError(file + ":" + std::to_string(line) + ": bad number '" +
                        std::string(token) + "'");
    }
    if (!std::isfinite(v)) {
        throw DataError(file + ":" + std::to_string(line) + ": non-finite value");
    }
    return v;
}

inline long parse_int(std::string_view token, const std::string& file, std::size_t line) {
    long v = 0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
        throw DataError(file + ":" + std::to_string(line) + ": bad integer '" +
                        std::string(token) + "'");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    return s;
}

// Calls fn(line_number, content) for every non-blank, non-comment line.
template <class Fn>
void for_each_data_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty() || content.front() == '#') continue;
        fn(line_no, content);
    }
}

inline std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    std::array<char, 65536> buf;
    while (in.read(buf.data(), static_cast<std::streamsize>(buf.size())) || in.gcount() > 0) {
        h = fnv1a64(buf.data(), static_cast<std::size_t>(in.gcount()), h);
    }
    return h;
}

inline std::string hash_hex(std::uint64_t h) {
    std::array<char, 17> buf{};
    for (int i = 15; i >= 0; --i) {
        buf[static_cast<std::size_t>(i)] = "0123456789abcdef"[h & 0xf];
        h >>= 4;
    }
    return std::string(buf.data(), 16);
}

// ---------------------------------------------------------------------------
// edge file: one `u<TAB>v[<TAB>weight]` per line

template <class Real>
std::vector<Edge<Real>> read_edge_file(const std::filesystem::path& path) {
    std::vector<Edge<Real>> edges;
    for_each_data_line(path, [&](std::size_t line_no, std::string_view content) {
        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        bool in_token = false;
        for (std::size_t i = 0; i <= content.size(); ++i) {
            const bool sep = i == content.size() || content[i] == '\t' || content[i] == ' ';
            if (sep && in_token) {
                tokens.push_back(content.substr(start, i - start));
                in_token = false;
            } else if (!sep && !in_token) {
                start = i;
                in_token = true;
            }
        }
        if (tokens.size() != 2 && tokens.size() != 3) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'u<TAB>v[<TAB>weight]'");
        }
        Edge<Real> e;
        e.u = static_cast<int>(parse_int(tokens[0], path.string(), line_no));
        e.v = static_cast<int>(parse_int(tokens[1], path.string(), line_no));
        e.weight = tokens.size() == 3
                       ? static_cast<Real>(parse_real(tokens[2], path.string(), line_no))
                       : Real(1);
        edges.push_back(e);
    });
    return edges;
}

template <class Real>
void write_edge_file(const std::filesystem::path& path, const std::vector<Edge<Real>>& edges) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& e : edges) {
        out << e.u << '\t' << e.v;
        if (e.weight != Real(1)) out << '\t' << format_real(static_cast<double>(e.weight));
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// attribute file: dense header-less CSV, or sparse `node,dim,value` triplets
// announced by a `#shape N D` line before any data

template <class Real>
Matrix<Real> read_attributes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::optional<std::pair<long, long>> shape;
    std::vector<std::pair<std::size_t, std::string>> data_lines;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '#') {
            if (content.substr(0, 6) == "#shape") {
                if (!data_lines.empty()) {
                    throw DataError(path.string() + ":" + std::to_string(line_no) +
                                    ": #shape must precede all data lines");
                }
                std::istringstream ss{std::string(content.substr(6))};
                long n = 0, d = 0;
                if (!(ss >> n >> d) || n < 1 || d < 0) {
                    throw DataError(path.string() + ":" + std::to_string(line_no) +
                                    ": bad #shape declaration");
                }
                shape = {n, d};
            }
            continue;
        }
        data_lines.emplace_back(line_no, std::string(content));
    }

    if (shape) {  // sparse triplets
        Matrix<Real> x = Matrix<Real>::Zero(shape->first, shape->second);
        Matrix<std::uint8_t> seen = Matrix<std::uint8_t>::Zero(shape->first, shape->second);
        for (const auto& [no, content] : data_lines) {
            const auto fields = split(content, ',');
            if (fields.size() != 3) {
                throw DataError(path.string() + ":" + std::to_string(no) +
                                ": expected 'node,dim,value'");
            }
            const long node = parse_int(trim(fields[0]), path.string(), no);
            const long dim = parse_int(trim(fields[1]), path.string(), no);
            if (node < 0 || node >= shape->first || dim < 0 || dim >= shape->second) {
                throw DataError(path.string() + ":" + std::to_string(no) +
                                ": triplet index outside declared #shape");
            }
            if (seen(node, dim)) {
                throw DataError(path.string() + ":" + std::to_string(no) +
                                ": duplicate triplet for node " + std::to_string(node) +
                                ", dim " + std::to_string(dim));
            }
            seen(node, dim) = 1;
            x(node, dim) = static_cast<Real>(parse_real(trim(fields[2]), path.string(), no));
        }
        return x;
    }

    // dense CSV
    if (data_lines.empty()) throw DataError(path.string() + ": empty attribute file");
    std::vector<std::vector<Real>> rows;
    rows.reserve(data_lines.size());
    for (const auto& [no, content] : data_lines) {
        const auto fields = split(content, ',');
        std::vector<Real> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            row.push_back(static_cast<Real>(parse_real(trim(f), path.string(), no)));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw DataError(path.string() + ":" + std::to_string(no) + ": row has " +
                            std::to_string(row.size()) + " columns, expected " +
                            std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    Matrix<Real> x(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return x;
}

template <class Real>
void write_attributes_dense(const std::filesystem::path& path, const Matrix<Real>& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (c) out << ',';
            out << format_real(static_cast<double>(x(r, c)));
        }
        out << '\n';
    }
}

template <class Real>
void write_attributes_sparse(const std::filesystem::path& path, const Matrix<Real>& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "#shape " << x.rows() << ' ' << x.cols() << '\n';
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (x(r, c) != Real(0)) {
                out << r << ',' << c << ',' << format_real(static_cast<double>(x(r, c)))
                    << '\n';
            }
        }
    }
}

// ---------------------------------------------------------------------------
// label file: `node,label` with label in {anomalous, normal}, covering all
// nodes 0..N-1

inline GroundTruth read_labels(const std::filesystem::path& path) {
    std::vector<std::pair<long, std::uint8_t>> entries;
    for_each_data_line(path, [&](std::size_t line_no, std::string_view content) {
        const auto fields = split(content, ',');
        if (fields.size() != 2) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": expected 'node,label'");
        }
        const long node = parse_int(trim(fields[0]), path.string(), line_no);
        const std::string_view label = trim(fields[1]);
        std::uint8_t value;
        if (label == "anomalous") {
            value = 1;
        } else if (label == "normal") {
            value = 0;
        } else {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": unknown label '" + std::string(label) +
                            "' (expected 'anomalous' or 'normal')");
        }
        if (node < 0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": negative id");
        }
        entries.emplace_back(node, value);
    });
    if (entries.empty()) throw DataError(path.string() + ": empty label file");

    GroundTruth truth(entries.size(), 0);
    std::vector<std::uint8_t> seen(entries.size(), 0);
    for (const auto& [node, value] : entries) {
        if (node >= static_cast<long>(entries.size()) || seen[static_cast<std::size_t>(node)]) {
            throw DataError(path.string() + ": labels must cover each node 0.." +
                            std::to_string(entries.size() - 1) + " exactly once");
        }
        seen[static_cast<std::size_t>(node)] = 1;
        truth[static_cast<std::size_t>(node)] = value;
    }
    return truth;
}

inline void write_labels(const std::filesystem::path& path, const GroundTruth& truth) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        out << i << ',' << (truth[i] ? "anomalous" : "normal") << '\n';
    }
}

// ---------------------------------------------------------------------------
// split JSON: {"anomalous_train":[...], "normal_train":[...],
//              "validation":[...], "test":[...]}

inline LabelSplit read_split_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    auto read_ids = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_array()) {
            throw DataError(path.string() + ": missing array '" + key + "'");
        }
        std::vector<int> ids;
        for (const auto& v : j[key]) {
            if (!v.is_number_integer()) {
                throw DataError(path.string() + ": non-integer id in '" + key + "'");
            }
            ids.push_back(v.get<int>());
        }
        return ids;
    };
    LabelSplit split;
    split.anomalous_train = read_ids("anomalous_train");
    split.normal_train = read_ids("normal_train");
    split.validation = read_ids("validation");
    split.test = read_ids("test");
    return split;
}

inline void write_split_json(const std::filesystem::path& path, const LabelSplit& split) {
    json j;
    j["anomalous_train"] = split.anomalous_train;
    j["normal_train"] = split.normal_train;
    j["validation"] = split.validation;
    j["test"] = split.test;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// dataset bundle: a directory with edges.tsv, labels.csv, optional
// attributes.csv (dense or sparse), optional split.json

struct DatasetBundle {
    std::filesystem::path edges;
    std::filesystem::path labels;
    std::optional<std::filesystem::path> attributes;
    std::optional<std::filesystem::path> split;
};

inline DatasetBundle resolve_bundle(const std::filesystem::path& dir) {
    DatasetBundle bundle;
    bundle.edges = dir / "edges.tsv";
    bundle.labels = dir / "labels.csv";
    if (!std::filesystem::exists(bundle.edges)) {
        throw DataError("bundle: missing " + bundle.edges.string());
    }
    if (!std::filesystem::exists(bundle.labels)) {
        throw DataError("bundle: missing " + bundle.labels.string());
    }
    if (std::filesystem::exists(dir / "attributes.csv")) {
        bundle.attributes = dir / "attributes.csv";
    }
    if (std::filesystem::exists(dir / "split.json")) bundle.split = dir / "split.json";
    return bundle;
}

template <class Real>
struct LoadedBundle {
    AttributedGraph<Real> graph;
    GroundTruth truth;
    std::optional<LabelSplit> split;  // truth attached; semantic checks happen at use
    BuildStats stats;
};

template <class Real>
LoadedBundle<Real> load_bundle(const DatasetBundle& bundle, bool rescale = true) {
    LoadedBundle<Real> loaded;
    loaded.truth = read_labels(bundle.labels);
    const int n = static_cast<int>(loaded.truth.size());

    Matrix<Real> attrs(n, 0);
    if (bundle.attributes) {
        attrs = read_attributes<Real>(*bundle.attributes);
        if (attrs.rows() != n) {
            throw DataError("bundle: attribute file has " + std::to_string(attrs.rows()) +
                            " rows but the label file declares " + std::to_string(n) +
                            " nodes");
        }
        if (rescale) attrs = rescale_attributes(attrs);
    }

    auto edges = read_edge_file<Real>(bundle.edges);
    loaded.graph = build_graph<Real>(n, std::move(edges), std::move(attrs), &loaded.stats);

    if (bundle.split) {
        LabelSplit split = read_split_json(*bundle.split);
        split.truth = loaded.truth;
        loaded.split = std::move(split);
    }
    return loaded;
}

// ---------------------------------------------------------------------------
// train config <-> JSON (checkpoint snapshot, manifests)

template <class Real>
json config_to_json(const TrainConfig<Real>& cfg) {
    json j;
    j["lambda"] = static_cast<double>(cfg.lambda);
    j["layer_dims"] = cfg.layer_dims;
    j["final_activation"] = activation_name(cfg.final_activation);
    j["learning_rate"] = static_cast<double>(cfg.learning_rate);
    j["max_epochs"] = cfg.max_epochs;
    j["patience"] = cfg.patience;
    j["seed"] = cfg.seed;
    j["precision"] = cfg.precision;
    j["l2_weight"] = static_cast<double>(cfg.l2_weight);
    j["mode"] = mode_name(cfg.mode);
    j["auc_max_pairs"] = cfg.auc_max_pairs;
    return j;
}

template <class Real>
TrainConfig<Real> config_from_json(const json& j) {
    TrainConfig<Real> cfg;
    cfg.lambda = static_cast<Real>(j.at("lambda").get<double>());
    cfg.layer_dims = j.at("layer_dims").get<std::vector<int>>();
    cfg.final_activation = parse_activation(j.at("final_activation").get<std::string>());
    cfg.learning_rate = static_cast<Real>(j.at("learning_rate").get<double>());
    cfg.max_epochs = j.at("max_epochs").get<int>();
    cfg.patience = j.at("patience").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.precision = j.at("precision").get<std::string>();
    cfg.l2_weight = static_cast<Real>(j.at("l2_weight").get<double>());
    cfg.mode = parse_mode(j.at("mode").get<std::string>());
    cfg.auc_max_pairs = j.at("auc_max_pairs").get<std::size_t>();
    return cfg;
}

// ---------------------------------------------------------------------------
// checkpoint: versioned little-endian binary container, FNV-1a checksummed.
// Round-trip is bit-identical: weights and center are stored as raw IEEE
// words, row-major.

namespace detail {

inline constexpr char kCheckpointMagic[8] = {'G', 'S', 'P', 'H', 'C', 'K', 'P', 'T'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct ByteWriter {
    std::string buf;

    void bytes(const void* p, std::size_t n) {
        buf.append(static_cast<const char*>(p), n);
    }
    void u32(std::uint32_t v) { bytes(&v, sizeof v); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

struct ByteReader {
    const std::string& buf;
    std::size_t pos = 0;

    void bytes(void* p, std::size_t n) {
        if (pos + n > buf.size()) throw DataError("checkpoint: truncated");
        std::memcpy(p, buf.data() + pos, n);
        pos += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::string str() {
        const std::uint32_t n = u32();
        if (n > buf.size() - pos) throw DataError("checkpoint: truncated");
        std::string s(buf.data() + pos, n);
        pos += n;
        return s;
    }
};

}  // namespace detail

template <class Real>
struct Checkpoint {
    GcnModel<Real> model;
    Center<Real> center;
    TrainConfig<Real> config;
};

/// Reads only the header, returning the stored precision tag so callers can
/// pick the matching arithmetic before a full load.
inline std::string checkpoint_precision(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    char magic[8];
    std::uint32_t version = 0;
    std::uint32_t tag_len = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&tag_len), sizeof tag_len);
    if (!in || std::memcmp(magic, detail::kCheckpointMagic, sizeof magic) != 0) {
        throw DataError("checkpoint: bad magic (not a checkpoint file)");
    }
    if (version != detail::kCheckpointVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    if (tag_len > 16) throw DataError("checkpoint: bad precision tag");
    std::string tag(tag_len, '\0');
    in.read(tag.data(), tag_len);
    if (!in) throw DataError("checkpoint: truncated");
    return tag;
}

template <class Real>
void save_checkpoint(const std::filesystem::path& path, const GcnModel<Real>& model,
                     const Center<Real>& center, const TrainConfig<Real>& cfg) {
    detail::ByteWriter w;
    w.bytes(detail::kCheckpointMagic, sizeof detail::kCheckpointMagic);
    w.u32(detail::kCheckpointVersion);
    w.str(precision_name<Real>());
    w.str(activation_name(model.final_activation));
    w.u32(static_cast<std::uint32_t>(model.layer_dims.size()));
    for (int d : model.layer_dims) w.u32(static_cast<std::uint32_t>(d));
    for (const auto& weight : model.weights) {
        w.bytes(weight.data(), sizeof(Real) * static_cast<std::size_t>(weight.size()));
    }
    w.u32(static_cast<std::uint32_t>(center.c.size()));
    w.bytes(center.c.data(), sizeof(Real) * static_cast<std::size_t>(center.c.size()));
    w.bytes(&center.guard_engaged, 1);
    w.str(config_to_json(cfg).dump());
    w.u64(fnv1a64(w.buf.data(), w.buf.size()));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out.write(w.buf.data(), static_cast<std::streamsize>(w.buf.size()));
}

template <class Real>
Checkpoint<Real> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string buf = ss.str();

    if (buf.size() < sizeof(detail::kCheckpointMagic) + sizeof(std::uint64_t)) {
        throw DataError("checkpoint: truncated");
    }
    std::uint64_t trailer;
    std::memcpy(&trailer, buf.data() + buf.size() - sizeof trailer, sizeof trailer);
    if (fnv1a64(buf.data(), buf.size() - sizeof trailer) != trailer) {
        throw DataError("checkpoint: checksum mismatch (corrupt or truncated file)");
    }

    detail::ByteReader r{buf};
    char magic[8];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, detail::kCheckpointMagic, sizeof magic) != 0) {
        throw DataError("checkpoint: bad magic (not a checkpoint file)");
    }
    const std::uint32_t version = r.u32();
    if (version != detail::kCheckpointVersion) {
        throw DataError("checkpoint: unsupported version " + std::to_string(version));
    }
    const std::string precision = r.str();
    if (precision != precision_name<Real>()) {
        throw DataError("checkpoint: precision tag '" + precision +
                        "' does not match the requested arithmetic '" +
                        std::string(precision_name<Real>()) + "' (no silent cast)");
    }

    Checkpoint<Real> ckpt;
    ckpt.model.final_activation = parse_activation(r.str());
    const std::uint32_t n_dims = r.u32();
    if (n_dims < 2 || n_dims > 1024) throw DataError("checkpoint: bad layer_dims");
    for (std::uint32_t i = 0; i < n_dims; ++i) {
        ckpt.model.layer_dims.push_back(static_cast<int>(r.u32()));
    }
    for (std::uint32_t l = 0; l + 1 < n_dims; ++l) {
        const int rows = ckpt.model.layer_dims[l];
        const int cols = ckpt.model.layer_dims[l + 1];
        if (rows < 1 || cols < 1) throw DataError("checkpoint: bad layer shape");
        Matrix<Real> w(rows, cols);
        r.bytes(w.data(), sizeof(Real) * static_cast<std::size_t>(w.size()));
        ckpt.model.weights.push_back(std::move(w));
    }
    const std::uint32_t k = r.u32();
    if (static_cast<int>(k) != ckpt.model.layer_dims.back()) {
        throw DataError("checkpoint: center dimension does not match the model");
    }
    ckpt.center.c.resize(k);
    r.bytes(ckpt.center.c.data(), sizeof(Real) * k);
    r.bytes(&ckpt.center.guard_engaged, 1);
    try {
        ckpt.config = config_from_json<Real>(json::parse(r.str()));
    } catch (const json::exception& e) {
        throw DataError(std::string("checkpoint: bad config snapshot: ") + e.what());
    }
    return ckpt;
}

// ---------------------------------------------------------------------------
// metrics stream, eval report, CSV exports

// One JSON object per epoch. Deterministic by construction: wall-clock stays
// in the in-memory history (and the run manifest), never in this stream.
template <class Real>
void write_metrics_jsonl(const std::filesystem::path& path, const TrainHistory<Real>& history) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& e : history.epochs) {
        json j;
        j["epoch"] = e.epoch;
        j["total"] = static_cast<double>(e.total);
        j["compactness"] = static_cast<double>(e.compactness);
        j["auc_reg"] = static_cast<double>(e.auc_reg);
        j["validation_criterion"] = static_cast<double>(e.validation_criterion);
        out << j.dump() << '\n';
    }
    json tail;
    tail["best_epoch"] = history.best_epoch;
    tail["stop_reason"] = history.stop_reason;
    out << tail.dump() << '\n';
}

template <class Real>
json report_to_json(const EvalReport<Real>& report) {
    json j;
    j["test_auc"] = static_cast<double>(report.test_auc);
    j["validation_criterion"] = static_cast<double>(report.validation_criterion);
    j["mode"] = mode_name(report.mode);
    j["n_test"] = report.n_test;
    j["n_test_anomalous"] = report.n_test_anomalous;
    j["n_validation"] = report.n_validation;
    std::vector<double> scores(report.scores.data(),
                               report.scores.data() + report.scores.size());
    j["scores"] = scores;
    return j;
}

template <class Real>
void write_scores_csv(const std::filesystem::path& path, const Vector<Real>& scores,
                      const GroundTruth* truth = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << (truth ? "node,score,truth\n" : "node,score\n");
    for (Eigen::Index i = 0; i < scores.size(); ++i) {
        out << i << ',' << format_real(static_cast<double>(scores[i]));
        if (truth) out << ',' << ((*truth)[static_cast<std::size_t>(i)] ? "anomalous" : "normal");
        out << '\n';
    }
}

template <class Real>
void write_embeddings_csv(const std::filesystem::path& path, const Matrix<Real>& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "node";
    for (Eigen::Index c = 0; c < h.cols(); ++c) out << ",h_" << (c + 1);
    out << '\n';
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        out << r;
        for (Eigen::Index c = 0; c < h.cols(); ++c) {
            out << ',' << format_real(static_cast<double>(h(r, c)));
        }
        out << '\n';
    }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// converter for the common raw citation-network layout:
//   content file: <paper_id> <feat_0> ... <feat_{D-1}> <class_label>
//   cites file:   <cited_id> <citing_id>
// Paper ids are remapped to dense 0-based ids by first appearance in the
// content file; the smallest class becomes `anomalous`.

struct CitationSummary {
    int n_nodes = 0;
    int n_attributes = 0;
    int n_edges_written = 0;
    std::size_t unknown_id_edges = 0;  // skipped, best effort
    std::string anomalous_class;
    std::size_t anomaly_count = 0;
};

inline CitationSummary convert_citation(const std::filesystem::path& content_path,
                                        const std::filesystem::path& cites_path,
                                        const std::filesystem::path& out_dir) {
    std::unordered_map<std::string, int> node_ids;
    std::vector<std::vector<double>> features;
    std::vector<std::string> class_names;

    for_each_data_line(content_path, [&](std::size_t line_no, std::string_view content) {
        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        bool in_token = false;
        for (std::size_t i = 0; i <= content.size(); ++i) {
            const bool sep = i == content.size() || content[i] == '\t' || content[i] == ' ';
            if (sep && in_token) {
                tokens.push_back(content.substr(start, i - start));
                in_token = false;
            } else if (!sep && !in_token) {
                start = i;
                in_token = true;
            }
        }
        if (tokens.size() < 2) {
            throw DataError(content_path.string() + ":" + std::to_string(line_no) +
                            ": expected '<id> <features...> <class>'");
        }
        const std::string id(tokens.front());
        if (node_ids.count(id)) {
            throw DataError(content_path.string() + ":" + std::to_string(line_no) +
                            ": duplicate node id '" + id + "'");
        }
        std::vector<double> row;
        row.reserve(tokens.size() - 2);
        for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
            row.push_back(parse_real(tokens[i], content_path.string(), line_no));
        }
        if (!features.empty() && row.size() != features.front().size()) {
            throw DataError(content_path.string() + ":" + std::to_string(line_no) +
                            ": inconsistent feature count");
        }
        node_ids.emplace(id, static_cast<int>(features.size()));
        features.push_back(std::move(row));
        class_names.emplace_back(tokens.back());
    });
    if (features.empty()) throw DataError(content_path.string() + ": no nodes");

    // class strings -> ids by sorted order, then smallest-class binarization
    std::vector<std::string> classes = class_names;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::unordered_map<std::string, int> class_ids;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        class_ids.emplace(classes[i], static_cast<int>(i));
    }
    std::vector<int> labels;
    labels.reserve(class_names.size());
    for (const auto& c : class_names) labels.push_back(class_ids.at(c));
    const BinarizeResult binarized = binarize_labels(labels);

    CitationSummary summary;
    summary.n_nodes = static_cast<int>(features.size());
    summary.n_attributes = static_cast<int>(features.front().size());
    summary.anomalous_class = classes[static_cast<std::size_t>(binarized.anomalous_class)];
    summary.anomaly_count = binarized.anomaly_count;

    std::vector<Edge<double>> edges;
    for_each_data_line(cites_path, [&](std::size_t line_no, std::string_view content) {
        std::vector<std::string_view> tokens;
        std::size_t start = 0;
        bool in_token = false;
        for (std::size_t i = 0; i <= content.size(); ++i) {
            const bool sep = i == content.size() || content[i] == '\t' || content[i] == ' ';
            if (sep && in_token) {
                tokens.push_back(content.substr(start, i - start));
                in_token = false;
            } else if (!sep && !in_token) {
                start = i;
                in_token = true;
            }
        }
        if (tokens.size() != 2) {
            throw DataError(cites_path.string() + ":" + std::to_string(line_no) +
                            ": expected '<cited> <citing>'");
        }
        const auto a = node_ids.find(std::string(tokens[0]));
        const auto b = node_ids.find(std::string(tokens[1]));
        if (a == node_ids.end() || b == node_ids.end()) {
            ++summary.unknown_id_edges;
            return;
        }
        edges.push_back({a->second, b->second, 1.0});
    });
    summary.n_edges_written = static_cast<int>(edges.size());

    std::filesystem::create_directories(out_dir);
    Matrix<double> attrs(summary.n_nodes, summary.n_attributes);
    for (int r = 0; r < summary.n_nodes; ++r) {
        for (int c = 0; c < summary.n_attributes; ++c) {
            attrs(r, c) = features[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    write_edge_file(out_dir / "edges.tsv", edges);
    write_attributes_sparse(out_dir / "attributes.csv", attrs);
    write_labels(out_dir / "labels.csv", binarized.truth);
    return summary;
}

}  // namespace io

}  // namespace graphsphere
