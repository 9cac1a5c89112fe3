#include "healthguard/model_io.hpp"

#include "healthguard/errors.hpp"

#include <bit>
#include <fstream>
#include <iterator>

namespace hg {
namespace {

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u32(static_cast<std::uint32_t>(s.size()));
        out_.insert(out_.end(), s.begin(), s.end());
    }
    void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

    std::size_t offset() const { return pos_; }
    [[noreturn]] void fail(const std::string& what) const { throw FormatError(what, pos_); }

    std::uint8_t u8() {
        need(1);
        return in_[pos_++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t{in_[pos_++]} << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t{in_[pos_++]} << (8 * i);
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    std::string raw(std::size_t n) {
        need(n);
        std::string s(in_.begin() + static_cast<std::ptrdiff_t>(pos_), in_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
        pos_ += n;
        return s;
    }
    /// Count prefix bounded by the bytes left, so a corrupt count cannot
    /// trigger a huge allocation.
    std::size_t count(std::size_t min_item_bytes) {
        const std::uint64_t n = u32();
        if (n * std::max<std::size_t>(min_item_bytes, 1) > in_.size() - pos_) fail("count exceeds remaining bytes");
        return static_cast<std::size_t>(n);
    }
    bool at_end() const { return pos_ == in_.size(); }

private:
    void need(std::size_t n) const {
        if (in_.size() - pos_ < n) throw FormatError("truncated model file", pos_);
    }
    const std::vector<std::uint8_t>& in_;
    std::size_t pos_ = 0;
};

void write_tree(Writer& w, const DecisionTree& t) {
    w.u32(static_cast<std::uint32_t>(t.nodes.size()));
    for (const auto& n : t.nodes) {
        w.i32(n.feature);
        w.f64(n.threshold);
        w.u32(n.left);
        w.u32(n.right);
        w.u32(n.leaf);
    }
    w.u32(static_cast<std::uint32_t>(t.leaves.size()));
    for (const auto& leaf : t.leaves)
        for (double p : leaf) w.f64(p);
}

DecisionTree read_tree(Reader& r) {
    DecisionTree t;
    t.nodes.resize(r.count(24));
    if (t.nodes.empty()) r.fail("tree without nodes");
    for (auto& n : t.nodes) {
        n.feature = r.i32();
        n.threshold = r.f64();
        n.left = r.u32();
        n.right = r.u32();
        n.leaf = r.u32();
    }
    t.leaves.resize(r.count(8 * kLabelCount));
    for (auto& leaf : t.leaves)
        for (double& p : leaf) p = r.f64();
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto& n = t.nodes[i];
        if (n.is_leaf()) {
            if (n.leaf >= t.leaves.size()) r.fail("leaf index out of range");
        } else if (static_cast<std::size_t>(n.feature) >= kInputDim || n.left <= i || n.right <= i ||
                   n.left >= t.nodes.size() || n.right >= t.nodes.size()) {
            r.fail("inconsistent tree node");
        }
    }
    return t;
}

void write_hyperparams(Writer& w, const Hyperparams& h) {
    w.u32(h.knn_k);
    w.u32(h.dt_max_depth);
    w.u32(h.dt_min_samples_split);
    w.u32(h.rf_trees);
    w.u32(h.rf_features_per_split);
    w.u32(static_cast<std::uint32_t>(h.ann_hidden.size()));
    for (auto v : h.ann_hidden) w.u32(v);
    w.f64(h.ann_learning_rate);
    w.f64(h.ann_momentum);
    w.u32(h.ann_epochs);
    w.u32(h.ann_batch);
}

Hyperparams read_hyperparams(Reader& r) {
    Hyperparams h;
    h.knn_k = r.u32();
    h.dt_max_depth = r.u32();
    h.dt_min_samples_split = r.u32();
    h.rf_trees = r.u32();
    h.rf_features_per_split = r.u32();
    h.ann_hidden.resize(r.count(4));
    for (auto& v : h.ann_hidden) v = r.u32();
    h.ann_learning_rate = r.f64();
    h.ann_momentum = r.f64();
    h.ann_epochs = r.u32();
    h.ann_batch = r.u32();
    try {
        h.validate();
    } catch (const ConfigError& e) {
        r.fail(std::string("invalid hyperparameters: ") + e.what());
    }
    return h;
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const Model& model) {
    Writer w;
    w.raw(kModelMagic);
    w.u32(model.schema_version);
    w.u8(static_cast<std::uint8_t>(model.algorithm));
    write_hyperparams(w, model.hyperparams);
    for (double m : model.standardizer.mean) w.f64(m);
    for (double s : model.standardizer.stddev) w.f64(s);
    w.u32(static_cast<std::uint32_t>(model.label_set.size()));
    for (auto l : model.label_set) w.str(name(l));

    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, KnnParams>) {
                w.u64(p.points.rows);
                w.u32(static_cast<std::uint32_t>(p.points.cols));
                for (double v : p.points.data) w.f64(v);
                for (auto l : p.labels) w.u8(l);
            } else if constexpr (std::is_same_v<T, TreeParamsPayload>) {
                write_tree(w, p.tree);
            } else if constexpr (std::is_same_v<T, ForestParams>) {
                w.u32(static_cast<std::uint32_t>(p.trees.size()));
                for (const auto& t : p.trees) write_tree(w, t);
            } else {
                w.u32(static_cast<std::uint32_t>(p.net.layers.size()));
                for (const auto& layer : p.net.layers) {
                    w.u32(static_cast<std::uint32_t>(layer.inputs));
                    w.u32(static_cast<std::uint32_t>(layer.outputs));
                    for (double v : layer.weights) w.f64(v);
                    for (double v : layer.bias) w.f64(v);
                }
            }
        },
        model.params);
    return w.take();
}

Model deserialize_model(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    if (bytes.size() < kModelMagic.size() || r.raw(kModelMagic.size()) != kModelMagic)
        throw FormatError("bad magic, not a model file", 0);
    Model m;
    m.schema_version = r.u32();
    if (m.schema_version != kModelSchemaVersion)
        r.fail("unsupported model schema version " + std::to_string(m.schema_version));
    const std::uint8_t algo = r.u8();
    if (algo > static_cast<std::uint8_t>(Algorithm::ANN)) r.fail("unknown algorithm tag");
    m.algorithm = static_cast<Algorithm>(algo);
    m.hyperparams = read_hyperparams(r);
    for (double& v : m.standardizer.mean) v = r.f64();
    for (double& v : m.standardizer.stddev) {
        v = r.f64();
        if (!(v > 0.0)) r.fail("non-positive standardizer sigma");
    }
    if (r.u32() != kLabelCount) r.fail("label set size mismatch");
    for (std::size_t c = 0; c < kLabelCount; ++c) {
        const auto label = parse_label(r.str());
        if (!label || *label != label_at(c)) r.fail("label set does not match the condition labels");
        m.label_set[c] = *label;
    }

    switch (m.algorithm) {
        case Algorithm::KNN: {
            KnnParams p;
            const std::uint64_t rows = r.u64();
            const std::uint32_t cols = r.u32();
            if (cols != kInputDim) r.fail("KNN payload has wrong width");
            if (rows == 0 || rows > (bytes.size() - r.offset()) / (8 * cols + 1)) r.fail("KNN row count out of range");
            p.points = Matrix(rows, cols);
            for (double& v : p.points.data) v = r.f64();
            p.labels.resize(rows);
            for (auto& l : p.labels) {
                l = r.u8();
                if (l >= kLabelCount) r.fail("KNN label out of range");
            }
            p.index = std::make_shared<const KdTree>(p.points);
            m.params = std::move(p);
            break;
        }
        case Algorithm::DT:
            m.params = TreeParamsPayload{read_tree(r)};
            break;
        case Algorithm::RF: {
            ForestParams p;
            p.trees.resize(r.count(8));
            if (p.trees.empty()) r.fail("forest without trees");
            for (auto& t : p.trees) t = read_tree(r);
            m.params = std::move(p);
            break;
        }
        case Algorithm::ANN: {
            MlpParams p;
            p.net.layers.resize(r.count(8));
            if (p.net.layers.empty()) r.fail("network without layers");
            std::size_t expected_in = kInputDim;
            for (auto& layer : p.net.layers) {
                layer.inputs = r.u32();
                layer.outputs = r.u32();
                if (layer.inputs != expected_in || layer.outputs == 0) r.fail("layer shapes do not chain");
                if (layer.inputs * layer.outputs > (bytes.size() - r.offset()) / 8) r.fail("layer larger than file");
                expected_in = layer.outputs;
                layer.weights.resize(layer.inputs * layer.outputs);
                for (double& v : layer.weights) v = r.f64();
                layer.bias.resize(layer.outputs);
                for (double& v : layer.bias) v = r.f64();
            }
            if (expected_in != kLabelCount) r.fail("output layer is not 15 wide");
            m.params = std::move(p);
            break;
        }
    }
    if (!r.at_end()) r.fail("trailing bytes after model payload");
    return m;
}

void save_model(const Model& model, const std::string& path) {
    const auto bytes = serialize_model(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write model file '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path + "'");
}

Model load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize_model(bytes);
}

}  // namespace hg
