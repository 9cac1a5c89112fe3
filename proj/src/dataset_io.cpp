#include "healthguard/dataset.hpp"

#include "healthguard/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace hg {

std::string dataset_header() {
    std::string h = "minute";
    for (std::size_t f = 0; f < kFeatureCount; ++f) (h += ',') += name(feature_at(f));
    for (DeviceKind d : kAllDevices) (h += ",avail_") += name(d);
    h += ",label";
    return h;
}

void write_dataset(std::ostream& out, const LabeledDataset& dataset) {
    out << dataset_header() << '\n';
    char buf[64];
    std::string line;
    for (const auto& inst : dataset.instances) {
        line = std::to_string(inst.vector.minute);
        for (double v : inst.vector.values) {
            std::snprintf(buf, sizeof buf, ",%.6f", v);
            line += buf;
        }
        for (auto a : inst.vector.availability) line += a ? ",1" : ",0";
        (line += ',') += name(inst.label);
        out << line << '\n';
    }
}

void save_dataset(const std::string& path, const LabeledDataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dataset file '" + path + "'");
    write_dataset(out, dataset);
    if (!out) throw IoError("write failed for '" + path + "'");
}

LabeledDataset read_dataset(std::istream& in) {
    LabeledDataset ds;
    std::string raw;
    if (!std::getline(in, raw)) return ds;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (raw != dataset_header()) throw FormatError("dataset header does not match schema", 1);

    std::size_t line = 1;
    while (std::getline(in, raw)) {
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        std::string_view rest = raw;
        std::size_t field = 0;
        auto next = [&]() -> std::string_view {
            const auto p = rest.find(',');
            const auto tok = rest.substr(0, p);
            rest = p == std::string_view::npos ? std::string_view{} : rest.substr(p + 1);
            ++field;
            return tok;
        };
        auto bad = [&](const char* what) { return FormatError(std::string(what) + " in field " + std::to_string(field), line); };

        LabeledInstance inst;
        auto tok = next();
        if (std::from_chars(tok.data(), tok.data() + tok.size(), inst.vector.minute).ptr != tok.data() + tok.size() ||
            tok.empty())
            throw bad("invalid minute");
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            tok = next();
            double v = 0.0;
            const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (tok.empty() || r.ec != std::errc{} || r.ptr != tok.data() + tok.size() || !std::isfinite(v))
                throw bad("invalid feature value");
            inst.vector.values[f] = v;
        }
        for (std::size_t d = 0; d < kDeviceCount; ++d) {
            tok = next();
            if (tok != "0" && tok != "1") throw bad("availability must be 0 or 1");
            inst.vector.availability[d] = tok == "1";
        }
        tok = next();
        const auto label = parse_label(tok);
        if (!label) throw bad("unknown label");
        if (!rest.empty()) throw bad("trailing fields");
        inst.label = *label;
        ds.instances.push_back(inst);
    }
    return ds;
}

LabeledDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset file '" + path + "'");
    return read_dataset(in);
}

}  // namespace hg
