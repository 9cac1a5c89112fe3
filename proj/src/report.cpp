#include "healthguard/experiments.hpp"

#include "healthguard/errors.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace hg {
namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.insert(0, w - s.size(), ' ');
    return s;
}

std::string left(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

using Cells = std::map<CellKey, CellSummary>;

const CellSummary* find(const Cells& cells, const std::string& exp, std::uint32_t devices, std::uint32_t kinds,
                        Algorithm a, const std::string& view) {
    const auto it = cells.find(CellKey{exp, devices, kinds, a, view});
    return it == cells.end() ? nullptr : &it->second;
}

std::vector<Algorithm> algorithms_in(std::span<const ExperimentResult> results, const std::string& exp) {
    std::set<Algorithm> s;
    for (const auto& r : results)
        if (r.experiment == exp)
            for (const auto& a : r.algorithms) s.insert(a.algorithm);
    return {s.begin(), s.end()};
}

std::size_t seeds_in(std::span<const ExperimentResult> results, const std::string& exp) {
    std::set<std::uint64_t> s;
    for (const auto& r : results)
        if (r.experiment == exp) s.insert(r.seed);
    return s.size();
}

void detection_table(std::string& out, std::span<const ExperimentResult> results, const Cells& cells) {
    const auto algos = algorithms_in(results, "detection");
    if (algos.empty()) return;
    std::uint32_t devices = kDeviceCount;
    for (const auto& r : results)
        if (r.experiment == "detection") devices = r.device_count;

    out += "Detection of benign and malicious events (" + std::to_string(devices) + " devices, mean over " +
           std::to_string(seeds_in(results, "detection")) + " seed(s))\n";
    const std::size_t block = algos.size() * 8;
    out += left("", 10) + " | " + left("Benign", block) + " | " + left("Malicious", block) + "\n";
    std::string head = left("Metric", 10) + " | ";
    for (int v = 0; v < 2; ++v) {
        for (Algorithm a : algos) head += pad(std::string(name(a)), 7) + ' ';
        if (v == 0) head += "| ";
    }
    out += head + "\n";
    const char* metric_names[] = {"Accuracy", "Precision", "Recall", "F1-score"};
    for (int m = 0; m < 4; ++m) {
        std::string line = left(metric_names[m], 10) + " | ";
        for (const char* view : {"Benign", "Malicious"}) {
            for (Algorithm a : algos) {
                const CellSummary* c = find(cells, "detection", devices, 0, a, view);
                const Summary* s = !c ? nullptr : m == 0 ? &c->accuracy : m == 1 ? &c->precision : m == 2 ? &c->recall : &c->f1;
                line += pad(s ? fmt("%.3f", s->mean) : "-", 7) + ' ';
            }
            if (std::string(view) == "Benign") line += "| ";
        }
        out += line + "\n";
    }
    out += "\n";
}

void ablation_table(std::string& out, std::span<const ExperimentResult> results, const Cells& cells) {
    const auto algos = algorithms_in(results, "ablation");
    if (algos.empty()) return;
    std::set<std::uint32_t> counts;
    for (const auto& r : results)
        if (r.experiment == "ablation") counts.insert(r.device_count);

    out += "Performance by number of connected devices (All view, mean over " +
           std::to_string(seeds_in(results, "ablation")) + " seed(s))\n";
    std::string h1 = left("Devices", 9) + " |";
    std::string h2 = left("Algorithm", 9) + " |";
    for (auto c : counts) {
        h1 += left(" " + std::to_string(c), 28) + "|";
        h2 += "  Acc  Prec   Rec    F1    |";
    }
    out += h1 + "\n" + h2 + "\n";
    for (Algorithm a : algos) {
        std::string line = left(std::string(name(a)), 9) + " |";
        for (auto c : counts) {
            const CellSummary* s = find(cells, "ablation", c, 0, a, "All");
            std::string cell;
            for (const Summary* m : {&s->accuracy, &s->precision, &s->recall, &s->f1}) cell += " " + fmt("%.3f", m->mean);
            line += left(cell, 28) + "|";
        }
        out += line + "\n";
    }
    out += "Accuracy standard error\n";
    for (Algorithm a : algos) {
        std::string line = left(std::string(name(a)), 9) + " |";
        for (auto c : counts) {
            const CellSummary* s = find(cells, "ablation", c, 0, a, "All");
            line += left(" " + fmt("%.4f", s->accuracy.se), 28) + "|";
        }
        out += line + "\n";
    }
    out += "\n";
}

void simultaneous_table(std::string& out, std::span<const ExperimentResult> results, const Cells& cells) {
    const auto algos = algorithms_in(results, "simultaneous");
    if (algos.empty()) return;
    std::set<std::uint32_t> kinds;
    std::uint32_t devices = kDeviceCount;
    for (const auto& r : results)
        if (r.experiment == "simultaneous") {
            kinds.insert(r.attack_kinds);
            devices = r.device_count;
        }
    out += "Accuracy under simultaneous attacks (mean +- standard error over " +
           std::to_string(seeds_in(results, "simultaneous")) + " seed(s))\n";
    for (const char* view : {"Binary", "All"}) {
        out += std::string(view) == "Binary" ? "Benign/malicious detection accuracy\n" : "15-class accuracy\n";
        std::string head = left("Algorithm", 9) + " |";
        for (auto k : kinds) head += pad(std::to_string(k) + (k == 1 ? " attack" : " attacks"), 17) + " |";
        out += head + "\n";
        for (Algorithm a : algos) {
            std::string line = left(std::string(name(a)), 9) + " |";
            for (auto k : kinds) {
                const CellSummary* s = find(cells, "simultaneous", devices, k, a, view);
                line += pad(fmt("%.4f", s->accuracy.mean) + " +- " + fmt("%.4f", s->accuracy.se), 17) + " |";
            }
            out += line + "\n";
        }
    }
    out += "\n";
}

void csv_row(std::string& out, const std::string& exp, Algorithm a, std::uint32_t devices, std::uint32_t kinds,
             const std::string& seed, const std::string& view, double acc, double p, double r, double f) {
    out += exp + ',' + std::string(name(a)) + ',' + std::to_string(devices) + ',' + std::to_string(kinds) + ',' + seed +
           ',' + view + ',' + fmt("%.6f", acc) + ',' + fmt("%.6f", p) + ',' + fmt("%.6f", r) + ',' + fmt("%.6f", f) +
           '\n';
}

}  // namespace

std::string render_text(std::span<const ExperimentResult> results) {
    const auto cells = aggregate(results);
    std::string out;
    detection_table(out, results, cells);
    ablation_table(out, results, cells);
    simultaneous_table(out, results, cells);
    return out;
}

std::string render_csv(std::span<const ExperimentResult> results) {
    std::string out = "experiment,algorithm,device_count,attack_kinds,seed,view,accuracy,precision,recall,f1\n";
    for (const auto& res : results) {
        for (const auto& ar : res.algorithms) {
            const std::string seed = std::to_string(res.seed);
            for (const auto* rep : {&ar.all, &ar.benign, &ar.malicious})
                if (*rep)
                    csv_row(out, res.experiment, ar.algorithm, res.device_count, res.attack_kinds, seed,
                            std::string(name((*rep)->view)), (*rep)->accuracy, (*rep)->macro_precision,
                            (*rep)->macro_recall, (*rep)->macro_f1);
            csv_row(out, res.experiment, ar.algorithm, res.device_count, res.attack_kinds, seed, "Binary",
                    ar.binary.accuracy, ar.binary.precision, ar.binary.recall, ar.binary.f1);
        }
    }
    for (const auto& [key, s] : aggregate(results)) {
        const auto& [exp, devices, kinds, algo, view] = key;
        csv_row(out, exp, algo, devices, kinds, "mean", view, s.accuracy.mean, s.precision.mean, s.recall.mean, s.f1.mean);
    }
    return out;
}

void render_report(std::span<const ExperimentResult> results, const std::string& text_path,
                   const std::string& csv_path) {
    if (results.empty()) throw ContractError("no results to render");
    auto write = [](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write report file '" + path + "'");
        out << body;
        if (!out) throw IoError("write failed for '" + path + "'");
    };
    write(text_path, render_text(results));
    write(csv_path, render_csv(results));
}

}  // namespace hg
