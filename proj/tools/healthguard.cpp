// healthguard: generate datasets, train detectors, raise alerts, reproduce
// the evaluation tables.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 I/O error.

#include "healthguard/dataset.hpp"
#include "healthguard/detect.hpp"
#include "healthguard/errors.hpp"
#include "healthguard/experiments.hpp"
#include "healthguard/model_io.hpp"
#include "healthguard/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;
constexpr int kIo = 3;

struct Globals {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::optional<std::string> config;
    bool quiet = false;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& s, const char* what) {
    std::vector<T> out;
    for (const auto& item : split_list(s)) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(static_cast<T>(v));
        } catch (const std::logic_error&) {
            throw hg::ConfigError(std::string("bad ") + what + " '" + item + "'");
        }
    }
    if (out.empty()) throw hg::ConfigError(std::string("empty ") + what + " list");
    return out;
}

std::string valid_algorithms() {
    std::string s;
    for (auto a : hg::kAllAlgorithms) s += (s.empty() ? "" : ", ") + std::string(hg::name(a));
    return s;
}

std::vector<hg::Algorithm> parse_algorithms(const std::string& s) {
    std::vector<hg::Algorithm> out;
    for (const auto& item : split_list(s)) {
        const auto a = hg::parse_algorithm(item);
        if (!a) throw hg::ConfigError("unknown algorithm '" + item + "' (valid: " + valid_algorithms() + ")");
        out.push_back(*a);
    }
    if (out.empty()) throw hg::ConfigError("no algorithm given");
    return out;
}

hg::Hyperparams parse_overrides(const std::vector<std::string>& sets) {
    hg::Hyperparams hp;
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw hg::ConfigError("expected key=value, got '" + kv + "'");
        hp.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    hp.validate();
    return hp;
}

hg::DatasetRecipe recipe_for(const Globals& g) {
    hg::DatasetRecipe r = g.config ? hg::load_recipe(*g.config) : hg::DatasetRecipe{};
    // an explicit --seed wins over the config file's seed
    if (g.seed_given || !g.config) r.seed = g.seed;
    r.validate();
    return r;
}

void print_counts(const hg::LabeledDataset& ds) {
    const auto counts = ds.label_counts();
    std::size_t benign = 0;
    for (std::size_t i = 0; i < hg::kLabelCount; ++i) {
        const auto label = hg::label_at(i);
        std::printf("%-22s %zu\n", std::string(hg::name(label)).c_str(), counts[i]);
        if (hg::is_benign(label)) benign += counts[i];
    }
    std::printf("total %zu (benign %zu, malicious %zu)\n", ds.size(), benign, ds.size() - benign);
}

int cmd_generate(const Globals& g, const std::string& out_path) {
    const auto recipe = recipe_for(g);
    const auto ds = hg::build_dataset(recipe);
    hg::save_dataset(out_path, ds);
    if (!g.quiet) print_counts(ds);
    return kOk;
}

int cmd_train(const Globals& g, const std::string& data_path, const std::string& algo, const std::string& out_path,
              const std::vector<std::string>& sets) {
    const auto algorithm = hg::parse_algorithm(algo);
    if (!algorithm) throw hg::ConfigError("unknown algorithm '" + algo + "' (valid: " + valid_algorithms() + ")");
    const auto hp = parse_overrides(sets);
    const auto ds = hg::load_dataset(data_path);

    const auto t0 = std::chrono::steady_clock::now();
    const auto model = hg::train(*algorithm, ds, hp, g.seed);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    hg::save_model(model, out_path);
    if (!g.quiet) {
        std::printf("algorithm %s\n", std::string(hg::name(*algorithm)).c_str());
        std::printf("training time %.3f s\n", seconds);
        std::printf("training accuracy %.4f\n", hg::accuracy_on(model, ds.instances));
    }
    return kOk;
}

int cmd_detect(const Globals& g, const std::string& model_path, const std::string& data_path,
               const std::optional<std::string>& alert_path) {
    const auto model = hg::load_model(model_path);
    const auto ds = hg::load_dataset(data_path);
    std::vector<hg::FeatureVector> vectors;
    vectors.reserve(ds.size());
    for (const auto& inst : ds.instances) vectors.push_back(inst.vector);
    const auto alerts = hg::detect(model, vectors);

    std::ofstream file;
    if (alert_path) {
        file.open(*alert_path, std::ios::binary);
        if (!file) throw hg::IoError("cannot write alert file '" + *alert_path + "'");
    }
    std::ostream& out = alert_path ? static_cast<std::ostream&>(file) : std::cout;
    for (const auto& a : alerts) out << hg::format_alert(a) << '\n';
    out.flush();
    if (!out) throw hg::IoError("failed writing alerts");
    if (!g.quiet || !alert_path)
        std::cout << hg::format_summary(hg::summarize_alerts(vectors.size(), alerts)) << '\n';
    return kOk;
}

struct EvaluateArgs {
    std::string experiment = "detection";
    std::string split = "stratified";
    std::optional<std::string> data;
    std::string algos = "knn,dt,rf,ann";
    std::string seeds = "0,1,2,3,4";
    std::string devices = "4,5,6,7,8";
    std::string kinds = "1,2,3";
    std::uint32_t streams = 30;
    bool no_control = false;
    std::string out_dir = ".";
    std::vector<std::string> sets;
};

int cmd_evaluate(const Globals& g, const EvaluateArgs& a) {
    const auto algorithms = parse_algorithms(a.algos);
    const auto hp = parse_overrides(a.sets);
    const auto seeds = parse_numbers<std::uint64_t>(a.seeds, "seed");

    std::vector<hg::ExperimentResult> results;
    if (a.split != "stratified" && a.split != "literal")
        throw hg::ConfigError("unknown split '" + a.split + "' (valid: stratified, literal)");
    if (a.experiment == "detection") {
        const auto mode = a.split == "literal" ? hg::SplitMode::Literal : hg::SplitMode::Stratified;
        const auto ds = a.data ? hg::load_dataset(*a.data) : hg::build_dataset(recipe_for(g));
        for (auto seed : seeds) results.push_back(hg::run_detection_experiment(ds, algorithms, hp, seed, 0.7, mode));
    } else if (a.experiment == "ablation") {
        hg::AblationOptions opt;
        opt.device_counts = parse_numbers<std::uint32_t>(a.devices, "device count");
        opt.seeds = seeds;
        results = hg::run_device_ablation(recipe_for(g), algorithms, hp, opt);
    } else if (a.experiment == "simultaneous") {
        hg::SimultaneousOptions opt;
        opt.concurrent_kinds = parse_numbers<std::uint32_t>(a.kinds, "kind count");
        opt.seeds = seeds;
        opt.test_streams = a.streams;
        opt.include_control = !a.no_control;
        results = hg::run_simultaneous_attacks(recipe_for(g), algorithms, hp, opt);
    } else {
        throw hg::ConfigError("unknown experiment '" + a.experiment + "' (valid: detection, ablation, simultaneous)");
    }

    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) throw hg::IoError("cannot create output directory '" + a.out_dir + "': " + ec.message());
    const auto base = std::filesystem::path(a.out_dir) / a.experiment;
    hg::render_report(results, base.string() + ".txt", base.string() + ".csv");
    if (!g.quiet) std::cout << hg::render_text(results);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    hg::configure_threads_from_env();

    CLI::App app{"Intrusion detection for networked medical devices"};
    app.require_subcommand(1);
    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--config", g.config, "Dataset recipe file (key = value lines)");
    app.add_flag("--quiet", g.quiet, "Suppress informational output");

    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Generate a labeled dataset");
    gen->add_option("-o,--out", gen_out, "Output CSV")->required();

    std::string train_data, train_algo, train_out;
    std::vector<std::string> train_sets;
    auto* tr = app.add_subcommand("train", "Train a detector");
    tr->add_option("-d,--data", train_data, "Dataset CSV")->required();
    tr->add_option("-a,--algo", train_algo, "knn, dt, rf or ann")->required();
    tr->add_option("-o,--out", train_out, "Model file")->required();
    tr->add_option("--set", train_sets, "Hyperparameter override key=value");

    std::string det_model, det_data;
    std::optional<std::string> det_out;
    auto* det = app.add_subcommand("detect", "Raise alerts for malicious minutes");
    det->add_option("-m,--model", det_model, "Model file")->required();
    det->add_option("-d,--data", det_data, "Dataset CSV")->required();
    det->add_option("-o,--out", det_out, "Alert file (stdout when omitted)");

    EvaluateArgs ev;
    auto* eval = app.add_subcommand("evaluate", "Run an experiment and write report files");
    eval->add_option("-e,--experiment", ev.experiment, "detection, ablation or simultaneous")->capture_default_str();
    eval->add_option("-d,--data", ev.data, "Dataset CSV for the detection experiment");
    eval->add_option("--split", ev.split, "stratified, or literal (train on benign minutes only)")
        ->capture_default_str();
    eval->add_option("--algos", ev.algos, "Comma list of algorithms")->capture_default_str();
    eval->add_option("--seeds", ev.seeds, "Comma list of seeds")->capture_default_str();
    eval->add_option("--devices", ev.devices, "Device counts for the ablation")->capture_default_str();
    eval->add_option("--kinds", ev.kinds, "Concurrent attack kinds")->capture_default_str();
    eval->add_option("--streams", ev.streams, "Test streams per kind count")->capture_default_str();
    eval->add_flag("--no-control", ev.no_control, "Skip the attack-free control streams");
    eval->add_option("--out-dir", ev.out_dir, "Report directory")->capture_default_str();
    eval->add_option("--set", ev.sets, "Hyperparameter override key=value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    g.seed_given = seed_opt->count() > 0;
    try {
        if (*gen) return cmd_generate(g, gen_out);
        if (*tr) return cmd_train(g, train_data, train_algo, train_out, train_sets);
        if (*det) return cmd_detect(g, det_model, det_data, det_out);
        if (*eval) return cmd_evaluate(g, ev);
    } catch (const hg::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
