#include "healthguard/dataset.hpp"
#include "healthguard/model.hpp"
#include "healthguard/model_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hg_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    CliRun run(const std::string& args) const {
        const auto out = path("stdout.txt");
        const std::string cmd = std::string(HG_CLI_PATH) + " " + args + " > " + out + " 2> " + path("stderr.txt");
        const int status = std::system(cmd.c_str());
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
    }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void small_config() const {
        std::ofstream(path("small.cfg")) << "instances = 1500\n";
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, MissingConfigIsUsageError) {
    const auto r = run("--config " + path("nope.cfg") + " generate -o " + path("d.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(fs::exists(path("d.csv")));
}

TEST_F(Cli, BadArgumentsAreUsageErrors) {
    small_config();
    ASSERT_EQ(run("--config " + path("small.cfg") + " generate -o " + path("d.csv")).code, 0);
    EXPECT_EQ(run("train -d " + path("d.csv") + " -a xyz -o " + path("m.bin")).code, 2);
    EXPECT_FALSE(fs::exists(path("m.bin")));
    EXPECT_EQ(run("evaluate -e nonsense --out-dir " + path("ev")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("train -d " + path("d.csv")).code, 2);
}

TEST_F(Cli, UnreadableFileIsIoError) {
    EXPECT_EQ(run("train -d " + path("missing.csv") + " -a dt -o " + path("m.bin")).code, 3);
    EXPECT_EQ(run("detect -m " + path("missing.bin") + " -d " + path("missing.csv")).code, 3);
}

TEST_F(Cli, GenerateIsDeterministic) {
    small_config();
    ASSERT_EQ(run("--seed 7 --config " + path("small.cfg") + " generate -o " + path("a.csv")).code, 0);
    ASSERT_EQ(run("--seed 7 --config " + path("small.cfg") + " generate -o " + path("b.csv")).code, 0);
    ASSERT_EQ(run("--seed 8 --config " + path("small.cfg") + " generate -o " + path("c.csv")).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}

TEST_F(Cli, EmptyDatasetDetectsNothing) {
    small_config();
    ASSERT_EQ(run("--config " + path("small.cfg") + " generate -o " + path("d.csv")).code, 0);
    ASSERT_EQ(run("train -d " + path("d.csv") + " -a dt -o " + path("m.bin")).code, 0);
    std::ofstream(path("empty.csv")) << hg::dataset_header() << '\n';
    const auto r = run("detect -m " + path("m.bin") + " -d " + path("empty.csv"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("instances=0 alerts=0"), std::string::npos) << r.out;
}

TEST_F(Cli, AlertCountMatchesOfflinePredictions) {
    small_config();
    ASSERT_EQ(run("--seed 3 --config " + path("small.cfg") + " generate -o " + path("d.csv")).code, 0);
    ASSERT_EQ(run("train -d " + path("d.csv") + " -a dt -o " + path("m.bin")).code, 0);
    const auto r = run("--quiet detect -m " + path("m.bin") + " -d " + path("d.csv") + " -o " + path("alerts.txt"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());

    const auto model = hg::load_model(path("m.bin"));
    const auto ds = hg::load_dataset(path("d.csv"));
    std::size_t malicious = 0;
    for (const auto& p : hg::predict_batch(model, ds.instances))
        if (hg::is_malicious(p.label)) ++malicious;
    const auto alerts = slurp(path("alerts.txt"));
    EXPECT_EQ(static_cast<std::size_t>(std::count(alerts.begin(), alerts.end(), '\n')), malicious);
}

TEST_F(Cli, EvaluateWritesReports) {
    small_config();
    const auto r = run("--config " + path("small.cfg") +
                       " evaluate -e detection --algos dt,knn --seeds 0 --out-dir " + path("ev"));
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(fs::exists(path("ev/detection.txt")));
    EXPECT_TRUE(fs::exists(path("ev/detection.csv")));
    EXPECT_EQ(slurp(path("ev/detection.txt")), r.out);
}

TEST_F(Cli, LiteralSplitRunsAndUnknownSplitFails) {
    small_config();
    const auto base = "--config " + path("small.cfg") + " evaluate -e detection --algos dt --seeds 0 --out-dir " +
                      path("ev");
    EXPECT_EQ(run(base + " --split literal").code, 0);
    EXPECT_NE(slurp(path("ev/detection.csv")).find(",Malicious,"), std::string::npos);
    EXPECT_EQ(run(base + " --split random").code, 2);
}

TEST_F(Cli, ConfigSeedUnlessOverridden) {
    std::ofstream(path("seeded.cfg")) << "instances = 800\nseed = 9\n";
    std::ofstream(path("plain.cfg")) << "instances = 800\n";
    ASSERT_EQ(run("--config " + path("seeded.cfg") + " generate -o " + path("a.csv")).code, 0);
    ASSERT_EQ(run("--seed 9 --config " + path("plain.cfg") + " generate -o " + path("b.csv")).code, 0);
    ASSERT_EQ(run("--seed 1 --config " + path("seeded.cfg") + " generate -o " + path("c.csv")).code, 0);
    EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
    EXPECT_NE(slurp(path("a.csv")), slurp(path("c.csv")));
}
