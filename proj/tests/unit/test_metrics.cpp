#include "healthguard/errors.hpp"
#include "healthguard/metrics.hpp"
#include "../support/oracles.hpp"

#include <gtest/gtest.h>

using namespace hg;

namespace {

constexpr auto Fdi = ConditionLabel::FalseDataInjection;
constexpr auto Walk = ConditionLabel::Walking;

// TP=4 FP=1 FN=2 TN=3 with false data injection as the positive class
void binary_toy(std::vector<ConditionLabel>& pred, std::vector<ConditionLabel>& truth) {
    truth = {Fdi, Fdi, Fdi, Fdi, Walk, Fdi, Fdi, Walk, Walk, Walk};
    pred = {Fdi, Fdi, Fdi, Fdi, Fdi, Walk, Walk, Walk, Walk, Walk};
}

}  // namespace

TEST(Confusion, CountsAndContracts) {
    std::vector<ConditionLabel> p, t;
    binary_toy(p, t);
    const auto cm = confusion(p, t);
    EXPECT_EQ(cm(Fdi, Fdi), 4u);
    EXPECT_EQ(cm(Walk, Fdi), 1u);
    EXPECT_EQ(cm(Fdi, Walk), 2u);
    EXPECT_EQ(cm(Walk, Walk), 3u);
    EXPECT_EQ(cm.total(), 10u);
    EXPECT_THROW(confusion(std::span(p).first(3), t), ContractError);
    EXPECT_THROW(confusion({}, {}), ContractError);

    const auto diag = confusion(t, t);
    for (std::size_t r = 0; r < kLabelCount; ++r)
        for (std::size_t c = 0; c < kLabelCount; ++c)
            if (r != c) {
                EXPECT_EQ(diag.counts[r][c], 0u);
            }
}

TEST(Metrics, BinaryToyHandComputed) {
    std::vector<ConditionLabel> p, t;
    binary_toy(p, t);
    const auto cm = confusion(p, t);
    const auto rep = metrics(cm, View::All);
    EXPECT_DOUBLE_EQ(rep.accuracy, 0.7);
    const auto& fdi = *std::find_if(rep.per_class.begin(), rep.per_class.end(),
                                    [](const ClassMetrics& m) { return m.label == Fdi; });
    EXPECT_DOUBLE_EQ(fdi.precision, 0.8);
    EXPECT_NEAR(fdi.recall, 0.6667, 1e-4);
    EXPECT_NEAR(fdi.f1, 0.7273, 1e-4);

    const auto b = binary_metrics(cm);
    EXPECT_DOUBLE_EQ(b.accuracy, 0.7);
    EXPECT_DOUBLE_EQ(b.precision, 0.8);
    EXPECT_NEAR(b.recall, 4.0 / 6.0, 1e-15);
    EXPECT_NEAR(b.f1, 8.0 / 11.0, 1e-15);
}

TEST(Metrics, PerfectAndHopeless) {
    const std::vector<ConditionLabel> t = {Walk, Fdi, ConditionLabel::Stroke};
    const auto perfect = metrics(confusion(t, t), View::All);
    EXPECT_EQ(perfect.accuracy, 1.0);
    EXPECT_EQ(perfect.macro_precision, 1.0);
    EXPECT_EQ(perfect.macro_recall, 1.0);
    EXPECT_EQ(perfect.macro_f1, 1.0);
    const std::vector<ConditionLabel> wrong = {Fdi, ConditionLabel::Stroke, Walk};
    const auto bad = metrics(confusion(wrong, t), View::All);
    EXPECT_EQ(bad.accuracy, 0.0);
    EXPECT_EQ(bad.macro_f1, 0.0);
}

TEST(Metrics, EmptyViewRejected) {
    const std::vector<ConditionLabel> t = {Walk, Walk};
    EXPECT_THROW(metrics(confusion(t, t), View::MaliciousOnly), DomainError);
}

TEST(Metrics, MatchesBruteForce) {
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<std::size_t> len(1, 200);
        std::uniform_int_distribution<std::size_t> max_label(1, kLabelCount - 1);
        const std::size_t n = len(rng);
        std::uniform_int_distribution<std::size_t> lab(0, max_label(rng));
        std::vector<ConditionLabel> p(n), t(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = label_at(lab(rng));
            p[i] = label_at(lab(rng));
        }
        const auto cm = confusion(p, t);
        for (View v : {View::All, View::BenignOnly, View::MaliciousOnly}) {
            const bool any = std::any_of(t.begin(), t.end(), [&](auto c) { return oracle::in_view(c, v); });
            if (!any) {
                EXPECT_THROW(metrics(cm, v), DomainError);
                continue;
            }
            const auto got = metrics(cm, v);
            const auto want = oracle::brute_force_metrics(p, t, v);
            EXPECT_NEAR(got.accuracy, want.accuracy, 1e-12);
            EXPECT_NEAR(got.macro_precision, want.precision, 1e-12);
            EXPECT_NEAR(got.macro_recall, want.recall, 1e-12);
            EXPECT_NEAR(got.macro_f1, want.f1, 1e-12);
        }
    }
}

TEST(Metrics, ViewsPartitionAndF1Bounds) {
    Rng rng(7);
    std::uniform_int_distribution<std::size_t> lab(0, kLabelCount - 1);
    std::vector<ConditionLabel> p(500), t(500);
    for (std::size_t i = 0; i < 500; ++i) {
        t[i] = label_at(lab(rng));
        p[i] = lab(rng) < 10 ? t[i] : label_at(lab(rng));
    }
    const auto cm = confusion(p, t);
    const auto all = metrics(cm, View::All);
    const auto ben = metrics(cm, View::BenignOnly);
    const auto mal = metrics(cm, View::MaliciousOnly);
    EXPECT_EQ(ben.instances + mal.instances, all.instances);
    for (const auto* rep : {&all, &ben, &mal}) {
        double lo = 1, hi = 0;
        for (const auto& m : rep->per_class) {
            lo = std::min(lo, m.f1);
            hi = std::max(hi, m.f1);
            EXPECT_GE(m.precision, 0.0);
            EXPECT_LE(m.precision, 1.0);
        }
        EXPECT_GE(rep->macro_f1, lo - 1e-15);
        EXPECT_LE(rep->macro_f1, hi + 1e-15);
    }
}
