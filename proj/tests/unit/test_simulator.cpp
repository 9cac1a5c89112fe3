#include "healthguard/errors.hpp"
#include "healthguard/rng.hpp"
#include "healthguard/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace hg;

namespace {

ScenarioConfig single(ConditionLabel c, std::uint32_t minutes, std::uint64_t seed = 1) {
    ScenarioConfig cfg;
    cfg.segments = {{c, minutes}};
    cfg.seed = seed;
    return cfg;
}

std::vector<double> values_of(const TelemetryStream& s, FeatureKind f) {
    std::vector<double> out;
    for (const auto& r : s.of(owner(f))) out.push_back(r.value(f));
    return out;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

}  // namespace

TEST(Simulator, ExerciseShiftsVitals) {
    const auto s = generate_benign(single(ConditionLabel::Exercise, 60));
    for (double v : values_of(s, FeatureKind::HeartRate)) EXPECT_GT(v, 100.0);
    EXPECT_LT(mean(values_of(s, FeatureKind::Glucose)), nominal_range(FeatureKind::Glucose).midpoint());
    EXPECT_LT(mean(values_of(s, FeatureKind::Spo2)), nominal_range(FeatureKind::Spo2).midpoint());
    EXPECT_GT(mean(values_of(s, FeatureKind::SweatRate)), nominal_range(FeatureKind::SweatRate).hi);
}

TEST(Simulator, ZeroNoisePinsUnaffectedFeatures) {
    auto cfg = single(ConditionLabel::Sleeping, 10);
    cfg.noise_scale = 0.0;
    const auto s = generate_benign(cfg);
    const auto& e = effect(ConditionLabel::Sleeping);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const FeatureKind f = feature_at(i);
        if (e.affects(f)) continue;
        for (double v : values_of(s, f)) EXPECT_EQ(v, nominal_range(f).midpoint()) << name(f);
    }
}

TEST(Simulator, NativeCadence) {
    const auto s = generate_benign(single(ConditionLabel::Walking, 10));
    for (DeviceKind d : kAllDevices) {
        const auto period = native_period_seconds(d);
        const auto& list = s.of(d);
        ASSERT_EQ(list.size(), (600 + period - 1) / period) << name(d);
        for (std::size_t i = 0; i < list.size(); ++i) EXPECT_EQ(list[i].t_seconds, i * period);
    }
    EXPECT_EQ(s.minutes(), 10u);
}

TEST(Simulator, DisabledDevicesEmitNothing) {
    auto cfg = single(ConditionLabel::Stress, 5);
    cfg.enabled_devices = DeviceMask::all().without(DeviceKind::NeuralHeadset);
    const auto s = generate_benign(cfg);
    EXPECT_TRUE(s.of(DeviceKind::NeuralHeadset).empty());
    EXPECT_FALSE(s.of(DeviceKind::HeartBpMonitor).empty());
}

TEST(Simulator, InvalidScenarios) {
    auto cfg = single(ConditionLabel::Stress, 5);
    cfg.enabled_devices = DeviceMask::none();
    EXPECT_THROW(generate_benign(cfg), ConfigError);
    EXPECT_THROW(generate_benign(single(ConditionLabel::DenialOfService, 5)), ConfigError);
    EXPECT_THROW(generate_benign(single(ConditionLabel::Stress, 0)), ConfigError);
}

TEST(Simulator, Deterministic) {
    const auto a = generate_benign(single(ConditionLabel::Drunk, 30, 42));
    const auto b = generate_benign(single(ConditionLabel::Drunk, 30, 42));
    const auto c = generate_benign(single(ConditionLabel::Drunk, 30, 43));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Simulator, ValuesStayInPhysicalBounds) {
    auto cfg = single(ConditionLabel::AbnormalOxygen, 30);
    cfg.noise_scale = 2.0;
    const auto s = generate_benign(cfg);
    for (DeviceKind d : kAllDevices)
        for (const auto& r : s.of(d))
            for (FeatureKind f : device_features(d)) {
                EXPECT_TRUE(physical_bounds(f).contains(r.value(f)));
                EXPECT_TRUE(std::isfinite(r.value(f)));
            }
}

// Affected features must sit outside the nominal range on average, so each
// condition differs from the healthy baseline somewhere.
TEST(Simulator, BenignSeparability) {
    for (std::size_t i = 0; i < kBenignCount; ++i) {
        const ConditionLabel c = label_at(i);
        const auto s = generate_benign(single(c, 100, 7 + i));
        bool outside = false;
        for (FeatureKind f : affected_features(c)) {
            const double m = mean(values_of(s, f));
            if (!nominal_range(f).contains(m)) outside = true;
        }
        EXPECT_TRUE(outside) << name(c);
    }
}

TEST(Poisson, ZeroRateIsEmpty) { EXPECT_TRUE(sample_attack_onsets(0.0, 1000, 3).empty()); }

TEST(Poisson, NegativeRateRejected) {
    EXPECT_THROW(sample_attack_onsets(-1.0, 10, 0), DomainError);
    EXPECT_THROW(sample_attack_onsets(NAN, 10, 0), DomainError);
}

TEST(Poisson, OnsetsSortedInsideHorizon) {
    const auto on = sample_attack_onsets(30.0, 500, 9);
    EXPECT_TRUE(std::is_sorted(on.begin(), on.end()));
    for (auto m : on) EXPECT_LT(m, 500u);
}

TEST(Poisson, MeanCount) {
    double total = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) total += sample_attack_onsets(2.0, 600, seed).size();
    EXPECT_NEAR(total / 1000.0, 20.0, 3.0 * std::sqrt(20.0 / 1000.0));
}

TEST(Poisson, ZeroCountProbability) {
    int zeros = 0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) zeros += sample_attack_onsets(60.0, 1, seed).empty();
    EXPECT_NEAR(zeros / 10000.0, std::exp(-1.0), 0.02);
}

TEST(Attacks, ZeroRateIsIdentity) {
    const auto benign = generate_benign(single(ConditionLabel::Walking, 60));
    AttackConfig ac;
    ac.rate_per_hour = 0.0;
    const auto out = inject_attacks(benign, ac);
    EXPECT_TRUE(out.events.empty());
    EXPECT_EQ(out.readings, benign.readings);
    EXPECT_EQ(out.ground_truth, benign.ground_truth);
}

TEST(Attacks, DenialOfServiceWindow) {
    const auto benign = generate_benign(single(ConditionLabel::Walking, 30));
    const AttackEvent dos{ConditionLabel::DenialOfService, DeviceKind::PulseOximeter, 10, 5};
    const auto out = apply_attacks(benign, {dos}, 0);
    for (const auto& r : out.of(DeviceKind::PulseOximeter)) EXPECT_TRUE(r.t_seconds < 600 || r.t_seconds >= 900);
    EXPECT_EQ(out.of(DeviceKind::PulseOximeter).size(), benign.of(DeviceKind::PulseOximeter).size() - 30);
    for (std::uint32_t m = 0; m < 30; ++m)
        EXPECT_EQ(out.ground_truth[m], m >= 10 && m < 15 ? ConditionLabel::DenialOfService : ConditionLabel::Walking);
    for (DeviceKind d : kAllDevices)
        if (d != DeviceKind::PulseOximeter) {
            EXPECT_EQ(out.of(d), benign.of(d));
        }
}

TEST(Attacks, TamperedWatchNeverSleeps) {
    const auto benign = generate_benign(single(ConditionLabel::Sleeping, 30));
    const AttackEvent t{ConditionLabel::TamperedDevice, DeviceKind::SleepMotionWatch, 5, 10};
    const auto out = apply_attacks(benign, {t}, 0);
    const auto& list = out.of(DeviceKind::SleepMotionWatch);
    const double frozen_motion = list[9].value(FeatureKind::MotionLevel);  // t = 270 s, last before onset
    for (const auto& r : list) {
        if (r.t_seconds < 300 || r.t_seconds >= 900) continue;
        EXPECT_EQ(r.value(FeatureKind::SleepState), 0.0);
        EXPECT_EQ(r.value(FeatureKind::MotionLevel), frozen_motion);
    }
}

TEST(Attacks, FalseDataKeepsTimestampsAndLooksHealthy) {
    const auto benign = generate_benign(single(ConditionLabel::Exercise, 30));
    const AttackEvent fdi{ConditionLabel::FalseDataInjection, DeviceKind::HeartBpMonitor, 0, 30};
    const auto out = apply_attacks(benign, {fdi}, 5);
    const auto& a = benign.of(DeviceKind::HeartBpMonitor);
    const auto& b = out.of(DeviceKind::HeartBpMonitor);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].t_seconds, b[i].t_seconds);
        for (FeatureKind f : device_features(DeviceKind::HeartBpMonitor)) {
            const auto r = nominal_range(f);
            EXPECT_GE(b[i].value(f), r.lo - 0.15 * r.width());
            EXPECT_LE(b[i].value(f), r.hi + 0.15 * r.width());
        }
    }
    // exercise pushes heart rate above 100; forged minutes hover around one level instead
    double forged = 0;
    for (const auto& r : b) forged += r.value(FeatureKind::HeartRate);
    EXPECT_LT(forged / b.size(), 100.0 + 0.15 * 40.0);
}

TEST(Attacks, EarliestOnsetWinsAndUnionCovered) {
    const auto benign = generate_benign(single(ConditionLabel::Stroke, 60));
    const std::vector<AttackEvent> events = {
        {ConditionLabel::FalseDataInjection, DeviceKind::InsulinPump, 5, 10},
        {ConditionLabel::DenialOfService, DeviceKind::AlcoholMonitor, 10, 10},
        {ConditionLabel::TamperedDevice, DeviceKind::SleepMotionWatch, 40, 5},
    };
    const auto out = apply_attacks(benign, events, 1);
    for (std::uint32_t m = 0; m < 60; ++m) {
        ConditionLabel want = ConditionLabel::Stroke;
        if (m >= 5 && m < 15) want = ConditionLabel::FalseDataInjection;
        else if (m >= 15 && m < 20) want = ConditionLabel::DenialOfService;
        else if (m >= 40 && m < 45) want = ConditionLabel::TamperedDevice;
        EXPECT_EQ(out.ground_truth[m], want) << m;
    }
    EXPECT_EQ(out.events, events);
}

TEST(Attacks, PlannedWindowsValid) {
    ScenarioConfig cfg;
    cfg.segments = {{ConditionLabel::Walking, 300}, {ConditionLabel::Stress, 300}};
    const auto benign = generate_benign(cfg);
    AttackConfig ac;
    ac.rate_per_hour = 6.0;
    ac.seed = 11;
    const auto out = inject_attacks(benign, ac);
    ASSERT_FALSE(out.events.empty());
    std::vector<bool> covered(out.minutes(), false);
    for (const auto& e : out.events) {
        EXPECT_TRUE(is_malicious(e.kind));
        EXPECT_LE(e.end_minute(), out.minutes());
        if (e.kind == ConditionLabel::TamperedDevice) {
            EXPECT_EQ(e.target, DeviceKind::SleepMotionWatch);
        }
        for (auto m = e.onset_minute; m < e.end_minute(); ++m) covered[m] = true;
    }
    for (std::size_t i = 0; i < out.events.size(); ++i)
        for (std::size_t j = i + 1; j < out.events.size(); ++j) {
            const auto& a = out.events[i];
            const auto& b = out.events[j];
            if (a.kind == b.kind && a.target == b.target) {
                EXPECT_TRUE(a.end_minute() <= b.onset_minute || b.end_minute() <= a.onset_minute);
            }
        }
    for (std::uint32_t m = 0; m < out.minutes(); ++m)
        EXPECT_EQ(is_malicious(out.ground_truth[m]), covered[m]) << m;
}

TEST(Attacks, EmptyThreatListRejected) {
    const auto benign = generate_benign(single(ConditionLabel::Walking, 60));
    AttackConfig ac;
    ac.rate_per_hour = 1.0;
    ac.enabled_threats.clear();
    EXPECT_THROW(inject_attacks(benign, ac), ConfigError);
}

// Monte-Carlo oracle for the expected share of attacked minutes.
TEST(Attacks, CoverageFormulaMatchesSimulation) {
    const double rate = 0.8;
    const std::uint32_t horizon = 200, dmin = 5, dmax = 30;
    Rng rng(123);
    std::exponential_distribution<double> gap(rate / 60.0);
    std::uniform_int_distribution<std::uint32_t> dur(dmin, dmax);
    const int trials = 20000;
    double covered = 0;
    for (int t = 0; t < trials; ++t) {
        std::vector<bool> hit(horizon, false);
        for (double x = gap(rng); x < horizon; x += gap(rng)) {
            const auto onset = static_cast<std::uint32_t>(x);
            const auto end = std::min(horizon, onset + dur(rng));
            for (auto m = onset; m < end; ++m) hit[m] = true;
        }
        covered += std::count(hit.begin(), hit.end(), true);
    }
    EXPECT_NEAR(covered / (trials * double(horizon)), expected_attack_coverage(rate, horizon, dmin, dmax), 0.003);
}

TEST(Attacks, RateForFractionInvertsCoverage) {
    const double rate = rate_for_attack_fraction(0.15, 200, 5, 30);
    EXPECT_NEAR(expected_attack_coverage(rate, 200, 5, 30), 0.15, 1e-9);
    EXPECT_GT(rate, 0.0);
}
