#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "vrvi/bellman.hpp"
#include "vrvi/solvers.hpp"

namespace vrvi {
namespace {

using testing::random_dmdp;
using testing::single_state;

SolveConfig config(double eps, SamplingMode mode = SamplingMode::multinomial) {
    SolveConfig c;
    c.epsilon = eps;
    c.delta = 0.1;
    c.run.seed = 17;
    c.run.sampling = mode;
    return c;
}

RunOptions seeded(std::uint64_t seed) {
    RunOptions o;
    o.seed = seed;
    return o;
}

TEST(Schedule, Counts) {
    EXPECT_EQ(phase_count(1.0, 0.01, 0.9), 10U);
    EXPECT_EQ(rounds_per_phase(0.9), 37U);
    EXPECT_EQ(phase_count(1.0, 100.0, 0.9), 1U);
    EXPECT_GE(naive_rounds(1.0, 0.01, 0.9), rounds_per_phase(0.9));
    EXPECT_GE(policy_extraction_rounds(0.9, 0.01, 10.0), 1U);
}

TEST(Schedule, ErrorBoundDecaysWithRounds) {
    const double a = randomized_vi_error_bound(0.9, 0.01, 10, 10.0);
    const double b = randomized_vi_error_bound(0.9, 0.01, 100, 10.0);
    EXPECT_GT(a, b);
    EXPECT_NEAR(randomized_vi_error_bound(0.9, 0.01, 100000, 10.0), 2.0 * 0.01 * 0.9 / 0.1, 1e-12);
}

TEST(RandomizedVi, SingleStateConverges) {
    const Dmdp d = single_state({1.0}, 0.5);
    const auto r = randomized_vi(d, ValueVector{0.0}, 40, 0.01, 0.1);
    EXPECT_NEAR(r.values[0], 2.0, 0.02);
    EXPECT_EQ(r.iterations, 40U);
    EXPECT_EQ(r.algorithm, "randomized-vi");
}

TEST(RandomizedVi, StartingAtOptimumStaysClose) {
    const Dmdp d = random_dmdp(8, 3, 0.9, 41);
    const auto opt = optimal_oracle(d, 1e-12);
    const double eps = 0.01;
    const auto r = randomized_vi(d, opt.values, 20, eps, 0.1, seeded(3));
    EXPECT_LE(sup_distance(r.values, opt.values), 2.0 * eps * d.discount() / (1.0 - d.discount()));
}

TEST(RandomizedVi, Preconditions) {
    const Dmdp d = random_dmdp(4, 2, 0.9, 42);
    EXPECT_THROW(randomized_vi(d, ValueVector(4, 0.0), 0, 0.1, 0.1), PreconditionError);
    EXPECT_THROW(randomized_vi(d, ValueVector(3, 0.0), 5, 0.1, 0.1), DimensionError);
    EXPECT_THROW(randomized_vi(d, ValueVector(4, 0.0), 5, 0.1, 1.0), PreconditionError);
}

TEST(HighPrecision, ShortCircuitAtLargeEps) {
    const Dmdp d = random_dmdp(5, 2, 0.9, 43);
    const auto r = high_precision_random_vi(d, config(d.value_bound()));
    EXPECT_EQ(r.values, ValueVector(5, 0.0));
    EXPECT_EQ(r.total_samples, 0U);
    EXPECT_EQ(r.iterations, 0U);
}

TEST(HighPrecision, SmallInstanceAccuracy) {
    const Dmdp d = random_dmdp(10, 3, 0.9, 44);
    const auto opt = optimal_oracle(d, 1e-12);
    const auto r = high_precision_random_vi(d, config(0.05));
    EXPECT_LE(sup_distance(r.values, opt.values), 0.05);
    EXPECT_LE(policy_suboptimality(d, opt.values, r.policy, 1e-10), 0.05);
    EXPECT_EQ(r.phases, phase_count(1.0, 0.05, 0.9));
    EXPECT_EQ(r.phase_samples.size(), r.phases);
    std::uint64_t sum = 0;
    for (auto s : r.phase_samples) sum += s;
    EXPECT_EQ(sum, r.total_samples);
}

TEST(HighPrecision, PerDrawMatchesAccuracy) {
    const Dmdp d = random_dmdp(6, 2, 0.8, 45);
    const auto opt = optimal_oracle(d, 1e-12);
    const auto r = high_precision_random_vi(d, config(0.1, SamplingMode::per_draw));
    EXPECT_LE(sup_distance(r.values, opt.values), 0.1);
}

TEST(Sublinear, SingleState) {
    const Dmdp d = single_state({1.0}, 0.5);
    const auto r = sublinear_random_vi(d, config(0.01));
    EXPECT_NEAR(r.values[0], 2.0, 0.01);
    EXPECT_EQ(r.algorithm, "sublinear");
}

TEST(Sublinear, SmallInstanceAccuracy) {
    const Dmdp d = random_dmdp(8, 2, 0.8, 46);
    const auto opt = optimal_oracle(d, 1e-12);
    const auto r = sublinear_random_vi(d, config(0.1));
    EXPECT_LE(sup_distance(r.values, opt.values), 0.1);
}

TEST(SublinearMon, TraceIsMonotoneAndImprovable) {
    const Dmdp d = random_dmdp(8, 3, 0.8, 47);
    auto c = config(0.1);
    c.run.record_trace = true;
    c.run.check_invariants = true;
    const auto r = sublinear_random_mon_vi(d, c);
    ASSERT_FALSE(r.trace.empty());
    ValueVector prev(8, -d.value_bound());
    for (const auto& point : r.trace) {
        for (std::size_t i = 0; i < 8; ++i) ASSERT_GE(point.values[i], prev[i]);
        const auto tv = policy_operator(d, point.policy, point.values);
        for (std::size_t i = 0; i < 8; ++i) ASSERT_GE(tv[i], point.values[i] - 1e-10);
        prev = point.values;
    }
    const auto opt = optimal_oracle(d, 1e-12);
    EXPECT_LE(policy_suboptimality(d, opt.values, r.policy, 1e-10), 0.1);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_LE(r.values[i], opt.values[i] + 1e-9);
}

TEST(SublinearMon, ShortCircuitReturnsFloor) {
    const Dmdp d = random_dmdp(3, 2, 0.5, 48);
    const auto r = sublinear_random_mon_vi(d, config(2.0 * d.value_bound()));
    EXPECT_EQ(r.values, ValueVector(3, -d.value_bound()));
    EXPECT_EQ(r.total_samples, 0U);
}

TEST(SublinearMon, RejectsNonImprovableStart) {
    const Dmdp d = single_state({0.0}, 0.5);
    RunOptions o;
    o.check_invariants = true;
    EXPECT_THROW(sampled_randomized_mon_vi(d, ValueVector{1.0}, Policy{0}, 3, 0.1, 0.1, o), PreconditionError);
}

TEST(Budget, ExhaustedRunReturnsLastIterate) {
    const Dmdp d = random_dmdp(6, 2, 0.9, 49);
    auto full_cfg = config(0.1);
    full_cfg.rounds = 3;
    full_cfg.phases = 1;
    const auto full = high_precision_random_vi(d, full_cfg);
    ASSERT_FALSE(full.budget_exhausted);

    auto capped_cfg = full_cfg;
    capped_cfg.run.sample_budget = full.total_samples - 1;
    capped_cfg.run.record_trace = true;
    const auto capped = high_precision_random_vi(d, capped_cfg);
    EXPECT_TRUE(capped.budget_exhausted);
    EXPECT_EQ(capped.iterations, 2U);
    EXPECT_LE(capped.total_samples, full.total_samples - 1);
    EXPECT_GE(capped.samples_required, full.total_samples);
    ASSERT_EQ(capped.trace.size(), 2U);
    EXPECT_EQ(capped.values, capped.trace.back().values);
    EXPECT_EQ(capped.policy, capped.trace.back().policy);
}

TEST(Determinism, SameSeedSameOutput) {
    const Dmdp d = random_dmdp(10, 3, 0.9, 50);
    for (auto mode : {SamplingMode::per_draw, SamplingMode::multinomial}) {
        auto c = config(0.2, mode);
        c.rounds = 5;
        const auto a = sublinear_random_vi(d, c);
        c.run.threads = 3;
        const auto b = sublinear_random_vi(d, c);
        EXPECT_EQ(a.values, b.values);
        EXPECT_EQ(a.policy, b.policy);
        EXPECT_EQ(a.total_samples, b.total_samples);
        c.run.seed += 1;
        const auto other = sublinear_random_vi(d, c);
        EXPECT_NE(a.values, other.values);
    }
}

TEST(PolicyExtraction, BoundAndQuality) {
    const Dmdp d = random_dmdp(8, 3, 0.5, 51);
    const auto opt = optimal_oracle(d, 1e-12);
    const double eps = 0.01;
    const auto ex = policy_from_values(d, ValueVector(8, 0.0), eps, 0.1, d.value_bound(), seeded(2));
    EXPECT_DOUBLE_EQ(ex.bound, 16.0 * eps / 0.25);
    EXPECT_EQ(ex.report.iterations, policy_extraction_rounds(0.5, eps, d.value_bound()));
    EXPECT_LE(policy_suboptimality(d, opt.values, ex.policy, 1e-10), ex.bound);
}

TEST(CompareWithOracle, FillsFields) {
    const Dmdp d = random_dmdp(5, 2, 0.9, 52);
    const auto opt = optimal_oracle(d, 1e-12);
    SolveReport r;
    r.values = opt.values;
    r.policy = opt.policy;
    compare_with_oracle(r, d, opt, 1e-10);
    EXPECT_EQ(*r.value_error, 0.0);
    EXPECT_LE(*r.policy_suboptimality, 1e-9);
}

} // namespace
} // namespace vrvi
