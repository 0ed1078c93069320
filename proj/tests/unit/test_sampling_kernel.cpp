#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "support/oracles.hpp"
#include "vrvi/bellman.hpp"
#include "vrvi/kernel.hpp"
#include "vrvi/sampler.hpp"

namespace vrvi {
namespace {

using testing::random_dmdp;
using testing::single_state;

Dmdp one_row(std::vector<Transition> row, std::size_t states) {
    std::vector<std::vector<Transition>> rows(states, std::vector<Transition>{{0, 1.0}});
    rows[0] = std::move(row);
    return Dmdp(states, 1, rows, std::vector<double>(states, 0.0), 0.9, 1.0);
}

TEST(Sampler, PointMassAlwaysReturnsSupport) {
    const Dmdp d = one_row({{2, 1.0}}, 3);
    const auto sampler = build_sampler(d);
    RngStream rng(1, {0, 0, 0});
    for (int k = 0; k < 1000; ++k) ASSERT_EQ(sample_next_state(sampler, 0, 0, rng), 2U);
}

TEST(Sampler, FairCoinFrequency) {
    const Dmdp d = one_row({{0, 0.5}, {1, 0.5}}, 2);
    const auto sampler = build_sampler(d);
    RngStream rng(2, {0, 0, 0});
    int zeros = 0;
    for (int k = 0; k < 100000; ++k) zeros += sample_next_state(sampler, 0, 0, rng) == 0;
    EXPECT_NEAR(zeros / 100000.0, 0.5, 0.01);
}

TEST(Sampler, ReconstructionMatchesRows) {
    const Dmdp d = random_dmdp(12, 3, 0.9, 21);
    const auto sampler = build_sampler(d);
    for (StateIndex i = 0; i < 12; ++i)
        for (ActionIndex a = 0; a < 3; ++a) {
            const auto rec = sampler.reconstruct(i, a);
            const auto s = d.support(i, a);
            const auto p = d.probs(i, a);
            ASSERT_EQ(rec.size(), s.size());
            for (std::size_t k = 0; k < s.size(); ++k) {
                EXPECT_EQ(rec[k].next, s[k]);
                EXPECT_NEAR(rec[k].prob, p[k], 1e-12);
            }
        }
}

TEST(Sampler, SameKeyReplays) {
    const Dmdp d = random_dmdp(8, 2, 0.9, 22);
    const auto sampler = build_sampler(d);
    RngStream a(9, {3, 1, 1});
    RngStream b(9, {3, 1, 1});
    for (int k = 0; k < 500; ++k) ASSERT_EQ(sample_next_state(sampler, 1, 1, a), sample_next_state(sampler, 1, 1, b));
}

TEST(Sampler, ChiSquareFourOutcomes) {
    const std::array<double, 4> p{0.1, 0.2, 0.3, 0.4};
    const Dmdp d = one_row({{0, p[0]}, {1, p[1]}, {2, p[2]}, {3, p[3]}}, 4);
    const auto sampler = build_sampler(d);
    RngStream rng(3, {0, 0, 0});
    std::array<double, 4> counts{};
    const int n = 1000000;
    for (int k = 0; k < n; ++k) counts[sample_next_state(sampler, 0, 0, rng)] += 1.0;
    double chi2 = 0.0;
    for (int j = 0; j < 4; ++j) chi2 += (counts[j] - n * p[j]) * (counts[j] - n * p[j]) / (n * p[j]);
    // 0.999 quantile of chi-square with 3 degrees of freedom.
    EXPECT_LT(chi2, 16.266);
}

TEST(Sampler, BuildValidates) {
    const Dmdp bad(1, 1, {{{0, 0.5}}}, {0.0}, 0.9, 1.0);
    EXPECT_THROW(build_sampler(bad), RowSumError);
}

TEST(Hoeffding, SampleCountExample) {
    EXPECT_EQ(hoeffding_sample_count(1.0, 0.1, 0.01), 1060U);
    EXPECT_EQ(hoeffding_sample_count(0.0, 0.1, 0.01), 0U);
    EXPECT_THROW(hoeffding_sample_count(1.0, 0.0, 0.1), PreconditionError);
    EXPECT_THROW(hoeffding_sample_count(1.0, 0.1, 1.0), PreconditionError);
}

TEST(ApxTrans, DrawsExactlyM) {
    const Dmdp d = random_dmdp(6, 2, 0.9, 23);
    const auto sampler = build_sampler(d);
    const std::vector<double> u{1.0, -1.0, 0.5, 0.0, 0.25, -0.75};
    RngStream rng(4, {0, 0, 0});
    SampleTally tally;
    apx_trans(u, 1.0, 0, 0, 0.1, 0.01, sampler, rng, &tally);
    EXPECT_EQ(tally.total(), 1060U);
}

TEST(ApxTrans, ZeroVectorShortCircuits) {
    const Dmdp d = random_dmdp(4, 2, 0.9, 24);
    const auto sampler = build_sampler(d);
    RngStream rng(5, {0, 0, 0});
    SampleTally tally;
    EXPECT_EQ(apx_trans(std::vector<double>(4, 0.0), 0.0, 1, 1, 0.1, 0.1, sampler, rng, &tally), 0.0);
    EXPECT_EQ(tally.total(), 0U);
}

TEST(ApxTrans, ConstantVectorIsExact) {
    const Dmdp d = random_dmdp(5, 2, 0.9, 25);
    const auto sampler = build_sampler(d);
    for (double c : {0.3, -7.25, 1.0 / 3.0}) {
        RngStream rng(6, {0, 0, 0});
        EXPECT_EQ(apx_trans(std::vector<double>(5, c), std::abs(c), 2, 1, 0.05, 0.1, sampler, rng), c);
    }
}

TEST(ApxTrans, BoundIsChecked) {
    const Dmdp d = random_dmdp(3, 1, 0.9, 26);
    const auto sampler = build_sampler(d);
    RngStream rng(7, {0, 0, 0});
    EXPECT_THROW(apx_trans(std::vector<double>{2.0, 0.0, 0.0}, 1.0, 0, 0, 0.1, 0.1, sampler, rng), PreconditionError);
}

TEST(ApxTrans, Coverage) {
    const Dmdp d = random_dmdp(10, 2, 0.9, 27);
    const auto sampler = build_sampler(d);
    std::vector<double> u(10);
    for (std::size_t j = 0; j < u.size(); ++j) u[j] = std::cos(static_cast<double>(j));
    const auto dense = testing::dense_transitions(d);
    const double exact = testing::dense_dot(dense[3][1], u);
    int hits = 0;
    for (std::uint64_t t = 0; t < 1000; ++t) {
        RngStream rng(t, {0, 3, 1});
        hits += std::abs(apx_trans(u, 1.0, 3, 1, 0.1, 0.1, sampler, rng) - exact) <= 0.1;
    }
    EXPECT_GE(hits, 900);
}

TEST(ApxTrans, MultinomialMatchesPerDrawInDistribution) {
    const Dmdp d = random_dmdp(6, 1, 0.9, 28);
    const auto sampler = build_sampler(d);
    const std::vector<double> u{1.0, 0.0, -1.0, 0.5, -0.5, 0.25};
    const double exact = testing::dense_dot(testing::dense_transitions(d)[0][0], u);
    double sum_a = 0.0, sum_b = 0.0, sq_a = 0.0, sq_b = 0.0;
    const int trials = 2000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream ra(t, {1, 0, 0});
        RngStream rb(t, {2, 0, 0});
        const double a = apx_trans(u, 1.0, 0, 0, 0.2, 0.2, sampler, ra, nullptr, SamplingMode::per_draw) - exact;
        const double b = apx_trans(u, 1.0, 0, 0, 0.2, 0.2, sampler, rb, nullptr, SamplingMode::multinomial) - exact;
        sum_a += a;
        sum_b += b;
        sq_a += a * a;
        sq_b += b * b;
    }
    const double var_a = sq_a / trials, var_b = sq_b / trials;
    // Both estimators are unbiased with the same variance.
    EXPECT_NEAR(sum_a / trials, 0.0, 5.0 * std::sqrt(var_a / trials));
    EXPECT_NEAR(sum_b / trials, 0.0, 5.0 * std::sqrt(var_b / trials));
    EXPECT_NEAR(var_a / var_b, 1.0, 0.15);
}

TEST(Offsets, ExactOffsets) {
    const Dmdp d = random_dmdp(7, 3, 0.9, 29);
    const auto zero = exact_offsets(d, std::vector<double>(7, 0.0));
    for (double x : zero.values) EXPECT_EQ(x, 0.0);
    const auto ones = exact_offsets(d, std::vector<double>(7, 1.0));
    for (double x : ones.values) EXPECT_NEAR(x, 1.0, 1e-12);
    std::vector<double> v0{0.5, -1.0, 2.0, 0.0, 1.5, -0.25, 3.0};
    const auto x = exact_offsets(d, v0);
    const auto dense = testing::dense_transitions(d);
    EXPECT_EQ(x.accuracy, 0.0);
    for (StateIndex i = 0; i < 7; ++i)
        for (ActionIndex a = 0; a < 3; ++a) EXPECT_NEAR(x.at(i, a), testing::dense_dot(dense[i][a], v0), 1e-12);
}

TEST(Offsets, SampledOffsetsTrivialCases) {
    const Dmdp d = random_dmdp(5, 2, 0.9, 30);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 1};
    const auto zero = sampled_offsets(std::vector<double>(5, 0.0), 0.1, 0.1, ctx, 0);
    for (double x : zero.values) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(ctx.tally.total(), 0U);
    const auto c = sampled_offsets(std::vector<double>(5, 2.5), 0.1, 0.1, ctx, 1);
    for (double x : c.values) EXPECT_EQ(x, 2.5);
    EXPECT_EQ(c.accuracy, 0.1);
}

TEST(Offsets, SampledOffsetsAccuracy) {
    const Dmdp d = random_dmdp(8, 2, 0.9, 31);
    const auto sampler = build_sampler(d);
    std::vector<double> v0(8);
    for (std::size_t j = 0; j < 8; ++j) v0[j] = std::sin(1.0 + static_cast<double>(j));
    const auto exact = exact_offsets(d, v0);
    int ok = 0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) {
        SamplingContext ctx{sampler, rep};
        const auto x = sampled_offsets(v0, 0.1, 0.1, ctx, 0);
        ok += testing::max_abs_diff(x.values, exact.values) <= 0.1;
    }
    EXPECT_GE(ok, 90);
}

TEST(ApxVal, AnchoredAtInputIsExact) {
    const Dmdp d = random_dmdp(9, 3, 0.9, 32);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 3};
    std::vector<double> u(9);
    for (std::size_t j = 0; j < 9; ++j) u[j] = 0.3 * static_cast<double>(j) - 1.0;
    const auto x = exact_offsets(d, u);
    const Backup b = apx_val(d, u, u, x, 0.05, 0.1, ctx, 0);
    const Backup exact = greedy_backup(d, d.discount(), u);
    EXPECT_EQ(ctx.tally.total(), 0U);
    EXPECT_LE(sup_distance(b.values, exact.values), 1e-12);
    EXPECT_EQ(b.policy, greedy_policy(d, u));
}

TEST(ApxVal, SingleStateSingleAction) {
    const Dmdp d = single_state({0.5}, 0.9);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 4};
    const auto x = exact_offsets(d, std::vector<double>{1.0});
    const Backup b = apx_val(d, std::vector<double>{3.0}, std::vector<double>{1.0}, x, 0.1, 0.1, ctx, 0);
    EXPECT_DOUBLE_EQ(b.values[0], 0.5 + 0.9 * 3.0);
    EXPECT_EQ(b.policy, (Policy{0}));
}

TEST(ApxVal, ErrorWithinTwoGammaEps) {
    const Dmdp d = random_dmdp(10, 3, 0.9, 33);
    const auto sampler = build_sampler(d);
    const std::vector<double> v0(10, 0.0);
    const auto x = exact_offsets(d, v0);
    std::vector<double> u(10);
    for (std::size_t j = 0; j < 10; ++j) u[j] = std::cos(static_cast<double>(j));
    const auto tu = value_operator(d, u);
    int ok = 0;
    for (std::uint64_t t = 0; t < 100; ++t) {
        SamplingContext ctx{sampler, t};
        const Backup b = apx_val(d, u, v0, x, 0.05, 0.1, ctx, 0);
        ok += sup_distance(b.values, tu) <= 2.0 * d.discount() * 0.05;
        ASSERT_EQ(b.policy.size(), 10U);
    }
    EXPECT_GE(ok, 90);
}

TEST(ApxVal, LargeEpsStillWellFormed) {
    const Dmdp d = random_dmdp(6, 3, 0.9, 34);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 5};
    const std::vector<double> v0(6, 0.0);
    const std::vector<double> u{1.0, 2.0, -1.0, 0.0, 0.5, -2.0};
    const auto x = exact_offsets(d, v0);
    const Backup b = apx_val(d, u, v0, x, 100.0, 0.5, ctx, 0);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_LT(b.policy[i], 3U);
        EXPECT_TRUE(std::isfinite(b.values[i]));
    }
}

TEST(ApxVal, Preconditions) {
    const Dmdp d = random_dmdp(4, 2, 0.9, 35);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 6};
    const std::vector<double> v0(4, 0.0), other(4, 1.0);
    const auto x = exact_offsets(d, v0);
    EXPECT_THROW(apx_val(d, v0, other, x, 0.1, 0.1, ctx, 0), PreconditionError);
    EXPECT_THROW(apx_val(d, v0, v0, x, -0.1, 0.1, ctx, 0), PreconditionError);
    EXPECT_THROW(apx_val(d, v0, v0, x, 0.1, 1.5, ctx, 0), PreconditionError);
    auto loose = sampled_offsets(other, 0.5, 0.1, ctx, 1);
    EXPECT_THROW(apx_val(d, other, other, loose, 0.1, 0.1, ctx, 2), PreconditionError);
}

TEST(ApxVal, ThreadCountDoesNotChangeOutput) {
    const Dmdp d = random_dmdp(40, 3, 0.9, 36);
    const auto sampler = build_sampler(d);
    const std::vector<double> v0(40, 0.0);
    std::vector<double> u(40);
    for (std::size_t j = 0; j < 40; ++j) u[j] = std::sin(static_cast<double>(j));
    const auto x = exact_offsets(d, v0);
    SamplingContext one{sampler, 7};
    SamplingContext four{sampler, 7, SampleTally{}, SamplingMode::per_draw, 4};
    const Backup a = apx_val(d, u, v0, x, 0.2, 0.1, one, 5);
    const Backup b = apx_val(d, u, v0, x, 0.2, 0.1, four, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.policy, b.policy);
    EXPECT_EQ(one.tally.total(), four.tally.total());
}

TEST(ApxVal, BudgetRefusesBeforeDrawing) {
    const Dmdp d = random_dmdp(5, 2, 0.9, 37);
    const auto sampler = build_sampler(d);
    SamplingContext ctx{sampler, 8, SampleTally(std::uint64_t{10})};
    const std::vector<double> v0(5, 0.0);
    const auto x = exact_offsets(d, v0);
    try {
        apx_val(d, std::vector<double>{1.0, 0.0, 0.0, 0.0, 0.0}, v0, x, 0.1, 0.1, ctx, 0);
        FAIL() << "expected SampleBudgetExceeded";
    } catch (const SampleBudgetExceeded& e) {
        EXPECT_EQ(e.budget, 10U);
        EXPECT_GT(e.required, 10U);
    }
    EXPECT_EQ(ctx.tally.total(), 0U);
}

TEST(ApxMonVal, BranchExamples) {
    // One self-loop state with gamma = 0.5 and u = 5, so q = r + 2.5 exactly.
    // eps = 0.2 gives a shift of 2 * gamma * eps = 0.2.
    const std::vector<double> u{5.0};
    {
        const Dmdp d = single_state({2.6}, 0.5, 4.0);
        const auto sampler = build_sampler(d);
        SamplingContext ctx{sampler, 9};
        const Backup b = apx_mon_val(d, u, Policy{0}, u, exact_offsets(d, u), 0.2, 0.1, ctx, 0);
        EXPECT_EQ(b.values[0], 5.0);
        EXPECT_EQ(b.policy[0], 0U);
    }
    {
        const Dmdp d = single_state({3.5}, 0.5, 4.0);
        const auto sampler = build_sampler(d);
        SamplingContext ctx{sampler, 9};
        const Backup b = apx_mon_val(d, u, Policy{0}, u, exact_offsets(d, u), 0.2, 0.1, ctx, 0);
        EXPECT_DOUBLE_EQ(b.values[0], 5.8);
    }
}

TEST(ApxMonVal, OutputNeverBelowInput) {
    const Dmdp d = random_dmdp(15, 3, 0.9, 38);
    const auto sampler = build_sampler(d);
    const std::vector<double> v0(15, -d.value_bound());
    const Policy pi(15, 0);
    SamplingContext ctx{sampler, 10};
    const auto x = sampled_offsets(v0, 0.5, 0.1, ctx, 0);
    std::vector<double> u = v0;
    Policy p = pi;
    for (std::uint64_t t = 1; t <= 20; ++t) {
        const Backup b = apx_mon_val(d, u, p, v0, x, 0.5, 0.1, ctx, t);
        for (std::size_t i = 0; i < 15; ++i) ASSERT_GE(b.values[i], u[i]);
        u = b.values;
        p = b.policy;
    }
}

TEST(Determinism, ApxValReplays) {
    const Dmdp d = random_dmdp(12, 3, 0.9, 39);
    const auto sampler = build_sampler(d);
    const std::vector<double> v0(12, 0.0);
    std::vector<double> u(12, 0.0);
    u[3] = 1.0;
    const auto x = exact_offsets(d, v0);
    for (auto mode : {SamplingMode::per_draw, SamplingMode::multinomial}) {
        SamplingContext a{sampler, 11, SampleTally{}, mode};
        SamplingContext b{sampler, 11, SampleTally{}, mode};
        EXPECT_EQ(apx_val(d, u, v0, x, 0.1, 0.1, a, 3).values, apx_val(d, u, v0, x, 0.1, 0.1, b, 3).values);
    }
}

} // namespace
} // namespace vrvi
