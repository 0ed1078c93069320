#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/oracles.hpp"
#include "vrvi/exact.hpp"
#include "vrvi/lp.hpp"

namespace vrvi {
namespace {

using testing::random_dmdp;
using testing::single_state;

double total(const ValueVector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

TEST(LpBuild, SingleStateMatrix) {
    const DmdpLp lp = build_lp(single_state({0.5}, 0.9));
    ASSERT_EQ(lp.num_rows, 1U);
    ASSERT_EQ(lp.nnz(), 1U);
    EXPECT_NEAR(lp.coeffs[0], 0.1, 1e-15);
    EXPECT_EQ(lp.rhs, (std::vector<double>{0.5}));
    EXPECT_NEAR(lp.apply(std::vector<double>{5.0})[0], 0.5, 1e-14);
}

TEST(LpBuild, RowSumsAreOneMinusGamma) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DmdpLp lp = build_lp(random_dmdp(15, 3, 0.95, 70 + seed));
        EXPECT_EQ(lp.num_rows, 45U);
        EXPECT_EQ(lp.num_cols, 15U);
        EXPECT_LE(lp.row_sum_defect(), 1e-12);
    }
}

TEST(LpBuild, FeasibilityMatchesBellmanInequality) {
    const Dmdp d = random_dmdp(8, 3, 0.9, 71);
    const DmdpLp lp = build_lp(d);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-15.0, 15.0);
    for (int t = 0; t < 200; ++t) {
        ValueVector v(8);
        for (double& x : v) x = unit(rng);
        const auto av = lp.apply(v);
        const auto q = testing::q_table(d, d.discount(), v);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t a = 0; a < 3; ++a) {
                const std::size_t r = i * 3 + a;
                // (A v)_r - r_r = v_i - Q(i, a)
                ASSERT_NEAR(av[r] - lp.rhs[r], v[i] - q[i][a], 1e-12);
            }
    }
}

TEST(LpCheck, OptimumAndShifts) {
    const Dmdp d = random_dmdp(10, 3, 0.9, 72);
    const auto opt = optimal_oracle(d, 1e-12);
    const DmdpLp lp = build_lp(d);
    const double obj = total(opt.values);
    const auto at = check_lp_solution(lp, opt.values, obj, 1e-9);
    EXPECT_TRUE(at.ok);
    EXPECT_LE(at.max_violation, 1e-9);

    ValueVector up = opt.values, down = opt.values;
    for (double& x : up) x += 1.0;
    for (double& x : down) x -= 1.0;
    const auto hi = check_lp_solution(lp, up, obj, 0.5);
    EXPECT_EQ(hi.max_violation, 0.0);
    EXPECT_NEAR(hi.objective_gap, 10.0, 1e-9);
    EXPECT_FALSE(hi.ok);
    const auto lo = check_lp_solution(lp, down, obj, 0.5);
    EXPECT_NEAR(lo.max_violation, 0.1, 1e-9);
    EXPECT_TRUE(lo.ok);
    EXPECT_FALSE(check_lp_solution(lp, down, obj, 0.05).ok);
}

TEST(LpPolicy, GreedyFromOptimumIsOptimal) {
    const Dmdp d = random_dmdp(10, 3, 0.8, 73);
    const auto opt = optimal_oracle(d, 1e-12);
    const Policy pi = policy_from_lp(d, opt.values);
    EXPECT_LE(policy_suboptimality(d, opt.values, pi, 1e-11), 1e-8);
    EXPECT_DOUBLE_EQ(lp_policy_bound(d, 0.01), 8.0 * 0.01 * 10 / (0.2 * 0.2));
}

TEST(L1, PairExamples) {
    EXPECT_EQ(l1_pair(0.5), 2.0);
    EXPECT_EQ(l1_pair(3.0), 6.0);
    EXPECT_EQ(l1_pair(-3.0), 6.0);
    EXPECT_EQ(l1_pair_max(0.5), 2.0);
    EXPECT_EQ(l1_pair_max(3.0), 6.0);
}

TEST(L1, PairIdentityOnDyadicGrid) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> grid(-(std::int64_t{10} << 20), std::int64_t{10} << 20);
    for (int t = 0; t < 100000; ++t) {
        const double x = std::ldexp(static_cast<double>(grid(rng)), -20);
        ASSERT_EQ(l1_pair(x), l1_pair_max(x)) << x;
    }
}

TEST(L1, FormsAgreeAndOptimumBounded) {
    const Dmdp d = random_dmdp(8, 2, 0.9, 74);
    const L1Problem l1 = build_l1(d, l1_default_alpha(d, 0.1));
    const auto opt = optimal_oracle(d, 1e-12);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> unit(-10.0, 10.0);
    for (int t = 0; t < 50; ++t) {
        ValueVector v(8);
        for (double& x : v) x = unit(rng);
        EXPECT_NEAR(l1.evaluate(v), l1.evaluate_max_form(v), 1e-10 * (1.0 + l1.evaluate(v)));
    }
    EXPECT_LE(l1.evaluate(opt.values), l1.optimum_upper_bound() + 1e-9);
}

TEST(L1, DefaultAlpha) {
    const Dmdp d = random_dmdp(4, 2, 0.5, 75);
    EXPECT_DOUBLE_EQ(l1_default_alpha(d, 0.1), 0.1 * 0.0625 / (32.0 * 16.0));
}

TEST(L1, CertifyAtOptimum) {
    const Dmdp d = random_dmdp(6, 2, 0.9, 76);
    const auto opt = optimal_oracle(d, 1e-12);
    const L1Problem l1 = build_l1(d, l1_default_alpha(d, 0.1));
    const auto cert = certify_l1_to_lp(l1, opt.values, 0.0, total(opt.values));
    const double g = 0.1;
    EXPECT_DOUBLE_EQ(cert.lp_accuracy, 2.0 * l1.alpha * 6.0 / (g * g));
    EXPECT_LE(cert.lp_accuracy, 0.1);
    EXPECT_TRUE(cert.check.ok);

    const auto loose = certify_l1_to_lp(l1, opt.values, 1e-6, total(opt.values));
    EXPECT_DOUBLE_EQ(loose.lp_accuracy, std::max(1e-6 / l1.alpha, 2.0 * l1.alpha * 6.0 / (g * g) + 1e-6 / g));
}

TEST(L1, CertifyRejectsInconsistentClaim) {
    const Dmdp d = random_dmdp(6, 2, 0.9, 77);
    const auto opt = optimal_oracle(d, 1e-12);
    const L1Problem l1 = build_l1(d, l1_default_alpha(d, 0.1));
    ValueVector bad = opt.values;
    for (double& x : bad) x -= 1.0;
    EXPECT_THROW(certify_l1_to_lp(l1, bad, 0.0, total(opt.values)), PreconditionError);
    EXPECT_THROW(certify_l1_to_lp(l1, opt.values, -1.0, total(opt.values)), PreconditionError);
}

TEST(MatrixMarket, HeaderAndOneBasedEntries) {
    std::vector<std::vector<Transition>> rows{{{1, 1.0}}, {{0, 0.5}, {1, 0.5}}};
    const Dmdp d(2, 1, rows, {0.0, 1.0}, 0.5, 1.0);
    std::ostringstream out;
    write_matrix_market(out, build_lp(d));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "%%MatrixMarket matrix coordinate real general");
    while (std::getline(in, line) && line[0] == '%') {
    }
    EXPECT_EQ(line, "2 2 4");
    std::vector<std::string> entries;
    while (std::getline(in, line)) entries.push_back(line);
    // The diagonal entry leads each row.
    EXPECT_EQ(entries, (std::vector<std::string>{"1 1 1", "1 2 -0.5", "2 2 0.75", "2 1 -0.25"}));
}

} // namespace
} // namespace vrvi
