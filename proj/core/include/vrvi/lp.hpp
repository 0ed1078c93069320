#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "vrvi/mdp.hpp"

namespace vrvi {

/**
 * The DMDP linear program: minimize 1^T v subject to A v >= r, A = E - gamma P.
 *
 * Row i * |A| + a of A holds 1 - gamma p_a(i, i) at column i and
 * -gamma p_a(i, j) on the rest of the row's support. Stored in CSR form.
 */
struct DmdpLp {
    std::size_t num_rows = 0;
    std::size_t num_cols = 0;
    std::vector<std::size_t> row_offsets;
    std::vector<StateIndex> cols;
    std::vector<double> coeffs;
    std::vector<double> rhs;
    double discount = 0.0;

    std::size_t nnz() const noexcept { return coeffs.size(); }

    /// A v.
    std::vector<double> apply(std::span<const double> v) const;

    /// max over rows of |sum_j A_rj - (1 - gamma)|.
    double row_sum_defect() const;
};

DmdpLp build_lp(const Dmdp& dmdp);

struct LpCheck {
    /// max over rows of (r - A v), clipped at 0.
    double max_violation = 0.0;
    /// 1^T v - OPT.
    double objective_gap = 0.0;
    /// Both within eps: v is an eps-approximate LP solution.
    bool ok = false;
};

/// Checks A v >= r - eps 1 and 1^T v <= OPT + eps.
LpCheck check_lp_solution(const DmdpLp& lp, std::span<const double> v, double opt, double eps);

/// Greedy policy of v.
Policy policy_from_lp(const Dmdp& dmdp, std::span<const double> v);

/// 8 eps |S| / (1 - gamma)^2: suboptimality of policy_from_lp for an eps-approximate solution.
double lp_policy_bound(const Dmdp& dmdp, double eps);

/// |x - 1| + |x + 1|.
double l1_pair(double x);
/// 2 max(|x|, 1).
double l1_pair_max(double x);

/**
 * The l1-regression form of the LP with S = diag(s):
 *   f(v) = |alpha (|S| M / (1 - gamma) + 1^T v)| + ||S^-1 A v - S^-1 b - 1||_1
 *          + ||S^-1 A v - S^-1 b + 1||_1
 * where s = (2M/(1-gamma) 1 - r) / 2 and b = (2M/(1-gamma) 1 + r) / 2.
 */
struct L1Problem {
    DmdpLp lp;
    std::vector<double> scale;
    std::vector<double> center;
    double alpha = 0.0;
    std::size_t num_states = 0;
    double reward_bound = 0.0;

    /// f(v) as the sum of the two l1 norms.
    double evaluate(std::span<const double> v) const;
    /// f(v) with the norm pair collapsed to 2 sum max(|y|, 1).
    double evaluate_max_form(std::span<const double> v) const;
    /// Upper bound on f(v*): 2 alpha |S| M / (1 - gamma) + 2 |S| |A|.
    double optimum_upper_bound() const;
};

L1Problem build_l1(const Dmdp& dmdp, double alpha);

/// alpha = eps (1 - gamma)^4 / (32 M^2 |S|^2).
double l1_default_alpha(const Dmdp& dmdp, double eps);

struct L1Certificate {
    /// max{eps_f / alpha, 2 alpha |S| M^2 / (1-gamma)^2 + eps_f M / (1-gamma)}.
    double lp_accuracy = 0.0;
    LpCheck check;
};

/// Derives the LP accuracy implied by f(v) <= f(v*_f) + eps_f and checks v
/// against it. Throws PreconditionError when the check fails.
L1Certificate certify_l1_to_lp(const L1Problem& l1, std::span<const double> v, double eps_f,
                               double opt);

/// Writes A as a MatrixMarket coordinate file (1-based indices).
void write_matrix_market(std::ostream& out, const DmdpLp& lp);

} // namespace vrvi
