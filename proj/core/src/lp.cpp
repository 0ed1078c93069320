#include "vrvi/lp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "vrvi/bellman.hpp"

namespace vrvi {

std::vector<double> DmdpLp::apply(std::span<const double> v) const {
    if (v.size() != num_cols) throw DimensionError("LP variable", num_cols, v.size());
    std::vector<double> out(num_rows, 0.0);
    for (std::size_t r = 0; r < num_rows; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) acc += coeffs[k] * v[cols[k]];
        out[r] = acc;
    }
    return out;
}

double DmdpLp::row_sum_defect() const {
    double worst = 0.0;
    for (std::size_t r = 0; r < num_rows; ++r) {
        double sum = 0.0;
        for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) sum += coeffs[k];
        worst = std::max(worst, std::abs(sum - (1.0 - discount)));
    }
    return worst;
}

DmdpLp build_lp(const Dmdp& dmdp) {
    validate(dmdp);
    const double gamma = dmdp.discount();
    DmdpLp lp;
    lp.num_rows = dmdp.num_pairs();
    lp.num_cols = dmdp.num_states();
    lp.discount = gamma;
    lp.rhs.assign(dmdp.rewards().begin(), dmdp.rewards().end());
    lp.row_offsets.reserve(lp.num_rows + 1);
    lp.row_offsets.push_back(0);
    lp.cols.reserve(dmdp.nnz() + lp.num_rows);
    lp.coeffs.reserve(dmdp.nnz() + lp.num_rows);

    for (StateIndex i = 0; i < dmdp.num_states(); ++i) {
        for (ActionIndex a = 0; a < dmdp.num_actions(); ++a) {
            const auto support = dmdp.support(i, a);
            const auto probs = dmdp.probs(i, a);
            double self = 0.0;
            for (std::size_t k = 0; k < support.size(); ++k)
                if (support[k] == i) self += probs[k];
            lp.cols.push_back(i);
            lp.coeffs.push_back(1.0 - gamma * self);
            for (std::size_t k = 0; k < support.size(); ++k) {
                if (support[k] == i) continue;
                lp.cols.push_back(support[k]);
                lp.coeffs.push_back(-gamma * probs[k]);
            }
            lp.row_offsets.push_back(lp.cols.size());
        }
    }
    return lp;
}

LpCheck check_lp_solution(const DmdpLp& lp, std::span<const double> v, double opt, double eps) {
    const auto av = lp.apply(v);
    LpCheck out;
    for (std::size_t r = 0; r < lp.num_rows; ++r) out.max_violation = std::max(out.max_violation, lp.rhs[r] - av[r]);
    double total = 0.0;
    for (double x : v) total += x;
    out.objective_gap = total - opt;
    out.ok = out.max_violation <= eps && out.objective_gap <= eps;
    return out;
}

Policy policy_from_lp(const Dmdp& dmdp, std::span<const double> v) { return greedy_policy(dmdp, v); }

double lp_policy_bound(const Dmdp& dmdp, double eps) {
    const double g = 1.0 - dmdp.discount();
    return 8.0 * eps * static_cast<double>(dmdp.num_states()) / (g * g);
}

double l1_pair(double x) { return std::abs(x - 1.0) + std::abs(x + 1.0); }

double l1_pair_max(double x) { return 2.0 * std::max(std::abs(x), 1.0); }

namespace {

double objective_term(const L1Problem& p, std::span<const double> v) {
    double total = 0.0;
    for (double x : v) total += x;
    const double g = 1.0 - p.lp.discount;
    return std::abs(p.alpha * (static_cast<double>(p.num_states) * p.reward_bound / g + total));
}

/// S^-1 A v - S^-1 b.
std::vector<double> scaled_residual(const L1Problem& p, std::span<const double> v) {
    auto y = p.lp.apply(v);
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = y[r] / p.scale[r] - p.center[r] / p.scale[r];
    return y;
}

} // namespace

double L1Problem::evaluate(std::span<const double> v) const {
    const auto y = scaled_residual(*this, v);
    double minus = 0.0;
    double plus = 0.0;
    for (double x : y) {
        minus += std::abs(x - 1.0);
        plus += std::abs(x + 1.0);
    }
    return objective_term(*this, v) + minus + plus;
}

double L1Problem::evaluate_max_form(std::span<const double> v) const {
    const auto y = scaled_residual(*this, v);
    double acc = 0.0;
    for (double x : y) acc += std::max(std::abs(x), 1.0);
    return objective_term(*this, v) + 2.0 * acc;
}

double L1Problem::optimum_upper_bound() const {
    const double g = 1.0 - lp.discount;
    return 2.0 * alpha * static_cast<double>(num_states) * reward_bound / g + 2.0 * static_cast<double>(lp.num_rows);
}

L1Problem build_l1(const Dmdp& dmdp, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw PreconditionError("alpha must be positive");
    L1Problem p;
    p.lp = build_lp(dmdp);
    p.alpha = alpha;
    p.num_states = dmdp.num_states();
    p.reward_bound = dmdp.reward_bound();
    const double top = 2.0 * dmdp.value_bound();
    p.scale.resize(p.lp.num_rows);
    p.center.resize(p.lp.num_rows);
    for (std::size_t r = 0; r < p.lp.num_rows; ++r) {
        p.scale[r] = 0.5 * (top - p.lp.rhs[r]);
        p.center[r] = 0.5 * (top + p.lp.rhs[r]);
    }
    return p;
}

double l1_default_alpha(const Dmdp& dmdp, double eps) {
    const double g = 1.0 - dmdp.discount();
    const double m = dmdp.reward_bound();
    const double s = static_cast<double>(dmdp.num_states());
    return eps * g * g * g * g / (32.0 * m * m * s * s);
}

L1Certificate certify_l1_to_lp(const L1Problem& l1, std::span<const double> v, double eps_f, double opt) {
    if (!(eps_f >= 0.0)) throw PreconditionError("l1 accuracy must be non-negative");
    const double g = 1.0 - l1.lp.discount;
    const double m = l1.reward_bound;
    const double s = static_cast<double>(l1.num_states);
    L1Certificate out;
    out.lp_accuracy = std::max(eps_f / l1.alpha, 2.0 * l1.alpha * s * m * m / (g * g) + eps_f * m / g);
    out.check = check_lp_solution(l1.lp, v, opt, out.lp_accuracy);
    if (!out.check.ok)
        throw PreconditionError("vector is not an approximate LP solution at the certified accuracy; "
                                "the claimed l1 accuracy is inconsistent");
    return out;
}

void write_matrix_market(std::ostream& out, const DmdpLp& lp) {
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << "% DMDP LP constraint matrix A = E - gamma P, rows ordered state-major over (state, action)\n";
    out << lp.num_rows << ' ' << lp.num_cols << ' ' << lp.nnz() << '\n';
    out << std::setprecision(17);
    for (std::size_t r = 0; r < lp.num_rows; ++r)
        for (std::size_t k = lp.row_offsets[r]; k < lp.row_offsets[r + 1]; ++k)
            out << r + 1 << ' ' << lp.cols[k] + 1 << ' ' << lp.coeffs[k] << '\n';
}

} // namespace vrvi
