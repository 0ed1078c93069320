#include "vrvi/finite_horizon.hpp"

#include <algorithm>
#include <cmath>

#include "run_context.hpp"
#include "vrvi/bellman.hpp"

namespace vrvi {
namespace {

using detail::RunContext;

void check_horizon(std::int64_t horizon) {
    if (horizon < 1) throw HorizonError(horizon);
}

NonStationaryPolicy empty_solution(std::size_t horizon, std::span<const double> terminal) {
    NonStationaryPolicy out;
    out.actions.resize(horizon);
    out.values.resize(horizon + 1);
    out.values[horizon].assign(terminal.begin(), terminal.end());
    return out;
}

/// Steps [top - len, top) of sampled backward induction anchored at values[top].
void sampled_block(RunContext& run, const FiniteHorizonMdp& fh, NonStationaryPolicy& sol,
                   std::size_t top, std::size_t len, double eps, double delta, RunTelemetry& t) {
    const ValueVector& anchor = sol.values[top];
    const OffsetTable x = exact_offsets(fh, anchor);
    const double step_eps = eps / (2.0 * static_cast<double>(len));
    const double step_delta = delta / static_cast<double>(len);
    for (std::size_t h = top; h-- > top - len;) {
        Backup b = apx_val(fh, 1.0, sol.values[h + 1], anchor, x, step_eps, step_delta, run.sampling(),
                           run.next_round());
        sol.values[h] = std::move(b.values);
        sol.actions[h] = std::move(b.policy);
        ++t.iterations;
    }
}

template <class Body>
FhSolveReport run_fh(const FiniteHorizonMdp& fh, const RunOptions& options, const char* name,
                     std::size_t horizon, std::span<const double> terminal, Body&& body) {
    const TransitionSampler sampler = build_sampler(fh);
    RunContext run(sampler, options);
    FhSolveReport report;
    report.algorithm = name;
    report.solution = empty_solution(horizon, terminal);
    try {
        body(run, report);
    } catch (const SampleBudgetExceeded& e) {
        run.exhausted(report, e);
    }
    run.finish(report);
    return report;
}

} // namespace

NonStationaryPolicy exact_backward_induction(const FiniteHorizonMdp& fh,
                                             std::span<const double> terminal) {
    if (terminal.size() != fh.num_states()) throw DimensionError("terminal values", fh.num_states(), terminal.size());
    check_horizon(fh.horizon());
    const auto horizon = static_cast<std::size_t>(fh.horizon());
    NonStationaryPolicy sol = empty_solution(horizon, terminal);
    for (std::size_t h = horizon; h-- > 0;) {
        Backup b = greedy_backup(fh, 1.0, sol.values[h + 1]);
        sol.values[h] = std::move(b.values);
        sol.actions[h] = std::move(b.policy);
    }
    return sol;
}

ValueVector evaluate_nonstationary(const MdpModel& model, std::span<const Policy> actions,
                                   std::span<const double> terminal) {
    if (terminal.size() != model.num_states()) throw DimensionError("terminal values", model.num_states(), terminal.size());
    ValueVector v(terminal.begin(), terminal.end());
    for (std::size_t h = actions.size(); h-- > 0;) {
        check_policy(model, actions[h]);
        v = policy_operator(model, 1.0, actions[h], v);
    }
    return v;
}

double nonstationary_suboptimality(const FiniteHorizonMdp& fh, std::span<const double> optimal_values,
                                   std::span<const Policy> actions, std::span<const double> terminal) {
    if (optimal_values.size() != fh.num_states())
        throw DimensionError("optimal values", fh.num_states(), optimal_values.size());
    const ValueVector v = evaluate_nonstationary(fh, actions, terminal);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, optimal_values[i] - v[i]);
    return worst;
}

FhSolveReport randomized_finite_horizon_vi(const FiniteHorizonMdp& fh, std::span<const double> v0,
                                           std::int64_t horizon, double eps, double delta,
                                           const RunOptions& options) {
    check_horizon(horizon);
    detail::check_eps_delta(eps, delta);
    if (v0.size() != fh.num_states()) throw DimensionError("terminal values", fh.num_states(), v0.size());
    const auto h = static_cast<std::size_t>(horizon);
    return run_fh(fh, options, "fh-randomized", h, v0, [&](RunContext& run, FhSolveReport& report) {
        run.begin_phase();
        sampled_block(run, fh, report.solution, h, h, eps, delta, report);
        run.end_phase(report);
    });
}

FhSolveReport variance_reduced_finite_horizon_vi(const FiniteHorizonMdp& fh, std::int64_t horizon,
                                                 std::int64_t block, double eps, double delta,
                                                 const RunOptions& options) {
    check_horizon(horizon);
    detail::check_eps_delta(eps, delta);
    if (block < 1 || block > horizon) throw PreconditionError("block length must lie in [1, H]");
    const auto h = static_cast<std::size_t>(horizon);
    const auto l = static_cast<std::size_t>(block);
    const ValueVector terminal(fh.num_states(), 0.0);
    return run_fh(fh, options, "fh-variance-reduced", h, terminal, [&](RunContext& run, FhSolveReport& report) {
        const auto total = static_cast<double>(horizon);
        for (std::size_t top = h; top > 0;) {
            const std::size_t len = std::min(l, top);
            const double share = static_cast<double>(len) / total;
            run.begin_phase();
            sampled_block(run, fh, report.solution, top, len, eps * share, delta * share, report);
            run.end_phase(report);
            top -= len;
        }
    });
}

std::int64_t fh_block_length(double eps, std::size_t num_states, std::int64_t horizon,
                             double reward_bound) {
    check_horizon(horizon);
    const double h = static_cast<double>(horizon);
    const double cube = eps * eps * static_cast<double>(num_states) / (h * h * reward_bound * reward_bound);
    // Nudge before flooring so exact cubes such as 8 are not lost to rounding.
    const double l = std::floor(std::cbrt(cube) * (1.0 + 1e-12));
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::min(l, h)), 1, horizon);
}

} // namespace vrvi
