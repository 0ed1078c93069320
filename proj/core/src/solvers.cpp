#include "vrvi/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "run_context.hpp"
#include "vrvi/bellman.hpp"

namespace vrvi {
namespace detail {

void check_eps_delta(double eps, double delta) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw PreconditionError("epsilon must be positive");
    if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
}

} // namespace detail

namespace {

using detail::RunContext;

constexpr double kInvariantSlack = 1e-12;

void check_rounds(std::uint64_t rounds) {
    if (rounds < 1) throw PreconditionError("round count must be at least 1");
}

void check_start(const Dmdp& dmdp, std::span<const double> v0) {
    if (v0.size() != dmdp.num_states()) throw DimensionError("initial values", dmdp.num_states(), v0.size());
}

template <class Body>
SolveReport run_solver(const Dmdp& dmdp, const RunOptions& options, std::string name,
                       ValueVector values, Policy policy, Body&& body) {
    const TransitionSampler sampler = build_sampler(dmdp);
    RunContext run(sampler, options);
    SolveReport report;
    report.algorithm = std::move(name);
    report.values = std::move(values);
    report.policy = std::move(policy);
    try {
        body(run, report);
    } catch (const SampleBudgetExceeded& e) {
        run.exhausted(report, e);
    }
    run.finish(report);
    return report;
}

// The phase helpers advance report.values / report.policy in place, so an
// interrupted run leaves the last completed round there.

void randomized_vi_phase(RunContext& run, const Dmdp& dmdp, SolveReport& report,
                         std::uint64_t rounds, double eps, double delta) {
    const ValueVector anchor = report.values;
    const OffsetTable x = exact_offsets(dmdp, anchor);
    const double round_delta = delta / static_cast<double>(rounds);
    for (std::uint64_t l = 0; l < rounds; ++l) {
        Backup b = apx_val(dmdp, report.values, anchor, x, eps, round_delta, run.sampling(), run.next_round());
        run.completed(report, l, b);
        report.values = std::move(b.values);
        report.policy = std::move(b.policy);
    }
}

void sampled_randomized_vi_phase(RunContext& run, const Dmdp& dmdp, SolveReport& report,
                                 std::uint64_t rounds, double eps, double delta) {
    const ValueVector anchor = report.values;
    const OffsetTable x = sampled_offsets(anchor, eps, delta / 2.0, run.sampling(), run.next_round());
    const double round_delta = delta / (2.0 * static_cast<double>(rounds));
    for (std::uint64_t l = 0; l < rounds; ++l) {
        Backup b = apx_val(dmdp, report.values, anchor, x, eps, round_delta, run.sampling(), run.next_round());
        run.completed(report, l, b);
        report.values = std::move(b.values);
        report.policy = std::move(b.policy);
    }
}

void require_improvable(const Dmdp& dmdp, std::span<const double> v, std::span<const ActionIndex> pi) {
    const ValueVector tv = policy_operator(dmdp, pi, v);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (tv[i] < v[i] - kInvariantSlack)
            throw PreconditionError("monotone iteration requires T_pi(v) >= v entry-wise");
}

void sampled_randomized_mon_vi_phase(RunContext& run, const Dmdp& dmdp, SolveReport& report,
                                     std::uint64_t rounds, double eps, double delta) {
    if (run.options().check_invariants) require_improvable(dmdp, report.values, report.policy);

    const ValueVector anchor = report.values;
    // Offsets are built at the accuracy handed to the monotone operator so that
    // its 2 gamma eps shift still yields under-estimates.
    const double step_eps = eps / 2.0;
    const OffsetTable x = sampled_offsets(anchor, step_eps, delta / 2.0, run.sampling(), run.next_round());
    const double round_delta = delta / (2.0 * static_cast<double>(rounds));
    for (std::uint64_t t = 0; t < rounds; ++t) {
        Backup b = apx_mon_val(dmdp, report.values, report.policy, anchor, x, step_eps, round_delta,
                               run.sampling(), run.next_round());
        run.completed(report, t, b);
        report.values = std::move(b.values);
        report.policy = std::move(b.policy);
    }
}

using PhaseFn = void (*)(RunContext&, const Dmdp&, SolveReport&, std::uint64_t, double, double);

/// Shared outer loop: eps_k = eps_0 / 2^k, inner accuracy (1 - gamma) eps_k / (4 gamma).
void halving_schedule(RunContext& run, const Dmdp& dmdp, SolveReport& report, PhaseFn phase,
                      double initial_gap, std::uint64_t phases, std::uint64_t rounds, double delta) {
    const double gamma = dmdp.discount();
    const double phase_delta = delta / static_cast<double>(phases);
    double eps_k = initial_gap;
    for (std::uint64_t k = 1; k <= phases; ++k) {
        eps_k /= 2.0;
        run.begin_phase();
        phase(run, dmdp, report, rounds, (1.0 - gamma) * eps_k / (4.0 * gamma), phase_delta);
        run.end_phase(report);
    }
}

SolveReport trivial_solution(const Dmdp& dmdp, std::string name, ValueVector values) {
    SolveReport report;
    report.algorithm = std::move(name);
    report.values = std::move(values);
    report.policy.assign(dmdp.num_states(), 0);
    return report;
}

} // namespace

std::uint64_t phase_count(double reward_bound, double eps, double discount) {
    const double k = std::ceil(std::log2(reward_bound / (eps * (1.0 - discount))));
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

std::uint64_t rounds_per_phase(double discount) {
    const double l = std::ceil(std::log(4.0 / (1.0 - discount)) / (1.0 - discount));
    return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(l));
}

std::uint64_t naive_rounds(double reward_bound, double eps, double discount) {
    const double g = 1.0 - discount;
    const double l = std::ceil(std::log(2.0 * reward_bound / (g * g * eps)) / g);
    return l < 1.0 ? 1 : static_cast<std::uint64_t>(l);
}

std::uint64_t policy_extraction_rounds(double discount, double eps, double initial_gap) {
    const double l = std::ceil(1.0 + std::log(initial_gap / (2.0 * eps * discount)) / (1.0 - discount));
    return l < 1.0 ? 1 : static_cast<std::uint64_t>(l);
}

double randomized_vi_error_bound(double discount, double eps, std::uint64_t rounds, double initial_gap) {
    const double g = 1.0 - discount;
    return 2.0 * eps * discount / g + std::exp(-static_cast<double>(rounds) * g) * initial_gap;
}

SolveReport randomized_vi(const Dmdp& dmdp, std::span<const double> v0, std::uint64_t rounds,
                          double eps, double delta, const RunOptions& options) {
    check_start(dmdp, v0);
    check_rounds(rounds);
    detail::check_eps_delta(eps, delta);
    return run_solver(dmdp, options, "randomized-vi", ValueVector(v0.begin(), v0.end()),
                      Policy(dmdp.num_states(), 0), [&](RunContext& run, SolveReport& report) {
                          run.begin_phase();
                          randomized_vi_phase(run, dmdp, report, rounds, eps, delta);
                          run.end_phase(report);
                      });
}

SolveReport sampled_randomized_vi(const Dmdp& dmdp, std::span<const double> v0,
                                  std::uint64_t rounds, double eps, double delta,
                                  const RunOptions& options) {
    check_start(dmdp, v0);
    check_rounds(rounds);
    detail::check_eps_delta(eps, delta);
    return run_solver(dmdp, options, "sampled-randomized-vi", ValueVector(v0.begin(), v0.end()),
                      Policy(dmdp.num_states(), 0), [&](RunContext& run, SolveReport& report) {
                          run.begin_phase();
                          sampled_randomized_vi_phase(run, dmdp, report, rounds, eps, delta);
                          run.end_phase(report);
                      });
}

SolveReport sampled_randomized_mon_vi(const Dmdp& dmdp, std::span<const double> v0,
                                      std::span<const ActionIndex> pi0, std::uint64_t rounds,
                                      double eps, double delta, const RunOptions& options) {
    check_start(dmdp, v0);
    check_policy(dmdp, pi0);
    check_rounds(rounds);
    detail::check_eps_delta(eps, delta);
    return run_solver(dmdp, options, "sampled-randomized-mon-vi", ValueVector(v0.begin(), v0.end()),
                      Policy(pi0.begin(), pi0.end()), [&](RunContext& run, SolveReport& report) {
                          run.begin_phase();
                          sampled_randomized_mon_vi_phase(run, dmdp, report, rounds, eps, delta);
                          run.end_phase(report);
                      });
}

SolveReport high_precision_random_vi(const Dmdp& dmdp, const SolveConfig& config) {
    detail::check_eps_delta(config.epsilon, config.delta);
    validate(dmdp);
    const ValueVector zero(dmdp.num_states(), 0.0);
    if (config.epsilon >= dmdp.value_bound()) return trivial_solution(dmdp, "high-precision", zero);

    const auto phases = config.phases.value_or(phase_count(dmdp.reward_bound(), config.epsilon, dmdp.discount()));
    const auto rounds = config.rounds.value_or(rounds_per_phase(dmdp.discount()));
    check_rounds(rounds);
    return run_solver(dmdp, config.run, "high-precision", zero, Policy(dmdp.num_states(), 0),
                      [&](RunContext& run, SolveReport& report) {
                          halving_schedule(run, dmdp, report, randomized_vi_phase, dmdp.value_bound(),
                                           phases, rounds, config.delta);
                      });
}

SolveReport sublinear_random_vi(const Dmdp& dmdp, const SolveConfig& config) {
    detail::check_eps_delta(config.epsilon, config.delta);
    validate(dmdp);
    const ValueVector zero(dmdp.num_states(), 0.0);
    if (config.epsilon >= dmdp.value_bound()) return trivial_solution(dmdp, "sublinear", zero);

    const auto phases = config.phases.value_or(phase_count(dmdp.reward_bound(), config.epsilon, dmdp.discount()));
    const auto rounds = config.rounds.value_or(rounds_per_phase(dmdp.discount()));
    check_rounds(rounds);
    return run_solver(dmdp, config.run, "sublinear", zero, Policy(dmdp.num_states(), 0),
                      [&](RunContext& run, SolveReport& report) {
                          halving_schedule(run, dmdp, report, sampled_randomized_vi_phase,
                                           dmdp.value_bound(), phases, rounds, config.delta);
                      });
}

SolveReport sublinear_random_mon_vi(const Dmdp& dmdp, const SolveConfig& config) {
    detail::check_eps_delta(config.epsilon, config.delta);
    validate(dmdp);
    // v0 = -M/(1-gamma) satisfies T_pi(v0) >= v0 for every pi; the initial gap
    // to v* is then up to 2M/(1-gamma), which costs one extra halving phase.
    const ValueVector floor(dmdp.num_states(), -dmdp.value_bound());
    const double initial_gap = 2.0 * dmdp.value_bound();
    if (config.epsilon >= initial_gap) return trivial_solution(dmdp, "sublinear-mon", floor);

    const auto phases =
        config.phases.value_or(phase_count(dmdp.reward_bound(), config.epsilon, dmdp.discount()) + 1);
    const auto rounds = config.rounds.value_or(rounds_per_phase(dmdp.discount()));
    check_rounds(rounds);
    return run_solver(dmdp, config.run, "sublinear-mon", floor, Policy(dmdp.num_states(), 0),
                      [&](RunContext& run, SolveReport& report) {
                          halving_schedule(run, dmdp, report, sampled_randomized_mon_vi_phase,
                                           initial_gap, phases, rounds, config.delta);
                      });
}

SolveReport naive_randomized_vi(const Dmdp& dmdp, const SolveConfig& config) {
    detail::check_eps_delta(config.epsilon, config.delta);
    validate(dmdp);
    const ValueVector zero(dmdp.num_states(), 0.0);
    if (config.epsilon >= dmdp.value_bound()) return trivial_solution(dmdp, "randomized-vi", zero);

    const double gamma = dmdp.discount();
    const auto rounds = config.rounds.value_or(naive_rounds(dmdp.reward_bound(), config.epsilon, gamma));
    check_rounds(rounds);
    const double eps = (1.0 - gamma) * config.epsilon / (4.0 * gamma);
    return run_solver(dmdp, config.run, "randomized-vi", zero, Policy(dmdp.num_states(), 0),
                      [&](RunContext& run, SolveReport& report) {
                          run.begin_phase();
                          randomized_vi_phase(run, dmdp, report, rounds, eps, config.delta);
                          run.end_phase(report);
                      });
}

PolicyExtraction policy_from_values(const Dmdp& dmdp, std::span<const double> v0, double eps,
                                    double delta, double initial_gap, const RunOptions& options,
                                    bool sampled_offsets) {
    if (!(initial_gap > 0.0)) throw PreconditionError("initial gap bound must be positive");
    const auto rounds = policy_extraction_rounds(dmdp.discount(), eps, initial_gap);
    SolveReport report = sampled_offsets
                             ? sampled_randomized_vi(dmdp, v0, rounds, eps, delta, options)
                             : randomized_vi(dmdp, v0, rounds, eps, delta, options);
    const double g = 1.0 - dmdp.discount();
    Policy policy = report.policy;
    return {std::move(policy), 16.0 * eps / (g * g), std::move(report)};
}

void compare_with_oracle(SolveReport& report, const Dmdp& dmdp, const OptimalSolution& oracle,
                         double tolerance) {
    report.value_error = sup_distance(report.values, oracle.values);
    report.policy_suboptimality = policy_suboptimality(dmdp, oracle.values, report.policy, tolerance);
}

} // namespace vrvi
