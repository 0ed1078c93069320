#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vrvi/exact.hpp"
#include "vrvi/kernel.hpp"
#include "vrvi/mdp.hpp"

namespace vrvi {

/// Execution knobs shared by every randomized solver.
struct RunOptions {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    SamplingMode sampling = SamplingMode::per_draw;
    /// Abort (and report) instead of drawing more than this many samples.
    std::optional<std::uint64_t> sample_budget;
    /// Keep every round's (values, policy) in SolveReport::trace.
    bool record_trace = false;
    /// Verify caller preconditions with exact operators (O(nnz) per check).
    bool check_invariants = false;
};

struct SolveConfig {
    double epsilon = 0.1;
    double delta = 0.1;
    /// Overrides for the round count L (or T) and the phase count K.
    std::optional<std::uint64_t> rounds;
    std::optional<std::uint64_t> phases;
    RunOptions run;
};

struct TracePoint {
    std::uint64_t phase = 0;
    std::uint64_t round = 0;
    ValueVector values;
    Policy policy;
};

/// Telemetry common to discounted and finite-horizon runs.
struct RunTelemetry {
    std::string algorithm;
    /// Sampled-operator rounds executed.
    std::uint64_t iterations = 0;
    std::uint64_t phases = 0;
    /// Exact tally of transition samples drawn.
    std::uint64_t total_samples = 0;
    /// Samples per outer phase (per block for finite horizon).
    std::vector<std::uint64_t> phase_samples;
    double wall_ms = 0.0;
    /// Set when RunOptions::sample_budget stopped the run early; the returned
    /// iterate is then the last completed round, and samples_required is a
    /// lower bound on what the full run would have drawn.
    bool budget_exhausted = false;
    std::uint64_t samples_required = 0;
};

struct SolveReport : RunTelemetry {
    ValueVector values;
    Policy policy;
    std::optional<double> value_error;
    std::optional<double> policy_suboptimality;
    std::vector<TracePoint> trace;
};

/// K = ceil(log2(M / (eps (1 - gamma)))), at least 1.
std::uint64_t phase_count(double reward_bound, double eps, double discount);
/// L = ceil(ln(4 / (1 - gamma)) / (1 - gamma)).
std::uint64_t rounds_per_phase(double discount);
/// Rounds of the single-shot scheme: ceil(ln(2M / ((1 - gamma)^2 eps)) / (1 - gamma)).
std::uint64_t naive_rounds(double reward_bound, double eps, double discount);
/// Rounds after which the last policy is 16 eps / (1 - gamma)^2 optimal:
/// ceil(1 + ln(gap / (2 eps gamma)) / (1 - gamma)), at least 1.
std::uint64_t policy_extraction_rounds(double discount, double eps, double initial_gap);
/// 2 eps gamma / (1 - gamma) + exp(-L (1 - gamma)) * gap.
double randomized_vi_error_bound(double discount, double eps, std::uint64_t rounds,
                                 double initial_gap);

/// Exact offsets at v0, then L sampled backups with failure budget delta / L each.
SolveReport randomized_vi(const Dmdp& dmdp, std::span<const double> v0, std::uint64_t rounds,
                          double eps, double delta, const RunOptions& options = {});

/// randomized_vi with sampled offsets; delta is split evenly between the
/// offsets and the rounds.
SolveReport sampled_randomized_vi(const Dmdp& dmdp, std::span<const double> v0,
                                  std::uint64_t rounds, double eps, double delta,
                                  const RunOptions& options = {});

/// Monotone rounds from (v0, pi0): values never decrease and T_pi(v) >= v is
/// preserved with probability >= 1 - delta. Requires T_pi0(v0) >= v0.
SolveReport sampled_randomized_mon_vi(const Dmdp& dmdp, std::span<const double> v0,
                                      std::span<const ActionIndex> pi0, std::uint64_t rounds,
                                      double eps, double delta, const RunOptions& options = {});

/// Halving schedule over randomized_vi from v = 0; eps-optimal values.
SolveReport high_precision_random_vi(const Dmdp& dmdp, const SolveConfig& config);

/// Halving schedule over sampled_randomized_vi; no exact offsets needed.
SolveReport sublinear_random_vi(const Dmdp& dmdp, const SolveConfig& config);

/**
 * Halving schedule over sampled_randomized_mon_vi, started from the
 * under-estimate v = -M/(1-gamma) with pi = 0 and an extra initial phase.
 * The returned policy is eps-optimal with probability >= 1 - delta.
 */
SolveReport sublinear_random_mon_vi(const Dmdp& dmdp, const SolveConfig& config);

/// Single-shot randomized_vi from v0 = 0 calibrated to eps-optimal values.
SolveReport naive_randomized_vi(const Dmdp& dmdp, const SolveConfig& config);

struct PolicyExtraction {
    Policy policy;
    /// Suboptimality guaranteed with probability >= 1 - delta: 16 eps / (1 - gamma)^2.
    double bound = 0.0;
    SolveReport report;
};

/// Runs randomized_vi (or its sampled-offset variant) from v0 for
/// policy_extraction_rounds(gamma, eps, initial_gap) rounds and returns the
/// last policy. initial_gap must bound ||v0 - v*||.
PolicyExtraction policy_from_values(const Dmdp& dmdp, std::span<const double> v0, double eps,
                                    double delta, double initial_gap,
                                    const RunOptions& options = {}, bool sampled_offsets = false);

/// Fills value_error and policy_suboptimality against a precomputed optimum.
void compare_with_oracle(SolveReport& report, const Dmdp& dmdp, const OptimalSolution& oracle,
                         double tolerance);

} // namespace vrvi
