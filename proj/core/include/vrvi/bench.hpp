#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vrvi/finite_horizon.hpp"
#include "vrvi/generate.hpp"
#include "vrvi/io.hpp"
#include "vrvi/solvers.hpp"

namespace vrvi {

enum class Algorithm {
    exact_vi,
    randomized_vi,
    high_precision,
    sublinear,
    sublinear_mon,
    fh_randomized,
    fh_variance_reduced,
};

std::string_view algorithm_name(Algorithm algorithm);
/// Throws PreconditionError on an unknown name.
Algorithm parse_algorithm(std::string_view name);
bool is_finite_horizon(Algorithm algorithm);
const std::vector<Algorithm>& all_algorithms();

struct AlgorithmResult {
    RunTelemetry telemetry;
    ValueVector values;
    Policy policy;
    std::optional<NonStationaryPolicy> schedule;
};

/**
 * Runs one algorithm with its default schedule. exact-vi solves to
 * config.epsilon; randomized-vi is the single-phase scheme from v = 0;
 * fh-variance-reduced uses `block` or fh_block_length(). Finite-horizon
 * algorithms run over the instance horizon from terminal value 0.
 */
AlgorithmResult run_algorithm(Algorithm algorithm, const Instance& instance, const SolveConfig& config,
                              std::optional<std::int64_t> block = std::nullopt);

SolutionFile make_solution_file(const AlgorithmResult& result, const Instance& instance,
                                const SolveConfig& config);

struct OracleErrors {
    double value_error = 0.0;
    double policy_suboptimality = 0.0;
};

/// Value error and policy suboptimality against optimal_oracle (discounted)
/// or exact_backward_induction (finite horizon, measured at step 0).
OracleErrors measure_against_oracle(const Instance& instance, const ValueVector& values,
                                    const Policy& policy, const std::optional<NonStationaryPolicy>& schedule,
                                    double tolerance);

inline constexpr std::string_view kBenchSchema = "vrvi.bench/1";

struct BenchRecord {
    std::string instance;
    std::string algorithm;
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    double discount = 0.0;
    std::int64_t horizon = 0;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::size_t cell = 0;
    RunTelemetry telemetry;
    std::optional<double> value_error;
    std::optional<double> policy_suboptimality;
};

/// One JSON object on a single line, without a trailing newline.
std::string bench_record_json(const BenchRecord& record);

BenchRecord make_bench_record(const AlgorithmResult& result, const Instance& instance,
                              const SolveConfig& config, std::optional<OracleErrors> errors);

/// Grid of (discount, epsilon, |S|, algorithm) cells, each run `trials` times
/// with solver seed base_seed + trial.
struct SweepSpec {
    InstanceFamily family = InstanceFamily::dense_random;
    std::size_t num_actions = 4;
    std::size_t support = 3;
    double reward_bound = 1.0;
    std::int64_t horizon = 10;
    std::optional<std::int64_t> block;
    std::vector<double> discounts{0.9};
    std::vector<double> epsilons{0.1};
    std::vector<std::size_t> num_states{30};
    std::vector<Algorithm> algorithms{Algorithm::high_precision};
    std::size_t trials = 10;
    std::uint64_t base_seed = 0;
    std::uint64_t instance_seed = 0;
    /// Draw a fresh instance per trial (seed instance_seed + trial).
    bool vary_instance = false;
    double delta = 0.1;
    double oracle_tolerance = 1e-9;
    std::optional<std::uint64_t> sample_budget;
    SamplingMode sampling = SamplingMode::per_draw;
    unsigned workers = 1;
};

/// Reads a JSON sweep file; absent keys keep their defaults.
SweepSpec parse_sweep(std::string_view text);

/// Records ordered by cell, then trial, independent of `workers`.
std::vector<BenchRecord> run_sweep(const SweepSpec& spec);

struct SummaryRow {
    std::string algorithm;
    std::size_t num_states = 0;
    double discount = 0.0;
    double epsilon = 0.0;
    std::size_t runs = 0;
    double value_success_rate = 0.0;
    double policy_success_rate = 0.0;
    /// Mean of total_samples, or of samples_required for budget-capped runs.
    double mean_samples = 0.0;
    std::size_t capped_runs = 0;
    /// mean_samples / mean_samples of randomized-vi in the same (|S|, gamma, eps) group.
    std::optional<double> sample_ratio;
};

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);
std::string format_summary(const std::vector<SummaryRow>& rows);

} // namespace vrvi
