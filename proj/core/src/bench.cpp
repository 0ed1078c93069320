#include "vrvi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "vrvi/bellman.hpp"
#include "vrvi/exact.hpp"

namespace vrvi {
namespace {

using nlohmann::json;

struct NamedAlgorithm {
    Algorithm algorithm;
    std::string_view name;
};

constexpr NamedAlgorithm kAlgorithms[] = {
    {Algorithm::exact_vi, "exact-vi"},
    {Algorithm::randomized_vi, "randomized-vi"},
    {Algorithm::high_precision, "high-precision"},
    {Algorithm::sublinear, "sublinear"},
    {Algorithm::sublinear_mon, "sublinear-mon"},
    {Algorithm::fh_randomized, "fh-randomized"},
    {Algorithm::fh_variance_reduced, "fh-variance-reduced"},
};

AlgorithmResult from_report(SolveReport&& r) {
    AlgorithmResult out;
    out.values = std::move(r.values);
    out.policy = std::move(r.policy);
    out.telemetry = std::move(static_cast<RunTelemetry&>(r));
    return out;
}

AlgorithmResult from_report(FhSolveReport&& r) {
    AlgorithmResult out;
    out.values = r.solution.values.front();
    out.policy = r.solution.actions.front();
    out.schedule = std::move(r.solution);
    out.telemetry = std::move(static_cast<RunTelemetry&>(r));
    return out;
}

AlgorithmResult run_discounted(Algorithm algorithm, const Dmdp& dmdp, const SolveConfig& config) {
    switch (algorithm) {
    case Algorithm::exact_vi: {
        validate(dmdp);
        const ValueVector zero(dmdp.num_states(), 0.0);
        const auto start = std::chrono::steady_clock::now();
        ExactViResult r = exact_value_iteration(dmdp, zero, config.epsilon);
        AlgorithmResult out;
        out.policy = greedy_policy(dmdp, r.values);
        out.values = std::move(r.values);
        out.telemetry.algorithm = "exact-vi";
        out.telemetry.iterations = r.iterations;
        out.telemetry.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return out;
    }
    case Algorithm::randomized_vi: return from_report(naive_randomized_vi(dmdp, config));
    case Algorithm::high_precision: return from_report(high_precision_random_vi(dmdp, config));
    case Algorithm::sublinear: return from_report(sublinear_random_vi(dmdp, config));
    case Algorithm::sublinear_mon: return from_report(sublinear_random_mon_vi(dmdp, config));
    default: break;
    }
    throw PreconditionError(std::string(algorithm_name(algorithm)) + " needs a finite-horizon instance");
}

AlgorithmResult run_finite(Algorithm algorithm, const FiniteHorizonMdp& fh, const SolveConfig& config,
                           std::optional<std::int64_t> block) {
    const ValueVector terminal(fh.num_states(), 0.0);
    switch (algorithm) {
    case Algorithm::fh_randomized:
        return from_report(randomized_finite_horizon_vi(fh, terminal, fh.horizon(), config.epsilon,
                                                        config.delta, config.run));
    case Algorithm::fh_variance_reduced: {
        const auto l = block.value_or(fh_block_length(config.epsilon, fh.num_states(), fh.horizon(), fh.reward_bound()));
        return from_report(variance_reduced_finite_horizon_vi(fh, fh.horizon(), l, config.epsilon, config.delta,
                                                              config.run));
    }
    default: break;
    }
    throw PreconditionError(std::string(algorithm_name(algorithm)) + " needs a discounted instance");
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::uint64_t effective_samples(const RunTelemetry& t) {
    return t.budget_exhausted ? std::max(t.samples_required, t.total_samples) : t.total_samples;
}

} // namespace

std::string_view algorithm_name(Algorithm algorithm) {
    for (const auto& a : kAlgorithms)
        if (a.algorithm == algorithm) return a.name;
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& a : kAlgorithms)
        if (a.name == name) return a.algorithm;
    throw PreconditionError("unknown algorithm: " + std::string(name));
}

bool is_finite_horizon(Algorithm algorithm) {
    return algorithm == Algorithm::fh_randomized || algorithm == Algorithm::fh_variance_reduced;
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = [] {
        std::vector<Algorithm> v;
        for (const auto& a : kAlgorithms) v.push_back(a.algorithm);
        return v;
    }();
    return all;
}

AlgorithmResult run_algorithm(Algorithm algorithm, const Instance& instance, const SolveConfig& config,
                              std::optional<std::int64_t> block) {
    if (const auto* d = std::get_if<Dmdp>(&instance)) return run_discounted(algorithm, *d, config);
    return run_finite(algorithm, std::get<FiniteHorizonMdp>(instance), config, block);
}

SolutionFile make_solution_file(const AlgorithmResult& result, const Instance& instance,
                                const SolveConfig& config) {
    SolutionFile s;
    s.algorithm = result.telemetry.algorithm;
    s.instance = fingerprint(instance);
    s.epsilon = config.epsilon;
    s.delta = config.delta;
    s.seed = config.run.seed;
    s.iterations = result.telemetry.iterations;
    s.total_samples = result.telemetry.total_samples;
    s.budget_exhausted = result.telemetry.budget_exhausted;
    s.values = result.values;
    s.policy = result.policy;
    s.schedule = result.schedule;
    return s;
}

OracleErrors measure_against_oracle(const Instance& instance, const ValueVector& values,
                                    const Policy& policy, const std::optional<NonStationaryPolicy>& schedule,
                                    double tolerance) {
    OracleErrors out;
    if (const auto* d = std::get_if<Dmdp>(&instance)) {
        if (values.size() != d->num_states()) throw DimensionError("solution values", d->num_states(), values.size());
        const OptimalSolution opt = optimal_oracle(*d, tolerance);
        out.value_error = sup_distance(values, opt.values);
        out.policy_suboptimality = policy_suboptimality(*d, opt.values, policy, tolerance);
        return out;
    }
    const auto& fh = std::get<FiniteHorizonMdp>(instance);
    if (!schedule) throw PreconditionError("finite-horizon verification needs a per-step policy");
    if (schedule->horizon() != static_cast<std::size_t>(fh.horizon()))
        throw DimensionError("policy rows", static_cast<std::size_t>(fh.horizon()), schedule->horizon());
    const ValueVector terminal(fh.num_states(), 0.0);
    const NonStationaryPolicy opt = exact_backward_induction(fh, terminal);
    out.value_error = sup_distance(values, opt.values.front());
    out.policy_suboptimality = nonstationary_suboptimality(fh, opt.values.front(), schedule->actions, terminal);
    return out;
}

std::string bench_record_json(const BenchRecord& r) {
    const auto& t = r.telemetry;
    json doc;
    doc["schema"] = kBenchSchema;
    doc["instance"] = r.instance;
    doc["algorithm"] = r.algorithm;
    doc["num_states"] = r.num_states;
    doc["num_actions"] = r.num_actions;
    doc["discount"] = r.discount;
    doc["horizon"] = r.horizon;
    doc["epsilon"] = r.epsilon;
    doc["delta"] = r.delta;
    doc["seed"] = r.seed;
    doc["trial"] = r.trial;
    doc["cell"] = r.cell;
    doc["iterations"] = t.iterations;
    doc["phases"] = t.phases;
    doc["total_samples"] = t.total_samples;
    doc["phase_samples"] = t.phase_samples;
    doc["wall_ms"] = t.wall_ms;
    doc["budget_exhausted"] = t.budget_exhausted;
    doc["samples_required"] = t.samples_required;
    doc["value_error"] = optional_number(r.value_error);
    doc["policy_suboptimality"] = optional_number(r.policy_suboptimality);
    return doc.dump();
}

BenchRecord make_bench_record(const AlgorithmResult& result, const Instance& instance,
                              const SolveConfig& config, std::optional<OracleErrors> errors) {
    BenchRecord r;
    r.instance = fingerprint(instance);
    r.algorithm = result.telemetry.algorithm;
    const MdpModel& m = model_of(instance);
    r.num_states = m.num_states();
    r.num_actions = m.num_actions();
    if (const auto* d = std::get_if<Dmdp>(&instance)) r.discount = d->discount();
    else r.horizon = std::get<FiniteHorizonMdp>(instance).horizon();
    r.epsilon = config.epsilon;
    r.delta = config.delta;
    r.seed = config.run.seed;
    r.telemetry = result.telemetry;
    if (errors) {
        r.value_error = errors->value_error;
        r.policy_suboptimality = errors->policy_suboptimality;
    }
    return r;
}

SweepSpec parse_sweep(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed sweep file: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("sweep file must hold an object");
    SweepSpec s;
    try {
        if (doc.contains("family")) s.family = parse_family(doc["family"].get<std::string>());
        s.num_actions = doc.value("num_actions", s.num_actions);
        s.support = doc.value("support", s.support);
        s.reward_bound = doc.value("reward_bound", s.reward_bound);
        s.horizon = doc.value("horizon", s.horizon);
        if (doc.contains("block")) s.block = doc["block"].get<std::int64_t>();
        s.discounts = doc.value("discounts", s.discounts);
        s.epsilons = doc.value("epsilons", s.epsilons);
        s.num_states = doc.value("num_states", s.num_states);
        if (doc.contains("algorithms")) {
            s.algorithms.clear();
            for (const auto& name : doc["algorithms"]) s.algorithms.push_back(parse_algorithm(name.get<std::string>()));
        }
        s.trials = doc.value("trials", s.trials);
        s.base_seed = doc.value("base_seed", s.base_seed);
        s.instance_seed = doc.value("instance_seed", s.base_seed);
        s.vary_instance = doc.value("vary_instance", s.vary_instance);
        s.delta = doc.value("delta", s.delta);
        s.oracle_tolerance = doc.value("oracle_tolerance", s.oracle_tolerance);
        if (doc.contains("sample_budget")) s.sample_budget = doc["sample_budget"].get<std::uint64_t>();
        if (doc.contains("sampling")) {
            const auto mode = doc["sampling"].get<std::string>();
            if (mode == "per-draw") s.sampling = SamplingMode::per_draw;
            else if (mode == "multinomial") s.sampling = SamplingMode::multinomial;
            else throw FormatError("sampling must be per-draw or multinomial");
        }
        s.workers = doc.value("workers", s.workers);
    } catch (const json::exception& e) {
        throw FormatError(std::string("bad sweep field: ") + e.what());
    }
    if (s.trials == 0) throw PreconditionError("trials must be positive");
    return s;
}

std::vector<BenchRecord> run_sweep(const SweepSpec& spec) {
    struct Job {
        std::size_t cell;
        std::uint64_t trial;
        double discount;
        double epsilon;
        std::size_t num_states;
        Algorithm algorithm;
    };
    std::vector<Job> jobs;
    std::size_t cell = 0;
    for (double g : spec.discounts)
        for (double e : spec.epsilons)
            for (std::size_t n : spec.num_states)
                for (Algorithm a : spec.algorithms) {
                    for (std::uint64_t t = 0; t < spec.trials; ++t) jobs.push_back({cell, t, g, e, n, a});
                    ++cell;
                }

    std::vector<BenchRecord> records(jobs.size());
    auto run_job = [&](const Job& job) {
        GeneratorSpec gen;
        gen.family = spec.family;
        gen.num_states = job.num_states;
        gen.num_actions = spec.num_actions;
        gen.support = spec.support;
        gen.reward_bound = spec.reward_bound;
        gen.discount = job.discount;
        gen.horizon = spec.horizon;
        gen.seed = spec.instance_seed + (spec.vary_instance ? job.trial : 0);
        const Instance instance = is_finite_horizon(job.algorithm) ? Instance(generate_finite_horizon(gen))
                                                                    : Instance(generate(gen));
        SolveConfig config;
        config.epsilon = job.epsilon;
        config.delta = spec.delta;
        config.run.seed = spec.base_seed + job.trial;
        config.run.sampling = spec.sampling;
        config.run.sample_budget = spec.sample_budget;
        const AlgorithmResult result = run_algorithm(job.algorithm, instance, config, spec.block);
        const OracleErrors errors =
            measure_against_oracle(instance, result.values, result.policy, result.schedule, spec.oracle_tolerance);
        BenchRecord r = make_bench_record(result, instance, config, errors);
        r.trial = job.trial;
        r.cell = job.cell;
        return r;
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(spec.workers, static_cast<unsigned>(jobs.size())));
    if (workers == 1) {
        for (std::size_t k = 0; k < jobs.size(); ++k) records[k] = run_job(jobs[k]);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < jobs.size(); k = next++) {
                    try {
                        records[k] = run_job(jobs[k]);
                    } catch (...) {
                        std::lock_guard lock(failure_lock);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
    std::map<std::size_t, SummaryRow> by_cell;
    std::map<std::size_t, double> sample_sums;
    for (const auto& r : records) {
        SummaryRow& row = by_cell[r.cell];
        row.algorithm = r.algorithm;
        row.num_states = r.num_states;
        row.discount = r.discount;
        row.epsilon = r.epsilon;
        ++row.runs;
        if (r.value_error && *r.value_error <= r.epsilon) row.value_success_rate += 1.0;
        if (r.policy_suboptimality && *r.policy_suboptimality <= r.epsilon) row.policy_success_rate += 1.0;
        if (r.telemetry.budget_exhausted) ++row.capped_runs;
        sample_sums[r.cell] += static_cast<double>(effective_samples(r.telemetry));
    }
    std::vector<SummaryRow> rows;
    for (auto& [c, row] : by_cell) {
        const auto n = static_cast<double>(row.runs);
        row.value_success_rate /= n;
        row.policy_success_rate /= n;
        row.mean_samples = sample_sums[c] / n;
        rows.push_back(row);
    }
    using Group = std::tuple<std::size_t, double, double>;
    std::map<Group, double> baseline;
    for (const auto& row : rows)
        if (row.algorithm == algorithm_name(Algorithm::randomized_vi))
            baseline[{row.num_states, row.discount, row.epsilon}] = row.mean_samples;
    for (auto& row : rows) {
        const auto it = baseline.find({row.num_states, row.discount, row.epsilon});
        if (it != baseline.end() && it->second > 0.0) row.sample_ratio = row.mean_samples / it->second;
    }
    return rows;
}

std::string format_summary(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %6s %7s %9s %5s %8s %8s %14s %7s\n", "algorithm", "states", "gamma",
                  "epsilon", "runs", "value_ok", "policy_ok", "mean_samples", "ratio");
    out << line;
    for (const auto& r : rows) {
        char ratio[32] = "-";
        if (r.sample_ratio) std::snprintf(ratio, sizeof ratio, "%.4f", *r.sample_ratio);
        std::snprintf(line, sizeof line, "%-20s %6zu %7.4g %9.4g %5zu %8.2f %8.2f %s%13.6g %7s\n", r.algorithm.c_str(),
                      r.num_states, r.discount, r.epsilon, r.runs, r.value_success_rate, r.policy_success_rate,
                      r.capped_runs > 0 ? ">" : " ", r.mean_samples, ratio);
        out << line;
    }
    return out.str();
}

} // namespace vrvi
