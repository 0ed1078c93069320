// vrvi: generate instances, run solvers, verify solutions and run sweeps.
//
// Exit codes: 0 ok, 2 usage, 3 validation, 4 I/O, 5 verification failure.
// Errors are reported as one JSON object per line on stderr.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vrvi/bench.hpp"
#include "vrvi/io.hpp"
#include "vrvi/lp.hpp"

namespace {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 2, kValidation = 3, kIo = 4, kVerification = 5 };

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void report_error(const char* kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    vrvi::write_text_file(path, text);
}

struct GenArgs {
    std::string family = "dense-random";
    std::size_t states = 10;
    std::size_t actions = 2;
    std::size_t support = 3;
    double reward_bound = 1.0;
    std::optional<double> discount;
    std::optional<std::int64_t> horizon;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenArgs& a) {
    vrvi::GeneratorSpec spec;
    spec.family = vrvi::parse_family(a.family);
    spec.num_states = a.states;
    spec.num_actions = a.actions;
    spec.support = a.support;
    spec.reward_bound = a.reward_bound;
    spec.seed = a.seed;
    if (a.horizon) {
        spec.horizon = *a.horizon;
        write_output(a.out, vrvi::instance_to_string(vrvi::generate_finite_horizon(spec)));
    } else {
        spec.discount = a.discount.value_or(0.9);
        write_output(a.out, vrvi::instance_to_string(vrvi::generate(spec)));
    }
    return kOk;
}

struct SolveArgs {
    std::string instance;
    std::string algorithm;
    double epsilon = 0.1;
    double delta = 0.1;
    std::uint64_t seed = 0;
    std::optional<std::int64_t> block;
    std::optional<std::uint64_t> rounds;
    std::optional<std::uint64_t> phases;
    unsigned threads = 1;
    std::string sampling = "per-draw";
    std::optional<std::uint64_t> sample_budget;
    std::optional<double> oracle_tolerance;
    std::string out;
};

int run_solve(const SolveArgs& a) {
    const vrvi::Algorithm algorithm = vrvi::parse_algorithm(a.algorithm);
    const vrvi::Instance instance = vrvi::read_instance(a.instance);
    vrvi::SolveConfig config;
    config.epsilon = a.epsilon;
    config.delta = a.delta;
    config.rounds = a.rounds;
    config.phases = a.phases;
    config.run.seed = a.seed;
    config.run.threads = a.threads;
    config.run.sampling = a.sampling == "multinomial" ? vrvi::SamplingMode::multinomial : vrvi::SamplingMode::per_draw;
    config.run.sample_budget = a.sample_budget;

    const vrvi::AlgorithmResult result = vrvi::run_algorithm(algorithm, instance, config, a.block);
    const vrvi::SolutionFile solution = vrvi::make_solution_file(result, instance, config);
    std::optional<vrvi::OracleErrors> errors;
    if (a.oracle_tolerance)
        errors = vrvi::measure_against_oracle(instance, result.values, result.policy, result.schedule,
                                              *a.oracle_tolerance);
    if (!a.out.empty()) vrvi::write_text_file(a.out, vrvi::solution_to_string(solution));
    std::cout << vrvi::bench_record_json(vrvi::make_bench_record(result, instance, config, errors)) << '\n';
    return kOk;
}

struct VerifyArgs {
    std::string instance;
    std::string solution;
    double oracle_tolerance = 1e-9;
    std::optional<double> max_value_error;
    std::optional<double> max_suboptimality;
};

int run_verify(const VerifyArgs& a) {
    const vrvi::Instance instance = vrvi::read_instance(a.instance);
    const vrvi::SolutionFile solution = vrvi::read_solution(a.solution);
    const std::string fp = vrvi::fingerprint(instance);
    if (solution.instance != fp)
        throw VerificationFailure("solution was produced for instance " + solution.instance + ", not " + fp);
    vrvi::check_policy(vrvi::model_of(instance), solution.policy);

    const vrvi::OracleErrors errors = vrvi::measure_against_oracle(instance, solution.values, solution.policy,
                                                                   solution.schedule, a.oracle_tolerance);
    json report{{"instance", fp},
                {"algorithm", solution.algorithm},
                {"value_error", errors.value_error},
                {"policy_suboptimality", errors.policy_suboptimality}};
    if (const auto* d = std::get_if<vrvi::Dmdp>(&instance)) {
        const vrvi::DmdpLp lp = vrvi::build_lp(*d);
        const auto opt = vrvi::optimal_oracle(*d, a.oracle_tolerance / static_cast<double>(d->num_states()));
        double total = 0.0;
        for (double v : opt.values) total += v;
        const double eps = a.max_value_error.value_or(a.oracle_tolerance);
        const vrvi::LpCheck check = vrvi::check_lp_solution(lp, solution.values, total, eps);
        report["lp"] = {{"max_violation", check.max_violation},
                        {"objective_gap", check.objective_gap},
                        {"epsilon", eps},
                        {"approximate_solution", check.ok}};
    }
    bool ok = true;
    if (a.max_value_error && errors.value_error > *a.max_value_error) ok = false;
    if (a.max_suboptimality && errors.policy_suboptimality > *a.max_suboptimality) ok = false;
    report["ok"] = ok;
    std::cout << report.dump() << '\n';
    if (!ok) throw VerificationFailure("solution exceeds the requested error thresholds");
    return kOk;
}

struct BenchArgs {
    std::string sweep;
    std::optional<unsigned> workers;
    std::string summary;
};

int run_bench(const BenchArgs& a) {
    vrvi::SweepSpec spec = vrvi::parse_sweep(vrvi::read_text_file(a.sweep));
    if (a.workers) spec.workers = *a.workers;
    const auto records = vrvi::run_sweep(spec);
    for (const auto& r : records) std::cout << vrvi::bench_record_json(r) << '\n';
    std::cout.flush();
    const std::string table = vrvi::format_summary(vrvi::summarize(records));
    if (a.summary.empty()) std::cerr << table;
    else vrvi::write_text_file(a.summary, table);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variance-reduced randomized value iteration toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a seeded instance");
    gen_cmd->add_option("--family", gen.family, "dense-random | sparse-random | chain | tree")
        ->check(CLI::IsMember({"dense-random", "sparse-random", "chain", "tree"}));
    gen_cmd->add_option("--states", gen.states)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 31));
    gen_cmd->add_option("--actions", gen.actions)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--support", gen.support, "row support size (sparse-random)")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--reward-bound", gen.reward_bound)->check(CLI::PositiveNumber);
    auto* discount_opt = gen_cmd->add_option("--discount", gen.discount)->check(CLI::Range(0.0, 1.0));
    gen_cmd->add_option("--horizon", gen.horizon, "write a finite-horizon instance")
        ->check(CLI::PositiveNumber)
        ->excludes(discount_opt);
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("-o,--out", gen.out, "output file (default stdout)");

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Run one solver; prints a bench record");
    solve_cmd->add_option("-i,--instance", solve.instance)->required();
    std::vector<std::string> names;
    for (auto alg : vrvi::all_algorithms()) names.emplace_back(vrvi::algorithm_name(alg));
    solve_cmd->add_option("-a,--algorithm", solve.algorithm)->required()->check(CLI::IsMember(names));
    solve_cmd->add_option("--epsilon", solve.epsilon)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--delta", solve.delta)->check(CLI::Range(0.0, 1.0));
    solve_cmd->add_option("--seed", solve.seed);
    solve_cmd->add_option("--block", solve.block, "block length for fh-variance-reduced")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--rounds", solve.rounds, "override rounds per phase")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--phases", solve.phases, "override phase count")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--threads", solve.threads)->check(CLI::PositiveNumber);
    solve_cmd->add_option("--sampling", solve.sampling)->check(CLI::IsMember({"per-draw", "multinomial"}));
    solve_cmd->add_option("--sample-budget", solve.sample_budget);
    solve_cmd->add_option("--oracle-tolerance", solve.oracle_tolerance, "also measure errors against the exact optimum")
        ->check(CLI::PositiveNumber);
    solve_cmd->add_option("-o,--out", solve.out, "solution file");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Measure a solution against the exact optimum");
    verify_cmd->add_option("-i,--instance", verify.instance)->required();
    verify_cmd->add_option("-s,--solution", verify.solution)->required();
    verify_cmd->add_option("--oracle-tolerance", verify.oracle_tolerance)->check(CLI::PositiveNumber);
    verify_cmd->add_option("--max-value-error", verify.max_value_error)->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--max-suboptimality", verify.max_suboptimality)->check(CLI::NonNegativeNumber);

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a sweep; records on stdout, summary on stderr");
    bench_cmd->add_option("--sweep", bench.sweep)->required();
    bench_cmd->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--summary", bench.summary, "write the summary table here instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error("usage", e.what());
        return kUsage;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*solve_cmd) return run_solve(solve);
        if (*verify_cmd) return run_verify(verify);
        if (*bench_cmd) return run_bench(bench);
    } catch (const VerificationFailure& e) {
        report_error("verification", e.what());
        return kVerification;
    } catch (const vrvi::ModelError& e) {
        report_error("validation", e.what());
        return kValidation;
    } catch (const vrvi::IoError& e) {
        report_error("io", e.what());
        return kIo;
    } catch (const std::invalid_argument& e) {
        report_error("usage", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        report_error("internal", e.what());
        return 1;
    }
    return kUsage;
}
