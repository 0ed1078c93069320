#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

#include "vrvi/kernel.hpp"
#include "vrvi/solvers.hpp"

namespace vrvi::detail {

/// Round counter, sample tally, budget handling and trace of one solver run.
class RunContext {
public:
    RunContext(const TransitionSampler& sampler, const RunOptions& options)
        : ctx_{sampler, options.seed, SampleTally(options.sample_budget), options.sampling,
               options.threads},
          options_(options), start_(std::chrono::steady_clock::now()) {}

    SamplingContext& sampling() noexcept { return ctx_; }
    const RunOptions& options() const noexcept { return options_; }

    std::uint64_t next_round() noexcept { return round_++; }
    std::uint64_t rounds_started() const noexcept { return round_; }

    void begin_phase() {
        ++phase_;
        phase_start_samples_ = ctx_.tally.total();
    }
    void end_phase(RunTelemetry& t) const {
        t.phase_samples.push_back(ctx_.tally.total() - phase_start_samples_);
    }
    std::uint64_t phase() const noexcept { return phase_; }

    /// Records a completed round in the trace (if enabled) and as the fallback iterate.
    void completed(SolveReport& report, std::uint64_t round_in_phase, const Backup& b) {
        ++report.iterations;
        if (options_.record_trace) report.trace.push_back({phase_, round_in_phase, b.values, b.policy});
    }

    void finish(RunTelemetry& t) const {
        t.total_samples = ctx_.tally.total();
        t.phases = phase_;
        t.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

    void exhausted(RunTelemetry& t, const SampleBudgetExceeded& e) const {
        t.budget_exhausted = true;
        t.samples_required = e.required;
        t.phase_samples.push_back(ctx_.tally.total() - phase_start_samples_);
    }

private:
    SamplingContext ctx_;
    RunOptions options_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t round_ = 0;
    std::uint64_t phase_ = 0;
    std::uint64_t phase_start_samples_ = 0;
};

void check_eps_delta(double eps, double delta);

} // namespace vrvi::detail
