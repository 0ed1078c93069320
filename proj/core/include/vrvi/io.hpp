#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "vrvi/finite_horizon.hpp"
#include "vrvi/mdp.hpp"

namespace vrvi {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File content is not a well-formed instance or solution document.
class FormatError : public IoError {
public:
    using IoError::IoError;
};

using Instance = std::variant<Dmdp, FiniteHorizonMdp>;

/**
 * Instance document:
 *   {"format": "vrvi.instance", "version": 1, "num_states": n, "num_actions": k,
 *    "discount": g  |  "horizon": H, "reward_bound": M,
 *    "rewards": [[r_0(0), ..., r_{k-1}(0)], ...],
 *    "transitions": [{"state": i, "action": a, "probs": [[j, p], ...]}, ...]}
 *
 * Parsing validates the model. A missing (state, action) record raises
 * MissingTransitionError; malformed JSON or fields raise FormatError.
 */
Instance parse_instance(std::string_view text);
Instance read_instance(const std::filesystem::path& path);

std::string instance_to_string(const Dmdp& dmdp);
std::string instance_to_string(const FiniteHorizonMdp& fh);
std::string instance_to_string(const Instance& instance);

std::string fingerprint(const Instance& instance);
const MdpModel& model_of(const Instance& instance);

/// Output of one solver run, as written by `vrvi solve`.
struct SolutionFile {
    std::string algorithm;
    std::string instance;
    double epsilon = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t iterations = 0;
    std::uint64_t total_samples = 0;
    bool budget_exhausted = false;
    /// Stationary solution.
    ValueVector values;
    Policy policy;
    /// Finite-horizon solution; values/policy then hold step 0.
    std::optional<NonStationaryPolicy> schedule;
};

std::string solution_to_string(const SolutionFile& solution);
SolutionFile parse_solution(std::string_view text);
SolutionFile read_solution(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace vrvi
