#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace vrvi {

/// Base class for every violation of the model assumptions (stochastic rows,
/// bounded rewards, discount range). Thrown by validate().
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NegativeProbabilityError : public ModelError {
public:
    NegativeProbabilityError(std::size_t state, std::size_t action, std::size_t next, double prob);
    std::size_t state, action, next;
    double prob;
};

class RowSumError : public ModelError {
public:
    RowSumError(std::size_t state, std::size_t action, double sum);
    std::size_t state, action;
    double sum;
};

class RewardBoundError : public ModelError {
public:
    RewardBoundError(std::size_t state, std::size_t action, double reward, double bound);
    /// Raised for a non-positive bound as well; state/action are then meaningless.
    explicit RewardBoundError(double bound);
    std::size_t state = 0, action = 0;
    double reward = 0.0, bound;
};

class DiscountRangeError : public ModelError {
public:
    explicit DiscountRangeError(double discount);
    double discount;
};

class StateIndexError : public ModelError {
public:
    StateIndexError(std::size_t state, std::size_t action, std::size_t next, std::size_t num_states);
    std::size_t state, action, next;
};

class HorizonError : public ModelError {
public:
    explicit HorizonError(std::int64_t horizon);
    std::int64_t horizon;
};

/// A (state, action) pair without a transition record in an instance file.
class MissingTransitionError : public ModelError {
public:
    MissingTransitionError(std::size_t state, std::size_t action);
    std::size_t state, action;
};

class DimensionError : public std::invalid_argument {
public:
    DimensionError(const std::string& what, std::size_t expected, std::size_t got);
    std::size_t expected, got;
};

/// Caller-side contract violations (eps <= 0, delta outside (0,1), bad policy index...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IterationLimitError : public std::runtime_error {
public:
    explicit IterationLimitError(std::uint64_t limit);
    std::uint64_t limit;
};

/// Thrown by SampleTally::charge when a draw would exceed the configured budget.
/// `required` is the tally that the refused request would have produced.
class SampleBudgetExceeded : public std::runtime_error {
public:
    SampleBudgetExceeded(std::uint64_t budget, std::uint64_t required);
    std::uint64_t budget, required;
};

} // namespace vrvi
