#include "vrvi/errors.hpp"

#include <sstream>

namespace vrvi {
namespace {

template <class... Args>
std::string concat(const Args&... args) {
    std::ostringstream out;
    out.precision(17);
    (out << ... << args);
    return out.str();
}

} // namespace

NegativeProbabilityError::NegativeProbabilityError(std::size_t s, std::size_t a, std::size_t j,
                                                   double p)
    : ModelError(concat("negative transition probability ", p, " at (state ", s, ", action ", a,
                        ") -> ", j)),
      state(s), action(a), next(j), prob(p) {}

RowSumError::RowSumError(std::size_t s, std::size_t a, double total)
    : ModelError(concat("transition row (state ", s, ", action ", a, ") sums to ", total)),
      state(s), action(a), sum(total) {}

RewardBoundError::RewardBoundError(std::size_t s, std::size_t a, double r, double m)
    : ModelError(concat("reward ", r, " at (state ", s, ", action ", a, ") exceeds bound ", m)),
      state(s), action(a), reward(r), bound(m) {}

RewardBoundError::RewardBoundError(double m)
    : ModelError(concat("reward bound must be positive and finite, got ", m)), bound(m) {}

DiscountRangeError::DiscountRangeError(double g)
    : ModelError(concat("discount must lie strictly inside (0, 1), got ", g)), discount(g) {}

StateIndexError::StateIndexError(std::size_t s, std::size_t a, std::size_t j, std::size_t n)
    : ModelError(concat("transition (state ", s, ", action ", a, ") -> ", j,
                        " is out of range for ", n, " states")),
      state(s), action(a), next(j) {}

HorizonError::HorizonError(std::int64_t h)
    : ModelError(concat("horizon must be at least 1, got ", h)), horizon(h) {}

MissingTransitionError::MissingTransitionError(std::size_t s, std::size_t a)
    : ModelError(concat("missing transition record for (state ", s, ", action ", a, ")")),
      state(s), action(a) {}

DimensionError::DimensionError(const std::string& what, std::size_t e, std::size_t g)
    : std::invalid_argument(concat(what, ": expected length ", e, ", got ", g)),
      expected(e), got(g) {}

IterationLimitError::IterationLimitError(std::uint64_t n)
    : std::runtime_error(concat("iteration limit of ", n, " exceeded")), limit(n) {}

SampleBudgetExceeded::SampleBudgetExceeded(std::uint64_t b, std::uint64_t r)
    : std::runtime_error(concat("sample budget ", b, " exceeded (", r, " required)")),
      budget(b), required(r) {}

} // namespace vrvi
