#pragma once

#include <stdexcept>
#include <string>

namespace hyperconn {

// Bad argument to a sampler or formula (out-of-range size, r > n/2, ...).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A domain object or model spec failed its invariants.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rejection sampling for the given-sizes model ran out of attempts.
class retry_budget_error : public std::runtime_error {
public:
    retry_budget_error(const std::string& what, std::size_t attempts,
                       double acceptance_lower, double acceptance_upper)
        : std::runtime_error(what),
          attempts_(attempts),
          acceptance_lower_(acceptance_lower),
          acceptance_upper_(acceptance_upper) {}

    std::size_t attempts() const noexcept { return attempts_; }
    // 1 - c from the distinctness sandwich; may be negative.
    double acceptance_lower() const noexcept { return acceptance_lower_; }
    // e^{-c}
    double acceptance_upper() const noexcept { return acceptance_upper_; }

private:
    std::size_t attempts_;
    double acceptance_lower_;
    double acceptance_upper_;
};

}  // namespace hyperconn
