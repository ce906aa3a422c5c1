#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracturb {

/// Argument outside the mathematical domain of an operation (e.g. beta > 2).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller misuse: mismatched grids, empty inputs, too few samples.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Moment estimator asked for a moment that does not exist for the data.
class EstimatorValidityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Power-law fit requested over a window with nonpositive or too few values.
class FitDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Time step violates the advective CFL bound.
class StepSizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite values appeared during a run.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration rejected. Carries every problem found, not just the first.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::invalid_argument(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& s : items) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

} // namespace fracturb
