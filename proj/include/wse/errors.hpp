#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wse {

/// Failure of a numerical procedure (eigensolver, factorization), as opposed
/// to invalid input. The CLI maps these to a distinct exit code.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigensolver gave up before reaching the requested tolerance. Carries the
/// best residual achieved for each requested pair.
class EigensolveError : public NumericalError {
public:
    EigensolveError(const std::string& message, std::vector<double> best_residuals)
        : NumericalError(message), best_residuals_(std::move(best_residuals)) {}

    const std::vector<double>& best_residuals() const { return best_residuals_; }

private:
    std::vector<double> best_residuals_;
};

}  // namespace wse
